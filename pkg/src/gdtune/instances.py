"""Problem instances: random polynomials, small network losses and their file format."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded, DimensionError, ParseError
from .objective import PwPolyObjective
from .polynomials import MultiPoly, as_fraction, format_rational, parse_rational

LATTICE_DENOMINATOR = 2**16
MAX_NET_BOUNDARIES = 16
ACTIVATIONS = ("relu", "sigmoid", "tanh")
FAMILIES = ("random_poly", "net_mse", "scalar_quadratic")


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def lattice_draw(rng: np.random.Generator, lo, hi, denominator: int = LATTICE_DENOMINATOR) -> Fraction:
    """Uniform draw from {k / denominator} within [lo, hi]."""
    lo, hi = as_fraction(lo), as_fraction(hi)
    a = math.ceil(lo * denominator)
    b = math.floor(hi * denominator)
    if a > b:
        raise ValueError(f"no lattice point with denominator {denominator} in [{lo}, {hi}]")
    return Fraction(int(rng.integers(a, b, endpoint=True)), denominator)


def monomials(d: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree <= degree, low degree first."""
    out = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(d), total):
            e = [0] * d
            for j in combo:
                e[j] += 1
            out.append(tuple(e))
    return sorted(set(out), key=lambda e: (sum(e), tuple(-k for k in e)))


def gen_random_poly(d: int, degree: int, coeff_range, seed,
                    denominator: int = LATTICE_DENOMINATOR) -> MultiPoly:
    """Polynomial whose every monomial of degree <= ``degree`` gets a lattice coefficient."""
    if d < 1 or degree < 0:
        raise ValueError("need d >= 1 and degree >= 0")
    rng = _rng(seed)
    lo, hi = coeff_range
    return MultiPoly(d, [(e, lattice_draw(rng, lo, hi, denominator))
                         for e in monomials(d, degree)])


def gen_random_pwpoly(d: int, degree: int, p: int, coeff_range, seed,
                      boundary_degree: int = 1,
                      denominator: int = LATTICE_DENOMINATOR) -> PwPolyObjective:
    """Random piecewise polynomial with ``p`` random boundaries and a random piece per sign vector."""
    rng = _rng(seed)
    if p == 0:
        return PwPolyObjective.polynomial(gen_random_poly(d, degree, coeff_range, rng, denominator))
    boundaries = [gen_random_poly(d, boundary_degree, coeff_range, rng, denominator)
                  for _ in range(p)]
    pieces = {"".join(s): gen_random_poly(d, degree, coeff_range, rng, denominator)
              for s in itertools.product("+-", repeat=p)}
    return PwPolyObjective(d, boundaries, pieces)


# --- networks ---------------------------------------------------------------


@dataclass(frozen=True)
class NetSpec:
    """Single-hidden-layer network without biases and with a linear readout.

    ``widths`` is ``[n_in, n_hidden]`` (one output) or ``[n_in, n_hidden, n_out]``.
    Weights are numbered row-major: first-layer weight (u, j) is ``u*n_in + j``,
    readout weight (k, u) follows at ``n_hidden*n_in + k*n_hidden + u``.
    ``free`` lists the trainable weight indices, ``frozen`` the values of all
    other weights in index order.
    """

    widths: tuple[int, ...]
    activation: str
    data: tuple[tuple[tuple[Fraction, ...], tuple[Fraction, ...]], ...]
    free: tuple[int, ...]
    frozen: tuple[Fraction, ...]
    regularizer: MultiPoly | None = None

    def __post_init__(self):
        if len(self.widths) not in (2, 3) or any(w < 1 for w in self.widths):
            raise ValueError("widths must be [n_in, n_hidden] or [n_in, n_hidden, n_out]")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if not self.data:
            raise ValueError("dataset is empty")
        for x, y in self.data:
            if len(x) != self.n_in or len(y) != self.n_out:
                raise DimensionError("data point does not match the layer widths")
        if len(set(self.free)) != len(self.free) or not self.free:
            raise ValueError("free weights must be distinct and nonempty")
        if any(not 0 <= k < self.n_weights for k in self.free):
            raise IndexError("free weight index out of range")
        if len(self.frozen) != self.n_weights - len(self.free):
            raise ValueError(f"expected {self.n_weights - len(self.free)} frozen values")
        if self.regularizer is not None and self.regularizer.dim != len(self.free):
            raise DimensionError("regularizer must be a polynomial in the free weights")

    @property
    def n_in(self) -> int:
        return self.widths[0]

    @property
    def n_hidden(self) -> int:
        return self.widths[1]

    @property
    def n_out(self) -> int:
        return self.widths[2] if len(self.widths) == 3 else 1

    @property
    def n_weights(self) -> int:
        return self.n_hidden * (self.n_in + self.n_out)

    @property
    def dim(self) -> int:
        return len(self.free)

    def full_weights(self, free_values) -> list:
        """Interleave free values with frozen ones into the full weight vector."""
        pos = {k: i for i, k in enumerate(self.free)}
        frozen = iter(self.frozen)
        return [free_values[pos[k]] if k in pos else next(frozen) for k in range(self.n_weights)]

    def _layers(self, w):
        n_in, n_h = self.n_in, self.n_hidden
        W1 = [w[u * n_in:(u + 1) * n_in] for u in range(n_h)]
        off = n_h * n_in
        W2 = [w[off + k * n_h: off + (k + 1) * n_h] for k in range(self.n_out)]
        return W1, W2

    def loss_exact(self, free_values) -> Fraction:
        """Forward-pass MSE at exact free weights (relu only)."""
        if self.activation != "relu":
            raise ValueError("exact loss needs a relu network")
        vals = [as_fraction(v) for v in free_values]
        W1, W2 = self._layers(self.full_weights(vals))
        total = Fraction(0)
        for x, y in self.data:
            h = [max(Fraction(0), sum((a * b for a, b in zip(row, x)), Fraction(0))) for row in W1]
            for k, row in enumerate(W2):
                total += (sum((a * b for a, b in zip(row, h)), Fraction(0)) - y[k]) ** 2
        total /= len(self.data)
        if self.regularizer is not None:
            total += self.regularizer(vals)
        return total

    def to_record(self) -> dict:
        rec = {
            "widths": list(self.widths),
            "activation": self.activation,
            "data": [{"x": [format_rational(v) for v in x], "y": [format_rational(v) for v in y]}
                     for x, y in self.data],
            "free": list(self.free),
            "frozen": [format_rational(v) for v in self.frozen],
        }
        if self.regularizer is not None:
            rec["regularizer"] = self.regularizer.to_terms()
        return rec

    @classmethod
    def from_record(cls, rec, where="net") -> "NetSpec":
        if not isinstance(rec, dict):
            raise ParseError("expected an object", field=where)
        widths = _int_list(_get(rec, "widths", where), f"{where}.widths")
        act = _get(rec, "activation", where)
        if act not in ACTIVATIONS:
            raise ParseError(f"unknown activation {act!r}", field=f"{where}.activation")
        data = []
        for k, pt in enumerate(_get(rec, "data", where)):
            f = f"{where}.data[{k}]"
            if not isinstance(pt, dict):
                raise ParseError("data point must be an object with 'x' and 'y'", field=f)
            data.append((tuple(_rat_list(_get(pt, "x", f), f + ".x")),
                         tuple(_rat_list(_get(pt, "y", f), f + ".y"))))
        free = _int_list(_get(rec, "free", where), f"{where}.free")
        frozen = _rat_list(_get(rec, "frozen", where), f"{where}.frozen")
        reg = rec.get("regularizer")
        reg = MultiPoly.from_terms(len(free), reg, f"{where}.regularizer") if reg is not None else None
        try:
            return cls(tuple(widths), act, tuple(data), tuple(free), tuple(frozen), reg)
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), field=where) from None


class SmoothNet:
    """Float-only MSE objective of a sigmoid/tanh network in its free weights."""

    def __init__(self, spec: NetSpec):
        if spec.activation == "relu":
            raise ValueError("use the exact objective for relu networks")
        self.spec = spec
        self.dim = spec.dim
        self._X = np.array([[float(v) for v in x] for x, _ in spec.data])
        self._Y = np.array([[float(v) for v in y] for _, y in spec.data])
        self._free = np.array(spec.free)
        base = np.zeros(spec.n_weights)
        mask = np.ones(spec.n_weights, dtype=bool)
        mask[self._free] = False
        base[mask] = [float(v) for v in spec.frozen]
        self._base = base

    def _act(self, a):
        if self.spec.activation == "tanh":
            h = np.tanh(a)
            return h, 1.0 - h * h
        h = 0.5 * (1.0 + np.tanh(0.5 * a))  # overflow-free logistic
        return h, h * (1.0 - h)

    def _forward(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        W = np.tile(self._base, (X.shape[0], 1))
        W[:, self._free] = X
        s = self.spec
        W1 = W[:, : s.n_hidden * s.n_in].reshape(-1, s.n_hidden, s.n_in)
        W2 = W[:, s.n_hidden * s.n_in:].reshape(-1, s.n_out, s.n_hidden)
        A = np.einsum("buj,sj->bsu", W1, self._X)
        Hd, dH = self._act(A)
        R = np.einsum("bku,bsu->bsk", W2, Hd) - self._Y
        return X, W1, W2, Hd, dH, R

    def value_batch(self, X) -> np.ndarray:
        X, _, _, _, _, R = self._forward(X)
        out = (R**2).sum(axis=(1, 2)) / len(self._X)
        if self.spec.regularizer is not None:
            out = out + self.spec.regularizer.eval_float(X)
        return out

    def grad_batch(self, X) -> np.ndarray:
        X, W1, W2, Hd, dH, R = self._forward(X)
        n = len(self._X)
        g2 = 2.0 / n * np.einsum("bsk,bsu->bku", R, Hd)
        back = np.einsum("bsk,bku->bsu", R, W2) * dH
        g1 = 2.0 / n * np.einsum("bsu,sj->buj", back, self._X)
        full = np.concatenate([g1.reshape(len(X), -1), g2.reshape(len(X), -1)], axis=1)
        out = full[:, self._free]
        if self.spec.regularizer is not None:
            out = out + np.stack([g.eval_float(X) for g in self.spec.regularizer.gradient], axis=1)
        return out

    def __repr__(self):
        return f"SmoothNet({self.spec.activation}, widths={list(self.spec.widths)}, d={self.dim})"


def _relu_objective(spec: NetSpec, cap: int) -> PwPolyObjective:
    d = spec.dim
    w = spec.full_weights([MultiPoly.variable(j, d) for j in range(d)])
    w = [v if isinstance(v, MultiPoly) else MultiPoly.constant(v, d) for v in w]
    W1, W2 = spec._layers(w)
    boundaries: list[MultiPoly] = []
    # per (sample, unit): boundary index, or True/False for a fixed sign
    units = []
    for x, _ in spec.data:
        row = []
        for u in range(spec.n_hidden):
            pre = MultiPoly(d)
            for wj, xj in zip(W1[u], x):
                pre = pre + wj * MultiPoly.constant(xj, d)
            if pre.total_degree == 0:
                c = pre.terms.get((0,) * d, Fraction(0))
                row.append((pre, c > 0))
            else:
                row.append((pre, len(boundaries)))
                boundaries.append(pre)
        units.append(row)
    if len(boundaries) > cap:
        raise BudgetExceeded(f"network needs {len(boundaries)} boundaries, cap is {cap}")
    scale = Fraction(1, len(spec.data))
    zero = MultiPoly(d)

    def piece(signs: str) -> MultiPoly:
        loss = zero
        for (_, y), row in zip(spec.data, units):
            h = []
            for pre, tag in row:
                on = tag if isinstance(tag, bool) else signs[tag] == "+"
                h.append(pre if on else zero)
            for k in range(spec.n_out):
                out = MultiPoly.constant(-y[k], d)
                for wk, hu in zip(W2[k], h):
                    out = out + wk * hu
                loss = loss + out * out
        loss = loss * MultiPoly.constant(scale, d)
        if spec.regularizer is not None:
            loss = loss + spec.regularizer
        return loss

    first_free = any(k < spec.n_hidden * spec.n_in for k in spec.free)
    second_free = any(k >= spec.n_hidden * spec.n_in for k in spec.free)
    degree = max(1, 2 * (int(first_free) + int(second_free)),
                 spec.regularizer.total_degree if spec.regularizer is not None else 0)
    return PwPolyObjective(d, boundaries, piece_factory=piece, degree=degree)


def net_objective(spec: NetSpec, cap: int = MAX_NET_BOUNDARIES):
    """Exact piecewise-polynomial loss for relu, float descriptor otherwise."""
    if spec.activation == "relu":
        return _relu_objective(spec, cap)
    return SmoothNet(spec)


def make_net_spec(widths, activation: str, dataset, free_weights, frozen_weight_values=None,
                  seed=0, regularizer: MultiPoly | None = None) -> NetSpec:
    """Build a network description.

    When ``frozen_weight_values`` is omitted, frozen first-layer weights are
    lattice draws from [-1, 1] (deterministic in ``seed``) and frozen readout
    weights are 1.
    """
    data = tuple((tuple(as_fraction(v) for v in x), tuple(as_fraction(v) for v in y))
                 for x, y in dataset)
    free = tuple(free_weights)
    if frozen_weight_values is None:
        n_in, n_h = widths[0], widths[1]
        n_out = widths[2] if len(widths) == 3 else 1
        rng = _rng(seed)
        frozen = tuple(lattice_draw(rng, -1, 1) if k < n_h * n_in else Fraction(1)
                       for k in range(n_h * (n_in + n_out)) if k not in free)
    else:
        frozen = tuple(as_fraction(v) for v in frozen_weight_values)
    return NetSpec(tuple(widths), activation, data, free, frozen, regularizer)


def gen_net_mse(widths, activation: str, dataset, free_weights, frozen_weight_values=None,
                seed=0, regularizer: MultiPoly | None = None, cap: int = MAX_NET_BOUNDARIES):
    """Network MSE loss in the selected free weights (see ``make_net_spec``)."""
    spec = make_net_spec(widths, activation, dataset, free_weights, frozen_weight_values,
                         seed, regularizer)
    return net_objective(spec, cap)


# --- instances and their file format ---------------------------------------


@dataclass(eq=False)
class Instance:
    """Starting point, training objective and optional validation objective."""

    objective: Any
    x0: tuple[Fraction, ...] | None = None
    validation: PwPolyObjective | None = None
    label: str = ""
    net: NetSpec | None = None

    def __post_init__(self):
        if self.x0 is not None:
            self.x0 = tuple(as_fraction(v) for v in self.x0)
            if len(self.x0) != self.objective.dim:
                raise DimensionError("x0 does not match the objective dimension")
        if self.validation is not None and self.validation.dim != self.objective.dim:
            raise DimensionError("validation objective dimension mismatch")

    @property
    def dim(self) -> int:
        return self.objective.dim

    def to_record(self) -> dict:
        rec: dict = {}
        if self.net is not None:
            rec["kind"] = "net"
            rec["d"] = self.dim
            rec["net"] = self.net.to_record()
        else:
            rec.update(objective_to_record(self.objective))
        if self.x0 is not None:
            rec["x0"] = [format_rational(v) for v in self.x0]
        if self.validation is not None:
            rec["validation"] = objective_to_record(self.validation)
        rec["label"] = self.label
        return rec

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self.to_record() == other.to_record()

    def __repr__(self):
        return f"Instance({self.label!r}, {self.objective!r})"


def objective_to_record(f: PwPolyObjective) -> dict:
    if f.is_polynomial():
        return {"kind": "poly", "d": f.dim, "poly": f.piece("").to_terms()}
    return {
        "kind": "pwpoly",
        "d": f.dim,
        "boundaries": [b.to_terms() for b in f.boundaries],
        "pieces": [{"signs": s, "poly": f.pieces[s].to_terms()} for s in sorted(f.pieces)],
    }


def _get(rec: Mapping, key: str, where: str):
    if key not in rec:
        raise ParseError(f"missing field {key!r}", field=f"{where}.{key}" if where else key)
    return rec[key]


def _rat(v, where: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ParseError("expected an integer or 'num/den' string (floats are not exact)",
                         field=where)
    return Fraction(v) if isinstance(v, int) else parse_rational(v, where)


def _rat_list(v, where: str) -> list[Fraction]:
    if not isinstance(v, list):
        raise ParseError("expected a list", field=where)
    return [_rat(x, f"{where}[{k}]") for k, x in enumerate(v)]


def _int_list(v, where: str) -> list[int]:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise ParseError("expected a list of integers", field=where)
    return v


def objective_from_record(rec, where: str = "") -> PwPolyObjective:
    if not isinstance(rec, dict):
        raise ParseError("expected an object", field=where or None)
    pre = f"{where}." if where else ""
    kind = _get(rec, "kind", where)
    d = _get(rec, "d", where)
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ParseError("d must be a positive integer", field=pre + "d")
    if kind == "poly":
        return PwPolyObjective.polynomial(MultiPoly.from_terms(d, _get(rec, "poly", where), pre + "poly"))
    if kind == "pwpoly":
        bnds = _get(rec, "boundaries", where)
        if not isinstance(bnds, list):
            raise ParseError("expected a list", field=pre + "boundaries")
        boundaries = [MultiPoly.from_terms(d, b, f"{pre}boundaries[{k}]") for k, b in enumerate(bnds)]
        pieces = {}
        for k, pc in enumerate(_get(rec, "pieces", where)):
            f = f"{pre}pieces[{k}]"
            if not isinstance(pc, dict):
                raise ParseError("expected an object", field=f)
            signs = _get(pc, "signs", f)
            if (not isinstance(signs, str) or len(signs) != len(boundaries)
                    or set(signs) - {"+", "-"}):
                raise ParseError(f"signs must be {len(boundaries)} characters from '+-'",
                                 field=f + ".signs")
            pieces[signs] = MultiPoly.from_terms(d, _get(pc, "poly", f), f + ".poly")
        if not pieces:
            raise ParseError("no pieces given", field=pre + "pieces")
        return PwPolyObjective(d, boundaries, pieces)
    raise ParseError(f"unknown objective kind {kind!r}", field=pre + "kind")


def instance_from_record(rec) -> Instance:
    if not isinstance(rec, dict):
        raise ParseError("instance must be a JSON object")
    net = None
    if rec.get("kind") == "net":
        net = NetSpec.from_record(_get(rec, "net", ""), "net")
        objective = net_objective(net)
        if "d" in rec and rec["d"] != net.dim:
            raise ParseError("d does not match the number of free weights", field="d")
    else:
        objective = objective_from_record(rec)
    x0 = _rat_list(rec["x0"], "x0") if "x0" in rec else None
    val = objective_from_record(rec["validation"], "validation") if "validation" in rec else None
    label = rec.get("label", "")
    if not isinstance(label, str):
        raise ParseError("label must be a string", field="label")
    try:
        return Instance(objective, x0, val, label, net)
    except DimensionError as exc:
        raise ParseError(str(exc)) from None


def _line_of(text: str, field: str | None) -> int | None:
    """Best-effort line number of the last key named in a field path."""
    if not field:
        return None
    key = field.split(".")[-1].split("[")[0]
    for n, line in enumerate(text.splitlines(), 1):
        if f'"{key}"' in line:
            return n
    return None


def parse_instance(text: str) -> Instance:
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    try:
        return instance_from_record(rec)
    except ParseError as exc:
        if exc.line is None and exc.field is not None:
            raise ParseError(str(exc).rsplit(" (", 1)[0], field=exc.field,
                             line=_line_of(text, exc.field)) from None
        raise


def serialize_instance(inst: Instance) -> str:
    return json.dumps(inst.to_record(), indent=2) + "\n"


# --- distributions ------------------------------------------------------------


@dataclass
class InstanceDistribution:
    """A named instance family with its parameters and a base seed.

    ``scalar_quadratic``: params ``curvature`` [lo, hi]; f = c x^2 / 2, x0 = 1.
    ``random_poly``: params ``d``, ``degree``, ``coeff_range``, optional ``p``
    (random boundaries), ``boundary_degree``, ``x0_range`` and ``validation``.
    ``net_mse``: params ``widths``, ``activation``, ``n_samples``,
    ``input_range``, ``target_range``, ``free``, optional ``frozen`` and
    ``x0_range``; each instance draws a fresh dataset.
    """

    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "scalar_quadratic":
            lo, hi = (as_fraction(v) for v in self.params.get("curvature", (1, 1)))
            if lo > hi:
                raise ValueError("empty curvature range")

    def to_record(self) -> dict:
        return {"family": self.family, "params": _jsonable(self.params), "seed": self.seed}

    @classmethod
    def from_record(cls, rec) -> "InstanceDistribution":
        if not isinstance(rec, dict):
            raise ParseError("distribution must be an object", field="distribution")
        fam = _get(rec, "family", "distribution")
        if fam not in FAMILIES:
            raise ParseError(f"unknown family {fam!r}", field="distribution.family")
        params = rec.get("params", {})
        if not isinstance(params, dict):
            raise ParseError("params must be an object", field="distribution.params")
        seed = rec.get("seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise ParseError("seed must be an integer", field="distribution.seed")
        return cls(fam, params, seed)


def _jsonable(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, Mapping):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _range(params, key, default):
    lo, hi = params.get(key, default)
    return as_fraction(lo), as_fraction(hi)


def draw_instance(dist: InstanceDistribution, seed: int, index: int) -> Instance:
    """Instance number ``index``; depends only on (dist.seed, seed, index)."""
    mask = 2**64 - 1
    rng = np.random.default_rng([dist.seed & mask, seed & mask, index & mask])
    P = dist.params
    den = int(P.get("denominator", LATTICE_DENOMINATOR))
    if dist.family == "scalar_quadratic":
        lo, hi = _range(P, "curvature", (1, 1))
        c = lattice_draw(rng, lo, hi, den)
        f = MultiPoly(1, {(2,): c / 2})
        return Instance(PwPolyObjective.polynomial(f), (Fraction(1),), label=f"quadratic c={c}")
    if dist.family == "random_poly":
        d, degree = int(P.get("d", 1)), int(P.get("degree", 2))
        p = int(P.get("p", 0))
        crange = _range(P, "coeff_range", (-1, 1))
        f = gen_random_pwpoly(d, degree, p, crange, rng, int(P.get("boundary_degree", 1)), den)
        xlo, xhi = _range(P, "x0_range", (-1, 1))
        x0 = tuple(lattice_draw(rng, xlo, xhi, den) for _ in range(d))
        val = None
        if P.get("validation"):
            val = PwPolyObjective.polynomial(gen_random_poly(d, degree, crange, rng, den))
        return Instance(f, x0, val, label=f"random_poly #{index}")
    # net_mse
    widths = list(P["widths"])
    n = int(P.get("n_samples", 2))
    n_out = widths[2] if len(widths) == 3 else 1
    ilo, ihi = _range(P, "input_range", (-1, 1))
    tlo, thi = _range(P, "target_range", (-1, 1))
    data = [(tuple(lattice_draw(rng, ilo, ihi, den) for _ in range(widths[0])),
             tuple(lattice_draw(rng, tlo, thi, den) for _ in range(n_out))) for _ in range(n)]
    free = list(P.get("free", [0]))
    spec = make_net_spec(widths, P.get("activation", "relu"), data, free, P.get("frozen"), rng)
    xlo, xhi = _range(P, "x0_range", (-1, 1))
    x0 = tuple(lattice_draw(rng, xlo, xhi, den) for _ in free)
    return Instance(net_objective(spec), x0, label=f"net_mse #{index}", net=spec)


def sample_instances(dist: InstanceDistribution, m: int, seed: int, start: int = 0) -> list[Instance]:
    """``m`` independent draws; draw k uses only (dist.seed, seed, start + k)."""
    if m < 1:
        raise ValueError("m must be positive")
    return [draw_instance(dist, seed, k) for k in range(start, start + m)]
