"""Symbolic execution of gradient descent in one free hyperparameter.

Every iterate is carried as a vector of exact univariate polynomials in the
free parameter.  The parameter domain is kept as an ordered list of cells;
each round splits active cells where the iterate crosses a boundary of the
objective, settles the sub-cells on which the gradient norm is below the
threshold, and advances the rest by one gradient step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateTrajectory, DimensionError, InvariantViolation
from .objective import (GDConfig, InitCoord, InitScale, MomentumEta, PwPolyObjective,
                        ScheduleCoord, StepSize, binding_dim)
from .piecewise import PwConstFn, PwPolyFn, partition_refine
from .polynomials import MultiPoly, UniPoly, mp_compose_uni
from .realroots import AlgebraicNumber, compare, rational_between, roots_between

_ETA = UniPoly.identity()


@dataclass
class RoundStat:
    round: int
    active_cells: int
    settled_cells: int
    max_degree: int
    degree_bound: int


@dataclass
class TraceStats:
    """Per-round bookkeeping of a trace, used to check the structural bounds."""

    dim: int
    p: int
    delta: int
    H: int
    rounds: list[RoundStat] = field(default_factory=list)
    final_pieces: int = 0

    @property
    def piece_envelope(self) -> int:
        if self.p == 0:
            return (2 * self.delta) ** (self.H + 1)
        return (4 * self.p * self.dim * self.delta) ** (self.H + 1)

    @property
    def degree_violations(self) -> int:
        return sum(r.max_degree > r.degree_bound for r in self.rounds)


@dataclass(frozen=True, eq=False)
class DualCostFunction(PwConstFn):
    """Exact map parameter -> number of gradient descent iterations."""

    stats: TraceStats | None = None


@dataclass(frozen=True, eq=False)
class DualValidationFunction(PwPolyFn):
    """Exact map parameter -> validation loss at the returned iterate."""

    stats: TraceStats | None = None


class _Active:
    __slots__ = ("lo", "hi", "x", "y")

    def __init__(self, lo, hi, x, y):
        self.lo, self.hi, self.x, self.y = lo, hi, x, y


class _Settled:
    __slots__ = ("lo", "hi", "cost", "point")

    def __init__(self, lo, hi, cost, point):
        self.lo, self.hi, self.cost, self.point = lo, hi, cost, point


def _const_curve(v) -> tuple[UniPoly, ...]:
    return tuple(UniPoly.constant(c) for c in v)


def _initial_state(binding):
    if isinstance(binding, StepSize | ScheduleCoord):
        return _const_curve(binding.x0), None
    if isinstance(binding, MomentumEta):
        return _const_curve(binding.x0), _const_curve([0] * len(binding.x0))
    if isinstance(binding, InitScale):
        return tuple(_ETA * c for c in binding.direction), None
    if isinstance(binding, InitCoord):
        x = list(_const_curve(binding.base))
        x[binding.index] = _ETA
        return tuple(x), None
    raise TypeError(f"unknown binding {binding!r}")


def _step(binding, i: int) -> UniPoly:
    """Step size used by the update after round i, as a polynomial in the free parameter."""
    if isinstance(binding, StepSize | MomentumEta):
        return _ETA
    if isinstance(binding, InitScale | InitCoord):
        return UniPoly.constant(binding.eta)
    if isinstance(binding, ScheduleCoord):
        return _ETA if i == binding.t else UniPoly.constant(binding.schedule[i - 1])
    raise TypeError(f"unknown binding {binding!r}")


def _advance(binding, x, y, grad, i):
    eta = _step(binding, i)
    if isinstance(binding, MomentumEta):
        gamma = binding.gamma
        y_new = tuple(gamma * yj - eta * gj for yj, gj in zip(y, grad))
        moved = y if binding.literal else y_new
        return tuple(xj + vj for xj, vj in zip(x, moved)), y_new
    return tuple(xj - eta * gj for xj, gj in zip(x, grad)), None


def degree_bound(binding, delta: int, i: int) -> int:
    """Upper bound on the degree of the round-i iterate curve."""
    if isinstance(binding, InitScale | InitCoord):
        return delta ** (i - 1)
    return 1 if i < 2 else delta ** (i - 2)


def _split_by_boundaries(boundaries: Sequence[MultiPoly], lo, hi, x, budget):
    """Split (lo, hi) where the curve crosses a boundary; yields (lo, hi, signs)."""
    if not boundaries:
        return [(lo, hi, "")]
    composed = []
    roots = []
    for k, b in enumerate(boundaries):
        B = mp_compose_uni(b, x, budget)
        if B.is_zero():
            raise DegenerateTrajectory(
                f"iterate stays on boundary {k} over ({float(lo):.6g}, {float(hi):.6g})",
                cell=(lo, hi))
        composed.append(B)
        if B.degree >= 1:
            roots.append(roots_between(B, lo, hi))
    pts = [lo, *partition_refine(roots), hi]
    out: list[list] = []
    for a, b in zip(pts[:-1], pts[1:]):
        t = rational_between(a, b)
        signs = "".join("+" if B.eval_fmpq(t) > 0 else "-" for B in composed)
        if out and out[-1][2] == signs:
            out[-1][1] = b
        else:
            out.append([a, b, signs])
    return [tuple(s) for s in out]


def _below_threshold_segments(q: UniPoly, lo, hi):
    """Split (lo, hi) into maximal segments tagged True where q < 0."""
    if q.is_zero():
        return [(lo, hi, False)]
    if q.degree <= 0:
        return [(lo, hi, q.coeffs[0] < 0)]
    pts = [lo, *roots_between(q, lo, hi), hi]
    out: list[list] = []
    for a, b in zip(pts[:-1], pts[1:]):
        neg = q.eval_fmpq(rational_between(a, b)) < 0
        if out and out[-1][2] == neg:
            out[-1][1] = b
        else:
            out.append([a, b, neg])
    return [tuple(s) for s in out]


def _check_telescoping(cells, lo, hi):
    if compare(cells[0].lo, lo) != 0 or compare(cells[-1].hi, hi) != 0:
        raise InvariantViolation("cells do not cover the parameter domain")
    for c1, c2 in zip(cells, cells[1:]):
        if c1.hi is not c2.lo and compare(c1.hi, c2.lo) != 0:
            raise InvariantViolation("gap or overlap between consecutive cells")


def _run(f: PwPolyObjective, binding, cfg: GDConfig, keep_points: bool = False):
    dim = binding_dim(binding)
    if dim != f.dim:
        raise DimensionError(f"binding has dimension {dim}, objective has {f.dim}")
    if isinstance(binding, ScheduleCoord) and len(binding.schedule) < min(cfg.H, binding.t):
        raise ValueError("schedule shorter than the iteration budget")
    budget = cfg.budget
    theta2 = cfg.theta**2
    lo = AlgebraicNumber.rational(cfg.domain[0])
    hi = AlgebraicNumber.rational(cfg.domain[1])
    x, y = _initial_state(binding)
    cells: list = [_Active(lo, hi, x, y)]
    stats = TraceStats(dim=f.dim, p=f.p, delta=f.degree, H=cfg.H)
    H = cfg.H
    for i in range(1, H + 1):
        active = [c for c in cells if isinstance(c, _Active)]
        maxdeg = max((max(cj.degree for cj in c.x) for c in active), default=0)
        bound = degree_bound(binding, f.degree, i)
        if maxdeg > bound:
            raise InvariantViolation(
                f"round {i}: iterate degree {maxdeg} exceeds bound {bound}")
        new = []
        for c in cells:
            if isinstance(c, _Settled):
                new.append(c)
                continue
            for a, b, signs in _split_by_boundaries(f.boundaries, c.lo, c.hi, c.x, budget):
                grad = [mp_compose_uni(g, c.x, budget) for g in f.gradient(signs)]
                q = UniPoly.constant(-theta2)
                for g in grad:
                    q = q + g * g
                budget.check(q, "gradient-norm polynomial")
                segs = _below_threshold_segments(q, a, b)
                nxt = None
                if any(not neg for _, _, neg in segs) and (i < H or keep_points):
                    nxt = _advance(binding, c.x, c.y, grad, i)
                for s_lo, s_hi, neg in segs:
                    if neg:
                        new.append(_Settled(s_lo, s_hi, i, c.x if keep_points else None))
                    elif i < H:
                        new.append(_Active(s_lo, s_hi, nxt[0], nxt[1]))
                    else:
                        new.append(_Settled(s_lo, s_hi, H, nxt[0] if keep_points else None))
        cells = new
        _check_telescoping(cells, lo, hi)
        n_active = sum(isinstance(c, _Active) for c in cells)
        stats.rounds.append(RoundStat(i, n_active, len(cells) - n_active, maxdeg, bound))
    return cells, stats


def _dual_from_cells(cells, cfg, stats) -> DualCostFunction:
    bps = [c.lo for c in cells[1:]]
    vals = [c.cost for c in cells]
    canon = PwConstFn(cfg.domain, bps, vals).canonical()
    stats.final_pieces = canon.n_pieces
    if canon.n_pieces > stats.piece_envelope:
        raise InvariantViolation(
            f"{canon.n_pieces} pieces exceed the envelope {stats.piece_envelope}")
    return DualCostFunction(canon.domain, canon.breakpoints, canon.values, stats)


def trace_param(f: PwPolyObjective, binding, cfg: GDConfig) -> DualCostFunction:
    """Exact dual cost as a function of the binding's free parameter."""
    cells, stats = _run(f, binding, cfg)
    return _dual_from_cells(cells, cfg, stats)


def trace_stepsize(f: PwPolyObjective, x0, cfg: GDConfig) -> DualCostFunction:
    """Exact map eta -> iterations of gradient descent from ``x0``.

    >>> from gdtune.polynomials import MultiPoly
    >>> f = PwPolyObjective.polynomial(MultiPoly(1, {(2,): Fraction(1, 2)}))
    >>> dual = trace_stepsize(f, [1], GDConfig(5, Fraction(1, 10), (0, 2)))
    >>> dual(1), dual.n_pieces
    (2, 7)
    """
    return trace_param(f, StepSize(tuple(x0)), cfg)


def trace_validation(f: PwPolyObjective, f_v: PwPolyObjective, x0, cfg: GDConfig,
                     binding=None) -> DualValidationFunction:
    """Exact map eta -> f_v(returned point) as a piecewise polynomial."""
    if f_v.dim != f.dim:
        raise DimensionError("training and validation objectives differ in dimension")
    binding = binding or StepSize(tuple(x0))
    cells, stats = _run(f, binding, cfg, keep_points=True)
    bps: list[AlgebraicNumber] = []
    pieces: list[UniPoly] = []
    for c in cells:
        for k, (a, b, signs) in enumerate(
                _split_by_boundaries(f_v.boundaries, c.lo, c.hi, c.point, cfg.budget)):
            if pieces:
                bps.append(a)
            pieces.append(mp_compose_uni(f_v.piece(signs), c.point, cfg.budget))
    canon = PwPolyFn(cfg.domain, bps, pieces).canonical()
    stats.final_pieces = canon.n_pieces
    return DualValidationFunction(canon.domain, canon.breakpoints, canon.pieces, stats)
