"""Exact polynomials over the rationals.

``MultiPoly`` is a sparse multivariate polynomial (objectives, boundaries,
validation functions).  ``UniPoly`` is a dense univariate polynomial in the
free hyperparameter; arithmetic is delegated to FLINT's ``fmpq_poly``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import flint

from .errors import DimensionError, ParseError, SymbolicBudgetExceeded

DEFAULT_MAX_DEGREE = 4096
DEFAULT_MAX_BITS = 2**20


def as_fraction(x) -> Fraction:
    """Coerce int / Fraction / fmpq / ``"num/den"`` text to a Fraction.

    Floats are rejected: exact paths must never see binary floating point.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def parse_rational(text: str, field=None) -> Fraction:
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ParseError(f"malformed rational {text!r}", field=field) from None
    if d == 0:
        raise ParseError(f"zero denominator in {text!r}", field=field)
    return Fraction(n, d)


def format_rational(x) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    x = as_fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


@dataclass(frozen=True)
class Budget:
    """Caps on symbolic growth; exceeding either raises SymbolicBudgetExceeded."""

    max_degree: int = DEFAULT_MAX_DEGREE
    max_bits: int = DEFAULT_MAX_BITS

    def check(self, u: "UniPoly", what="polynomial"):
        if u.degree > self.max_degree:
            raise SymbolicBudgetExceeded(
                f"{what} degree {u.degree} exceeds cap {self.max_degree}")
        bits = u.bit_size()
        if bits > self.max_bits:
            raise SymbolicBudgetExceeded(
                f"{what} coefficient size {bits} bits exceeds cap {self.max_bits}")


class UniPoly:
    """Immutable univariate polynomial with rational coefficients.

    ``coeffs`` lists coefficients constant term first, with no trailing
    zeros; the zero polynomial has empty ``coeffs`` and degree -1.
    """

    __slots__ = ("_p",)

    def __init__(self, coeffs: Iterable = ()):
        if isinstance(coeffs, flint.fmpq_poly):
            p = coeffs
        elif isinstance(coeffs, flint.fmpz_poly):
            p = flint.fmpq_poly(coeffs)
        else:
            p = flint.fmpq_poly([_fmpq(c) for c in coeffs])
        object.__setattr__(self, "_p", p)

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def identity(cls) -> "UniPoly":
        return cls([0, 1])

    @property
    def flint(self) -> flint.fmpq_poly:
        return self._p

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(as_fraction(c) for c in self._p.coeffs())

    @property
    def degree(self) -> int:
        return self._p.degree()

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_constant(self) -> bool:
        return self._p.degree() <= 0

    def __call__(self, t):
        if isinstance(t, float):
            return float(sum(float(c) * t**k for k, c in enumerate(self.coeffs)))
        return as_fraction(self._p(_fmpq(t)))

    def eval_fmpq(self, t) -> flint.fmpq:
        return self._p(_fmpq(t))

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            return other._p
        return flint.fmpq_poly([_fmpq(other)])

    def __add__(self, other):
        return UniPoly(self._p + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return UniPoly(self._p - self._coerce(other))

    def __rsub__(self, other):
        return UniPoly(self._coerce(other) - self._p)

    def __mul__(self, other):
        return UniPoly(self._p * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return UniPoly(-self._p)

    def __pow__(self, k: int):
        return UniPoly(self._p**k)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self._p == other._p
        if isinstance(other, (int, Fraction)):
            return self._p == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __reduce__(self):
        return (UniPoly, ([format_rational(c) for c in self.coeffs],))

    def derivative(self) -> "UniPoly":
        return UniPoly(self._p.derivative())

    def compose(self, inner: "UniPoly") -> "UniPoly":
        return UniPoly(self._p(inner._p))

    def bit_size(self) -> int:
        """Total numerator plus denominator bits over all coefficients."""
        total = 0
        for c in self._p.coeffs():
            total += c.p.bit_length() + c.q.bit_length()
        return total

    def integer_primitive(self) -> flint.fmpz_poly:
        """Primitive integer polynomial with the same roots, positive leading coefficient."""
        z = self._p.numer()
        if z.is_zero():
            return z
        c = z.content()
        if c != 1:
            z = flint.fmpz_poly([x // c for x in z.coeffs()])
        if z.leading_coefficient() < 0:
            z = -z
        return z

    def to_list(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    def __repr__(self):
        return f"UniPoly({self._p.str()!s})" if not self.is_zero() else "UniPoly(0)"


def _grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


class MultiPoly:
    """Immutable sparse polynomial in ``dim`` variables over Q.

    Terms are stored in descending graded-lexicographic order; zero
    coefficients are never stored.
    """

    __slots__ = ("dim", "_terms", "__dict__")

    def __init__(self, dim: int, terms: Mapping[tuple[int, ...], object] | Iterable = ()):
        if dim < 1:
            raise DimensionError("dim must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, ...], Fraction] = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != dim:
                raise DimensionError(f"exponent vector {exps} has length != {dim}")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            acc[exps] = acc.get(exps, Fraction(0)) + as_fraction(c)
        object.__setattr__(self, "dim", dim)
        ordered = sorted(((e, c) for e, c in acc.items() if c != 0),
                         key=lambda t: _grlex_key(t[0]), reverse=True)
        object.__setattr__(self, "_terms", tuple(ordered))

    def __setattr__(self, name, value):
        if name in ("dim", "_terms"):
            raise AttributeError("MultiPoly is immutable")
        object.__setattr__(self, name, value)

    @classmethod
    def constant(cls, c, dim: int) -> "MultiPoly":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def variable(cls, j: int, dim: int) -> "MultiPoly":
        e = [0] * dim
        e[j] = 1
        return cls(dim, {tuple(e): 1})

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms)

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def _check(self, other: "MultiPoly"):
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.dim)
        self._check(other)
        return MultiPoly(self.dim, list(self._terms) + list(other._terms))

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.dim, [(e, -c) for e, c in self._terms])

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.dim)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = as_fraction(other)
            return MultiPoly(self.dim, [(e, c * v) for e, v in self._terms])
        self._check(other)
        out = []
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                out.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return MultiPoly(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.constant(1, self.dim)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, self._terms))

    def __reduce__(self):
        return (MultiPoly, (self.dim, self._terms))

    def __repr__(self):
        if not self._terms:
            return f"MultiPoly(dim={self.dim}, 0)"
        parts = []
        for e, c in self._terms:
            mono = "*".join(f"x{j}^{k}" if k > 1 else f"x{j}" for j, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return f"MultiPoly(dim={self.dim}, {' + '.join(parts)})"

    def __call__(self, point):
        return mp_eval(self, point)

    def eval_float(self, X):
        """Vectorized float evaluation at the rows of ``X`` (shape (n, dim))."""
        import numpy as np

        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.zeros(X.shape[0])
        for e, c in self._terms:
            term = np.full(X.shape[0], float(c))
            for j, k in enumerate(e):
                if k:
                    term = term * X[:, j] ** k
            out += term
        return out

    @cached_property
    def gradient(self) -> tuple["MultiPoly", ...]:
        return tuple(mp_gradient(self))

    @cached_property
    def _flint_terms(self):
        return [(e, _fmpq(c)) for e, c in self._terms]

    def to_terms(self) -> list[dict]:
        return [{"coef": format_rational(c), "exps": list(e)} for e, c in self._terms]

    @classmethod
    def from_terms(cls, dim: int, records, field="poly") -> "MultiPoly":
        if not isinstance(records, list):
            raise ParseError("expected a list of terms", field=field)
        items = []
        for k, rec in enumerate(records):
            where = f"{field}[{k}]"
            if not isinstance(rec, dict) or "coef" not in rec or "exps" not in rec:
                raise ParseError("term needs 'coef' and 'exps'", field=where)
            coef = rec["coef"]
            if isinstance(coef, bool) or not isinstance(coef, (int, str)):
                raise ParseError("coefficient must be an integer or 'num/den' string",
                                 field=f"{where}.coef")
            c = Fraction(coef) if isinstance(coef, int) else parse_rational(coef, f"{where}.coef")
            exps = rec["exps"]
            if (not isinstance(exps, list) or len(exps) != dim
                    or not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0
                               for e in exps)):
                raise ParseError(f"exps must be {dim} non-negative integers", field=f"{where}.exps")
            items.append((tuple(exps), c))
        return cls(dim, items)


def mp_eval(f: MultiPoly, point: Sequence) -> Fraction:
    if len(point) != f.dim:
        raise DimensionError(f"point has {len(point)} coordinates, polynomial has {f.dim}")
    pt = [as_fraction(v) for v in point]
    total = Fraction(0)
    for e, c in f.items():
        term = c
        for v, k in zip(pt, e):
            if k:
                term *= v**k
        total += term
    return total


def mp_gradient(f: MultiPoly) -> list[MultiPoly]:
    out = []
    for j in range(f.dim):
        items = []
        for e, c in f.items():
            if e[j]:
                e2 = list(e)
                e2[j] -= 1
                items.append((tuple(e2), c * e[j]))
        out.append(MultiPoly(f.dim, items))
    return out


def mp_compose_uni(f: MultiPoly, curve: Sequence[UniPoly], budget: Budget | None = None) -> UniPoly:
    """Substitute the univariate curve into ``f``: returns f(curve_1(t), ..., curve_d(t))."""
    if len(curve) != f.dim:
        raise DimensionError(f"curve has {len(curve)} components, polynomial has {f.dim}")
    if budget is not None:
        # cheap a-priori check before any expansion
        bound = f.total_degree * max((max(c.degree, 0) for c in curve), default=0)
        if bound > budget.max_degree:
            top = max((sum(e[j] * max(curve[j].degree, 0) for j in range(f.dim))
                       for e, _ in f.items()), default=0)
            if top > budget.max_degree:
                raise SymbolicBudgetExceeded(
                    f"composition degree up to {top} exceeds cap {budget.max_degree}")
    powers: list[dict[int, flint.fmpq_poly]] = [{0: flint.fmpq_poly([1])} for _ in curve]

    def power(j, k):
        cache = powers[j]
        if k not in cache:
            base = curve[j].flint
            # build from the largest cached power below k
            m = max(i for i in cache if i < k)
            acc = cache[m]
            for i in range(m + 1, k + 1):
                acc = acc * base
                cache[i] = acc
        return cache[k]

    acc = flint.fmpq_poly([])
    for e, c in f._flint_terms:
        term = flint.fmpq_poly([c])
        for j, k in enumerate(e):
            if k:
                term = term * power(j, k)
        acc = acc + term
    out = UniPoly(acc)
    maxdeg = max((max(c.degree, 0) for c in curve), default=0)
    assert out.degree <= f.total_degree * maxdeg, "composition degree bound violated"
    if budget is not None:
        budget.check(out, "composed polynomial")
    return out
