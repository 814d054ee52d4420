"""Certified real-root isolation over bounded rational domains.

Roots are isolated exactly: the polynomial is reduced to its square-free
primitive integer part, then isolated by Descartes-rule bisection on
integer polynomials and refined by exact sign evaluation.  A Sturm-sequence
root counter is kept alongside as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import flint

from .errors import ZeroPolynomial
from .polynomials import UniPoly, as_fraction, format_rational, parse_rational

ISOLATION_WIDTH = Fraction(1, 2**30)

_SHIFT_ONE = flint.fmpz_poly([1, 1])


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _fq(x: Fraction) -> flint.fmpq:
    return flint.fmpq(x.numerator, x.denominator)


def squarefree_part(p: UniPoly) -> flint.fmpz_poly:
    """Primitive square-free integer polynomial with the roots of ``p``."""
    z = p.integer_primitive()
    if z.degree() <= 0:
        return z
    g = z.gcd(z.derivative())
    if g.degree() > 0:
        z = z // g
    if z.leading_coefficient() < 0:
        z = -z
    c = z.content()
    if c != 1:
        z = flint.fmpz_poly([x // c for x in z.coeffs()])
    return z


def _zsign(z: flint.fmpz_poly, t: Fraction) -> int:
    return _sign(z(_fq(t)))


def _bisect_to(z: flint.fmpz_poly, lo: Fraction, hi: Fraction, s_lo: int, width):
    """Shrink a sign-change bracket of ``z`` below ``width``; lo == hi on an exact hit."""
    a, b, w = _fq(lo), _fq(hi), _fq(Fraction(width))
    half = flint.fmpq(1, 2)
    # endpoints may themselves be roots of z; keep going until both are cleared
    a_root, b_root = z(a) == 0, z(b) == 0
    while b - a > w or a_root or b_root:
        mid = (a + b) * half
        s = _sign(z(mid))
        if s == 0:
            a = b = mid
            break
        if s == s_lo:
            a, a_root = mid, False
        else:
            b, b_root = mid, False
    return Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))


def simplest_rational(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the closed interval [lo, hi]."""
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_rational(-hi, -lo)
    # continued-fraction descent in integers; value = (p1*t + p0) / (q1*t + q0)
    ln, ld, hn, hd = lo.numerator, lo.denominator, hi.numerator, hi.denominator
    p0, q0, p1, q1 = 0, 1, 1, 0
    while True:
        fl = ln // ld
        if fl * ld == ln:
            t = fl
            break
        if (fl + 1) * hd <= hn:
            t = fl + 1
            break
        # lo and hi share the integer part: continue with reciprocals of the fractional parts
        p0, q0, p1, q1 = p1, q1, fl * p1 + p0, fl * q1 + q0
        ln, ld, hn, hd = hd, hn - fl * hd, ld, ln - fl * ld
    return Fraction(t * p1 + p0, t * q1 + q0)


@dataclass(frozen=True, eq=False)
class AlgebraicNumber:
    """A real root of ``defining`` isolated in the bracket [lo, hi].

    Rational values use ``defining = t - r`` and ``lo == hi == r``.  For an
    irrational value the open bracket holds exactly one root, ``defining``
    is square-free and changes sign across the bracket.
    """

    defining: UniPoly
    lo: Fraction
    hi: Fraction
    sign_at_lo: int

    @classmethod
    def rational(cls, r) -> "AlgebraicNumber":
        r = as_fraction(r)
        return cls(UniPoly([-r, 1]), r, r, -1)

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __float__(self):
        if self.is_rational:
            return float(self.lo)
        return float((self.lo + self.hi) / 2)

    def _z(self):
        return self.defining.integer_primitive()

    def bisect(self) -> "AlgebraicNumber":
        """One bisection step; returns a new value with half the bracket."""
        if self.is_rational:
            return self
        mid = (self.lo + self.hi) / 2
        s = _sign(self.defining.eval_fmpq(mid))
        if s == 0:
            return AlgebraicNumber.rational(mid)
        if s == self.sign_at_lo:
            return AlgebraicNumber(self.defining, mid, self.hi, s)
        return AlgebraicNumber(self.defining, self.lo, mid, self.sign_at_lo)

    def refine(self, width=ISOLATION_WIDTH) -> "AlgebraicNumber":
        if self.is_rational or self.width <= width:
            return self
        lo, hi = _bisect_to(self._z(), self.lo, self.hi, self.sign_at_lo, width)
        if lo == hi:
            return AlgebraicNumber.rational(lo)
        return AlgebraicNumber(self.defining, lo, hi, self.sign_at_lo)

    def __eq__(self, other):
        if not isinstance(other, AlgebraicNumber):
            if isinstance(other, (int, Fraction)):
                return compare_rational(self, Fraction(other)) == 0
            return NotImplemented
        return compare(self, other) == 0

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __lt__(self, other):
        return _cmp_any(self, other) < 0

    def __le__(self, other):
        return _cmp_any(self, other) <= 0

    def __gt__(self, other):
        return _cmp_any(self, other) > 0

    def __ge__(self, other):
        return _cmp_any(self, other) >= 0

    __hash__ = None

    def __repr__(self):
        if self.is_rational:
            return f"AlgebraicNumber({self.lo})"
        return f"AlgebraicNumber(root of {self.defining!r} in [{self.lo}, {self.hi}] ~ {float(self):.12g})"

    def to_record(self) -> dict:
        return {"defining": self.defining.to_list(),
                "lo": format_rational(self.lo), "hi": format_rational(self.hi)}

    @classmethod
    def from_record(cls, rec: dict, field="breakpoint") -> "AlgebraicNumber":
        lo = parse_rational(rec["lo"], f"{field}.lo")
        hi = parse_rational(rec["hi"], f"{field}.hi")
        if lo == hi:
            return cls.rational(lo)
        p = UniPoly([parse_rational(c, f"{field}.defining") for c in rec["defining"]])
        return cls(p, lo, hi, _sign(p.eval_fmpq(lo)))


def _cmp_any(a: AlgebraicNumber, b) -> int:
    if isinstance(b, AlgebraicNumber):
        return compare(a, b)
    return compare_rational(a, as_fraction(b))


def compare_rational(a: AlgebraicNumber, r: Fraction) -> int:
    """Sign of ``a - r`` for a rational ``r``."""
    if a.is_rational:
        return _sign(a.lo - r)
    if r <= a.lo:
        return 1
    if r >= a.hi:
        return -1
    s = _sign(a.defining.eval_fmpq(r))
    if s == 0:
        return 0
    # r lies inside the bracket; the root is on the side where the sign flips
    return -1 if s != a.sign_at_lo else 1


def compare(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    """Exact three-way comparison of two algebraic numbers."""
    if a is b:
        return 0
    if a.hi < b.lo:
        return -1
    if b.hi < a.lo:
        return 1
    if a.is_rational:
        return -compare_rational(b, a.lo)
    if b.is_rational:
        return compare_rational(a, b.lo)
    # overlapping brackets: a common root inside the overlap means equality
    g = a._z().gcd(b._z())
    if g.degree() > 0:
        lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
        if lo <= hi and count_roots(g, lo, hi) > 0:
            return 0
    while True:
        a, b = a.bisect(), b.bisect()
        if a.hi < b.lo:
            return -1
        if b.hi < a.lo:
            return 1
        if a.is_rational or b.is_rational:
            return compare(a, b)


def _sign_variations(coeffs) -> int:
    v = 0
    prev = 0
    for c in coeffs:
        s = _sign(c)
        if s:
            if prev and s != prev:
                v += 1
            prev = s
    return v


def _descartes_01(q: flint.fmpz_poly) -> int:
    """Descartes bound on the number of roots of ``q`` in the open interval (0, 1)."""
    coeffs = q.coeffs()
    rev = flint.fmpz_poly(coeffs[::-1])
    return _sign_variations(rev(_SHIFT_ONE).coeffs())


def _halve(q: flint.fmpz_poly) -> flint.fmpz_poly:
    """2^n q(t/2): the left half of the unit interval, rescaled."""
    c = q.coeffs()
    n = len(c) - 1
    return flint.fmpz_poly([ck * (1 << (n - k)) for k, ck in enumerate(c)])


def _strip_zero_root(q: flint.fmpz_poly) -> flint.fmpz_poly:
    c = q.coeffs()
    k = 0
    while k < len(c) and c[k] == 0:
        k += 1
    return flint.fmpz_poly(c[k:]) if k else q


def isolate_roots_open(p: UniPoly, lo: Fraction, hi: Fraction, width=ISOLATION_WIDTH):
    """All distinct real roots of ``p`` strictly between rationals lo < hi."""
    if p.is_zero():
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    z = squarefree_part(p)
    if z.degree() <= 0:
        return []
    return _roots_from_z(z, lo, hi, width)


def _roots_from_z(z, lo, hi, width):
    out = []
    defining = None
    for item in _isolate_open_ordered(z, lo, hi):
        if item[0] == "exact":
            out.append(AlgebraicNumber.rational(item[1]))
            continue
        _, a, b = item
        if defining is None:
            defining = UniPoly(z)
        s_lo = _zsign(z, a)
        if s_lo == 0:
            # a neighbouring exact root sits on the endpoint; z is square-free so z' decides
            s_lo = _sign(z.derivative()(_fq(a)))
        a, b = _bisect_to(z, a, b, s_lo, width)
        if a == b:
            out.append(AlgebraicNumber.rational(a))
            continue
        r = simplest_rational(a, b)
        if a < r < b and _zsign(z, r) == 0:
            out.append(AlgebraicNumber.rational(r))
        else:
            out.append(AlgebraicNumber(defining, a, b, s_lo))
    return out


def _isolate_open_ordered(z, lo, hi):
    """Descartes bisection for square-free ``z`` on the open interval (lo, hi).

    Yields ('exact', r) or ('bracket', a, b) in increasing order; each bracket
    is an open interval holding exactly one root; an endpoint may itself be a
    root reported separately as exact.
    """
    w = hi - lo
    q = flint.fmpq_poly(z)(flint.fmpq_poly([_fq(lo), _fq(w)])).numer()
    q = _strip_zero_root(q)
    # stack entries: ("node", q, a, w) or ("exact", r)
    stack = [("node", q, lo, w)]
    while stack:
        item = stack.pop()
        if item[0] == "exact":
            yield item
            continue
        _, q, a, w = item
        if q.degree() <= 0:
            continue
        v = _descartes_01(q)
        if v == 0:
            continue
        if v == 1:
            yield ("bracket", a, a + w)
            continue
        h = w / 2
        left = _halve(q)
        right = left(_SHIFT_ONE)
        mid_root = right.coeffs()[0] == 0
        if mid_root:
            right = _strip_zero_root(right)
        stack.append(("node", right, a + h, h))
        if mid_root:
            stack.append(("exact", a + h))
        stack.append(("node", left, a, h))


def isolate_roots(p: UniPoly, domain, width=ISOLATION_WIDTH) -> list[AlgebraicNumber]:
    """Distinct real roots of ``p`` in the closed domain, in increasing order."""
    lo, hi = (as_fraction(domain[0]), as_fraction(domain[1]))
    if not lo < hi:
        raise ValueError("domain must satisfy lo < hi")
    if p.is_zero():
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    z = squarefree_part(p)
    if z.degree() <= 0:
        return []
    out = []
    if _zsign(z, lo) == 0:
        out.append(AlgebraicNumber.rational(lo))
    out.extend(_roots_from_z(z, lo, hi, width))
    if _zsign(z, hi) == 0:
        out.append(AlgebraicNumber.rational(hi))
    return out


def count_roots(z, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of a polynomial in the closed interval [lo, hi]."""
    if isinstance(z, UniPoly):
        z = z.integer_primitive()
    z = squarefree_part(UniPoly(z))
    if z.degree() <= 0:
        return 0
    if lo == hi:
        return int(_zsign(z, lo) == 0)
    n = int(_zsign(z, lo) == 0) + int(_zsign(z, hi) == 0)
    return n + sum(1 for _ in _isolate_open_ordered(z, lo, hi))


def roots_between(p: UniPoly, a: AlgebraicNumber, b: AlgebraicNumber,
                  width=ISOLATION_WIDTH) -> list[AlgebraicNumber]:
    """Distinct roots of ``p`` strictly between algebraic numbers a < b."""
    if p.is_zero():
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    z = squarefree_part(p)
    if z.degree() <= 0:
        return []
    lo, hi = a.lo, b.hi
    cands = []
    if _zsign(z, lo) == 0:
        cands.append(AlgebraicNumber.rational(lo))
    if lo < hi:
        cands.extend(_roots_from_z(z, lo, hi, width))
        if _zsign(z, hi) == 0:
            cands.append(AlgebraicNumber.rational(hi))
    return [r for r in cands if compare(a, r) < 0 and compare(r, b) < 0]


def rational_between(a: AlgebraicNumber, b: AlgebraicNumber) -> Fraction:
    """A simple rational strictly between a < b."""
    while not a.hi < b.lo:
        if compare(a, b) >= 0:
            raise ValueError("rational_between needs a < b")
        a, b = a.bisect(), b.bisect()
    lo, hi = a.hi, b.lo
    if a.is_rational and b.is_rational:
        r = simplest_rational(lo + (hi - lo) / 4, hi - (hi - lo) / 4)
    else:
        r = simplest_rational(lo, hi)
        if r == lo or r == hi:
            r = (lo + hi) / 2
    return r


def sign_at(p: UniPoly, a: AlgebraicNumber) -> int:
    """Exact sign of ``p`` at the algebraic number ``a``."""
    if p.is_zero():
        return 0
    if a.is_rational:
        return _sign(p.eval_fmpq(a.lo))
    z = p.integer_primitive()
    g = z.gcd(a._z())
    if g.degree() > 0 and count_roots(g, a.lo, a.hi) > 0:
        return 0
    # shrink the bracket until p has no root in it, then sample
    while count_roots(z, a.lo, a.hi) > 0:
        a = a.bisect()
        if a.is_rational:
            return _sign(p.eval_fmpq(a.lo))
    return _sign(p.eval_fmpq((a.lo + a.hi) / 2))


def poly_enclosure(p: UniPoly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Certified rational bounds on p over [lo, hi] (Taylor form about the midpoint)."""
    m = (lo + hi) / 2
    r = (hi - lo) / 2
    shifted = p.compose(UniPoly([m, 1]))
    c = shifted.coeffs
    if not c:
        return Fraction(0), Fraction(0)
    spread = sum(abs(ck) * r**k for k, ck in enumerate(c) if k >= 1)
    return c[0] - spread, c[0] + spread


# --- Sturm-sequence oracle -------------------------------------------------


def sturm_sequence(p: UniPoly) -> list[flint.fmpq_poly]:
    q0 = flint.fmpq_poly(squarefree_part(p))
    seq = [q0, q0.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def sturm_count(p: UniPoly, lo, hi) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    lo, hi = as_fraction(lo), as_fraction(hi)
    seq = sturm_sequence(p)
    if seq[0].degree() <= 0:
        return 0

    def variations(t):
        return _sign_variations([s(_fq(t)) for s in seq])

    return variations(lo) - variations(hi)


# --- sublevel sets ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Span:
    """Interval with algebraic endpoints; closedness flags matter only at domain ends."""

    lo: AlgebraicNumber
    hi: AlgebraicNumber
    lo_closed: bool = False
    hi_closed: bool = False

    def contains(self, t) -> bool:
        t = as_fraction(t)
        c_lo = compare_rational(self.lo, t)
        c_hi = compare_rational(self.hi, t)
        left_ok = c_lo < 0 or (c_lo == 0 and self.lo_closed)
        right_ok = c_hi > 0 or (c_hi == 0 and self.hi_closed)
        return left_ok and right_ok

    def __repr__(self):
        lb = "[" if self.lo_closed else "("
        rb = "]" if self.hi_closed else ")"
        return f"{lb}{float(self.lo):.10g}, {float(self.hi):.10g}{rb}"


class Sublevel(NamedTuple):
    intervals: list[Span]
    degenerate: bool


def sublevel_intervals(p: UniPoly, domain) -> Sublevel:
    """Maximal intervals of the domain on which ``p < 0``.

    The identically-zero polynomial is reported as the whole domain with
    ``degenerate=True``; callers decide how to treat it.
    """
    lo, hi = as_fraction(domain[0]), as_fraction(domain[1])
    a, b = AlgebraicNumber.rational(lo), AlgebraicNumber.rational(hi)
    if p.is_zero():
        return Sublevel([Span(a, b, True, True)], True)
    roots = [r for r in isolate_roots(p, (lo, hi)) if not (r.is_rational and r.lo in (lo, hi))]
    pts = [a] + roots + [b]
    out: list[Span] = []
    for k in range(len(pts) - 1):
        t = rational_between(pts[k], pts[k + 1])
        if _sign(p.eval_fmpq(t)) < 0:
            lo_closed = k == 0 and _sign(p.eval_fmpq(lo)) < 0
            hi_closed = k == len(pts) - 2 and _sign(p.eval_fmpq(hi)) < 0
            out.append(Span(pts[k], pts[k + 1], lo_closed, hi_closed))
    return Sublevel(out, False)
