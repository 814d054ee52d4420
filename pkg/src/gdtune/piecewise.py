"""Exact piecewise-constant and piecewise-polynomial functions of one parameter.

Cells are the open intervals between consecutive breakpoints; the first and
last cells also contain the domain endpoints.  A query exactly at a
breakpoint returns the value of the cell to its left.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Any, NamedTuple, Sequence

from .errors import DomainMismatch, ParseError
from .polynomials import UniPoly, as_fraction, format_rational, parse_rational
from .realroots import (ISOLATION_WIDTH, AlgebraicNumber, compare, compare_rational,
                        poly_enclosure, roots_between)

_key = cmp_to_key(compare)


def _domain(domain) -> tuple[Fraction, Fraction]:
    lo, hi = as_fraction(domain[0]), as_fraction(domain[1])
    if not lo < hi:
        raise ValueError(f"empty domain [{lo}, {hi}]")
    return lo, hi


def _cell_index(breakpoints: Sequence[AlgebraicNumber], t) -> int:
    """Index of the cell holding ``t``; a breakpoint belongs to the cell on its left."""
    cmp = compare if isinstance(t, AlgebraicNumber) else compare_rational
    lo, hi = 0, len(breakpoints)
    while lo < hi:
        mid = (lo + hi) // 2
        if cmp(breakpoints[mid], t) < 0:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _value_record(v):
    return v if isinstance(v, int) else format_rational(v)


def _value_parse(v, fld):
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    if isinstance(v, str):
        r = parse_rational(v, fld)
        return int(r) if r.denominator == 1 else r
    raise ParseError("value must be an integer or 'num/den' string", field=fld)


@dataclass(frozen=True, eq=False)
class PwConstFn:
    """Piecewise-constant function on a closed rational domain."""

    domain: tuple[Fraction, Fraction]
    breakpoints: tuple[AlgebraicNumber, ...]
    values: tuple[Any, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", _domain(self.domain))
        object.__setattr__(self, "breakpoints", tuple(self.breakpoints))
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more value than breakpoints")

    @classmethod
    def constant(cls, domain, value) -> "PwConstFn":
        return cls(domain, (), (value,))

    @property
    def n_pieces(self) -> int:
        return len(self.values)

    def __call__(self, t):
        """Value at a rational or algebraic ``t`` (left-cell value at breakpoints)."""
        lo, hi = self.domain
        if isinstance(t, AlgebraicNumber):
            inside = compare_rational(t, lo) >= 0 and compare_rational(t, hi) <= 0
        else:
            t = as_fraction(t)
            inside = lo <= t <= hi
        if not inside:
            raise ValueError(f"{t} outside domain [{lo}, {hi}]")
        return self.values[_cell_index(self.breakpoints, t)]

    def cell_endpoints(self):
        lo, hi = self.domain
        pts = [AlgebraicNumber.rational(lo), *self.breakpoints, AlgebraicNumber.rational(hi)]
        return list(zip(pts[:-1], pts[1:]))

    def cells(self):
        """Iterate (left, right, value) over the cells in order."""
        for (a, b), v in zip(self.cell_endpoints(), self.values):
            yield a, b, v

    def canonical(self) -> "PwConstFn":
        """Drop removable breakpoints (equal values on both sides)."""
        bps, vals = [], [self.values[0]]
        for b, v in zip(self.breakpoints, self.values[1:]):
            if v == vals[-1]:
                continue
            bps.append(b)
            vals.append(v)
        if len(bps) == len(self.breakpoints):
            return self
        return type(self)(self.domain, tuple(bps), tuple(vals))

    def is_canonical(self) -> bool:
        return all(a != b for a, b in zip(self.values, self.values[1:]))

    def __eq__(self, other):
        if not isinstance(other, PwConstFn):
            return NotImplemented
        return (self.domain == other.domain and self.values == other.values
                and len(self.breakpoints) == len(other.breakpoints)
                and all(compare(a, b) == 0 for a, b in zip(self.breakpoints, other.breakpoints)))

    __hash__ = None

    def to_record(self) -> dict:
        return {
            "type": "pwconst",
            "domain": [format_rational(self.domain[0]), format_rational(self.domain[1])],
            "breakpoints": [b.to_record() for b in self.breakpoints],
            "values": [_value_record(v) for v in self.values],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "PwConstFn":
        dom = (parse_rational(rec["domain"][0], "domain"), parse_rational(rec["domain"][1], "domain"))
        bps = tuple(AlgebraicNumber.from_record(b, f"breakpoints[{k}]")
                    for k, b in enumerate(rec["breakpoints"]))
        vals = tuple(_value_parse(v, f"values[{k}]") for k, v in enumerate(rec["values"]))
        return cls(dom, bps, vals)

    def vertices(self) -> list[tuple[float, float]]:
        """Step-function outline as (x, y) float pairs, for plotting."""
        out = []
        for a, b, v in self.cells():
            out.append((float(a), float(v)))
            out.append((float(b), float(v)))
        return out


@dataclass(frozen=True, eq=False)
class PwPolyFn:
    """Piecewise-polynomial function; ``pieces[k]`` applies on cell k."""

    domain: tuple[Fraction, Fraction]
    breakpoints: tuple[AlgebraicNumber, ...]
    pieces: tuple[UniPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", _domain(self.domain))
        object.__setattr__(self, "breakpoints", tuple(self.breakpoints))
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if len(self.pieces) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more piece than breakpoints")

    @property
    def n_pieces(self) -> int:
        return len(self.pieces)

    def piece_at(self, t) -> UniPoly:
        return self.pieces[_cell_index(self.breakpoints, as_fraction(t))]

    def __call__(self, t):
        if isinstance(t, float):
            k = _cell_index(self.breakpoints, Fraction(t))
            return self.pieces[k](t)
        t = as_fraction(t)
        return self.piece_at(t)(t)

    def cell_endpoints(self):
        lo, hi = self.domain
        pts = [AlgebraicNumber.rational(lo), *self.breakpoints, AlgebraicNumber.rational(hi)]
        return list(zip(pts[:-1], pts[1:]))

    def canonical(self) -> "PwPolyFn":
        bps, pcs = [], [self.pieces[0]]
        for b, p in zip(self.breakpoints, self.pieces[1:]):
            if p == pcs[-1]:
                continue
            bps.append(b)
            pcs.append(p)
        return PwPolyFn(self.domain, tuple(bps), tuple(pcs))

    def __eq__(self, other):
        if not isinstance(other, PwPolyFn):
            return NotImplemented
        return (self.domain == other.domain and self.pieces == other.pieces
                and len(self.breakpoints) == len(other.breakpoints)
                and all(compare(a, b) == 0 for a, b in zip(self.breakpoints, other.breakpoints)))

    __hash__ = None

    def to_record(self) -> dict:
        return {
            "type": "pwpoly",
            "domain": [format_rational(self.domain[0]), format_rational(self.domain[1])],
            "breakpoints": [b.to_record() for b in self.breakpoints],
            "pieces": [p.to_list() for p in self.pieces],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "PwPolyFn":
        dom = (parse_rational(rec["domain"][0], "domain"), parse_rational(rec["domain"][1], "domain"))
        bps = tuple(AlgebraicNumber.from_record(b, f"breakpoints[{k}]")
                    for k, b in enumerate(rec["breakpoints"]))
        pcs = tuple(UniPoly([parse_rational(c, f"pieces[{k}]") for c in p])
                    for k, p in enumerate(rec["pieces"]))
        return cls(dom, bps, pcs)

    def sample(self, n_per_cell: int = 16) -> list[tuple[float, float]]:
        out = []
        for (a, b), p in zip(self.cell_endpoints(), self.pieces):
            fa, fb = float(a), float(b)
            for k in range(n_per_cell + 1):
                x = fa + (fb - fa) * k / n_per_cell
                out.append((x, p(x)))
        return out


def partition_refine(partitions: Sequence[Sequence[AlgebraicNumber]]) -> list[AlgebraicNumber]:
    """Sorted union of breakpoint lists with exact duplicate elimination."""
    merged = sorted((b for part in partitions for b in part), key=_key)
    out: list[AlgebraicNumber] = []
    for b in merged:
        if out and compare(out[-1], b) == 0:
            continue
        out.append(b)
    return out


def _sweep(fs: Sequence[PwConstFn]):
    """Single sorted pass over all breakpoints of step functions on a shared domain.

    Returns (domain, breakpoints, events): events[k] lists the indices of the
    functions whose value changes at breakpoints[k].  O(N log N) overall.
    """
    if not fs:
        raise ValueError("need at least one function")
    dom = fs[0].domain
    for f in fs[1:]:
        if f.domain != dom:
            raise DomainMismatch(f"domains differ: {dom} vs {f.domain}")
    tagged = [(b, i) for i, f in enumerate(fs) for b in f.breakpoints]
    tagged.sort(key=lambda t: _key(t[0]))
    bps: list[AlgebraicNumber] = []
    events: list[list[int]] = []
    k = 0
    while k < len(tagged):
        b = tagged[k][0]
        group = [tagged[k][1]]
        k += 1
        while k < len(tagged) and compare(tagged[k][0], b) == 0:
            group.append(tagged[k][1])
            k += 1
        bps.append(b)
        events.append(group)
    return dom, bps, events


def _refined(fs: Sequence[PwConstFn]):
    """Common refinement: (domain, breakpoints, rows), rows[k][i] = value of fs[i] on cell k."""
    dom, bps, events = _sweep(fs)
    pos = [0] * len(fs)
    current = [f.values[0] for f in fs]
    rows = [tuple(current)]
    for group in events:
        for i in group:
            pos[i] += 1
            current[i] = fs[i].values[pos[i]]
        rows.append(tuple(current))
    return dom, bps, rows


def pwconst_sum(fs: Sequence[PwConstFn], mean: bool = True) -> PwConstFn:
    """Cellwise mean (or sum with ``mean=False``) of step functions, canonicalized."""
    dom, bps, events = _sweep(fs)
    n = len(fs)
    pos = [0] * n
    total = sum((Fraction(f.values[0]) for f in fs), Fraction(0))
    sums = [total]
    for group in events:
        for i in group:
            pos[i] += 1
            total += Fraction(fs[i].values[pos[i]]) - Fraction(fs[i].values[pos[i] - 1])
        sums.append(total)
    vals = []
    for s in sums:
        v = s / n if mean else s
        vals.append(int(v) if v.denominator == 1 else v)
    return PwConstFn(dom, tuple(bps), tuple(vals)).canonical()


def pwconst_mean(fs: Sequence[PwConstFn]) -> PwConstFn:
    return pwconst_sum(fs, mean=True)


class ArgMin(NamedTuple):
    left: AlgebraicNumber
    right: AlgebraicNumber
    value: Any
    eta: Fraction


def pwconst_argmin(f: PwConstFn) -> ArgMin:
    """Leftmost minimizing cell and a rational point certified inside it."""
    best = min(range(f.n_pieces), key=lambda k: (f.values[k], k))
    a, b = f.cell_endpoints()[best]
    if a.is_rational and b.is_rational:
        eta = (a.lo + b.lo) / 2
    else:
        a2, b2 = a, b
        while not a2.hi < b2.lo:
            a2, b2 = a2.bisect(), b2.bisect()
        eta = (a2.hi + b2.lo) / 2
    return ArgMin(a, b, f.values[best], eta)


def pw_sup_diff(f: PwConstFn, g: PwConstFn) -> Fraction:
    """Exact sup over the domain of |f - g|."""
    _, _, rows = _refined([f, g])
    return max(abs(Fraction(a) - Fraction(b)) for a, b in rows)


class PolyMin(NamedTuple):
    location: Any           # Fraction or AlgebraicNumber
    value: Any              # Fraction when exact, else (lo, hi) bracket
    exact: bool


def _value_bracket(p: UniPoly, x: AlgebraicNumber, width=ISOLATION_WIDTH):
    if x.is_rational:
        v = p(x.lo)
        return v, v
    while True:
        lo, hi = poly_enclosure(p, x.lo, x.hi)
        if hi - lo <= width:
            return lo, hi
        x = x.refine(x.width / 4)


def pwpoly_min(f: PwPolyFn) -> PolyMin:
    """Global minimum over the closed domain (one-sided limits at breakpoints).

    Candidates are cell endpoints and critical points inside cells.  Values
    at irrational candidates are certified brackets of width <= 2^-30;
    candidates whose brackets overlap are treated as ties and the leftmost
    wins.
    """
    cands = []
    for (a, b), p in zip(f.cell_endpoints(), f.pieces):
        pts = [a]
        dp = p.derivative()
        if dp.degree >= 1:
            pts.extend(_crit_points(dp, a, b))
        pts.append(b)
        for x in pts:
            cands.append((x, _value_bracket(p, x)))
    # strictly lower (certified) replaces; overlapping enclosures count as ties
    best_x, (blo, bhi) = cands[0]
    for x, (lo, hi) in cands[1:]:
        if hi < blo:
            best_x, blo, bhi = x, lo, hi
    if isinstance(best_x, AlgebraicNumber) and best_x.is_rational:
        return PolyMin(best_x.lo, blo, True)
    if blo == bhi:
        return PolyMin(best_x, blo, True)
    return PolyMin(best_x, (blo, bhi), False)


def _crit_points(dp: UniPoly, a: AlgebraicNumber, b: AlgebraicNumber):
    return roots_between(dp, a, b)
