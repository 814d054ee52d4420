from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from gdtune.polynomials import UniPoly
from gdtune.realroots import (AlgebraicNumber, compare, isolate_roots, rational_between,
                              simplest_rational, sturm_count, sublevel_intervals)

ETA = UniPoly.identity()
W = Fraction(1, 2**30)

polys = st.lists(st.integers(-20, 20), min_size=1, max_size=13).map(UniPoly).filter(
    lambda p: not p.is_zero())


def test_sqrt_two_is_isolated_to_the_target_width():
    (r,) = isolate_roots(ETA**2 - 2, (0, 2))
    assert r.lo**2 <= 2 <= r.hi**2 and r.width <= W


def test_repeated_rational_root_is_exact():
    (r,) = isolate_roots((ETA - 1) ** 2, (0, 2))
    assert r.is_rational and r.lo == 1


def test_cubic_roots():
    roots = isolate_roots(ETA**3 - 6 * ETA**2 + 11 * ETA - 6, (0, 4))
    assert [r.lo for r in roots] == [1, 2, 3] and all(r.is_rational for r in roots)


def test_sublevel_examples():
    (s,) = sublevel_intervals(ETA**2 - 1, (0, 2)).intervals
    assert s.lo == AlgebraicNumber.rational(0) and s.lo_closed and s.hi == AlgebraicNumber.rational(1)
    assert sublevel_intervals(ETA**2 + 1, (0, 2)).intervals == []
    spans = sublevel_intervals((ETA - 1) * (ETA - 2) * (ETA - 3), (0, 4)).intervals
    assert [(s.lo.lo, s.hi.lo) for s in spans] == [(0, 1), (2, 3)]


def test_zero_polynomial_is_flagged_degenerate():
    res = sublevel_intervals(UniPoly(), (0, 1))
    assert res.degenerate and len(res.intervals) == 1


def test_comparisons_between_algebraic_numbers():
    (s2,) = isolate_roots(ETA**2 - 2, (0, 2))
    (s2b,) = isolate_roots((ETA**2 - 2) * (ETA + 5), (0, 2))
    assert s2 == s2b and s2 < AlgebraicNumber.rational(Fraction(3, 2))
    assert compare(s2, AlgebraicNumber.rational(1)) == 1
    r = rational_between(AlgebraicNumber.rational(1), s2)
    assert 1 < r and r**2 < 2


def test_simplest_rational():
    assert simplest_rational(Fraction(1, 3), Fraction(1, 2)) == Fraction(1, 2)
    assert simplest_rational(Fraction(31, 100), Fraction(33, 100)) == Fraction(5, 16)
    assert simplest_rational(Fraction(-7, 2), Fraction(-3, 1)) == -3


@settings(max_examples=200, deadline=None)
@given(polys)
def test_root_count_matches_sturm(p):
    assert len(isolate_roots(p, (-3, 3))) == sturm_count(p, -3, 3) + (p(-3) == 0)


@settings(max_examples=100, deadline=None)
@given(polys)
def test_brackets_straddle_and_survive_refinement(p):
    for r in isolate_roots(p, (-3, 3)):
        if r.is_rational:
            assert p(r.lo) == 0
            continue
        z = r.defining
        assert z(r.lo) * z(r.hi) <= 0 and r.width <= W
        finer = r.refine(W / 1024)
        assert r.lo <= finer.lo <= finer.hi <= r.hi and finer == r


@settings(max_examples=100, deadline=None)
@given(polys, st.lists(st.fractions(-3, 3, max_denominator=64), min_size=10, max_size=10))
def test_sublevel_membership_is_exact(p, pts):
    spans = sublevel_intervals(p, (-3, 3)).intervals
    assert len(spans) <= p.degree // 2 + 1
    for t in pts + [Fraction(-3), Fraction(3)]:
        assert any(s.contains(t) for s in spans) == (p(t) < 0)


def test_bracket_next_to_an_exact_midpoint_root():
    # 0 is hit exactly by the first bisection; the neighbouring bracket starts there
    p = UniPoly([0, 0, -18, 13, -11, -4, 18, -11, 4, 17, -2, 10])
    roots = isolate_roots(p, (-3, 3))
    assert len(roots) == sturm_count(p, -3, 3) == 2
    assert roots[0] == 0 and float(roots[1]) > 0.5
    assert roots[1].defining(roots[1].lo) != 0
