from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdtune.errors import DimensionError, ParseError, SymbolicBudgetExceeded
from gdtune.polynomials import (Budget, MultiPoly, UniPoly, format_rational, mp_compose_uni,
                                mp_eval, mp_gradient, parse_rational)

x, y = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
X = MultiPoly.variable(0, 1)
ETA = UniPoly.identity()

small_q = st.fractions(min_value=-4, max_value=4, max_denominator=16)


@st.composite
def multipolys(draw, dim):
    n = draw(st.integers(0, 6))
    terms = {}
    for _ in range(n):
        exps = tuple(draw(st.lists(st.integers(0, 2), min_size=dim, max_size=dim)))
        if sum(exps) <= 4:
            terms[exps] = draw(small_q)
    return MultiPoly(dim, terms)


@st.composite
def poly_and_point(draw):
    dim = draw(st.integers(1, 3))
    return (draw(multipolys(dim)), draw(multipolys(dim)),
            draw(st.lists(small_q, min_size=dim, max_size=dim)))


def test_eval_examples():
    assert mp_eval(x**2 + 3 * x * y, [1, 2]) == 7
    assert mp_eval(MultiPoly(1), [5]) == 0
    assert mp_eval(X**3 - 6 * X**2 + 11 * X - 6, [2]) == 0


def test_gradient_examples():
    assert mp_gradient(x**2 + 3 * x * y) == [2 * x + 3 * y, 3 * x]
    assert mp_gradient(MultiPoly.constant(7, 1)) == [MultiPoly(1)]
    assert mp_gradient(x**2 * y**3) == [2 * x * y**3, 3 * x**2 * y**2]


def test_compose_examples():
    assert mp_compose_uni(x * y, [ETA, ETA**2]) == ETA**3
    assert mp_compose_uni(X**2, [1 - ETA]) == ETA**2 - 2 * ETA + 1
    assert mp_compose_uni(x + y, [ETA**2 + 1, -(ETA**2)]) == UniPoly.constant(1)


def test_zero_terms_are_dropped_and_zero_has_degree_zero():
    f = MultiPoly(2, {(1, 0): 1, (0, 1): 0})
    assert f.terms == {(1, 0): Fraction(1)}
    z = x - x
    assert z.is_zero() and z.total_degree == 0 and z.terms == {}
    assert UniPoly([0, 0, 0]).coeffs == () and UniPoly([1, 2, 0]).degree == 1


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionError):
        x + X
    with pytest.raises(DimensionError):
        mp_eval(x, [1])
    with pytest.raises(DimensionError):
        mp_compose_uni(x, [ETA])


def test_budget_is_enforced():
    with pytest.raises(SymbolicBudgetExceeded):
        mp_compose_uni(X**5, [ETA**3], Budget(max_degree=10))
    with pytest.raises(SymbolicBudgetExceeded):
        Budget(max_bits=8).check(UniPoly([Fraction(1, 3**40)]))


def test_terms_round_trip_in_graded_lex_order():
    f = 3 * x**2 * y - Fraction(1, 2) * y + 4
    recs = f.to_terms()
    assert [r["exps"] for r in recs] == [[2, 1], [0, 1], [0, 0]]
    assert MultiPoly.from_terms(2, recs) == f
    with pytest.raises(ParseError):
        MultiPoly.from_terms(2, [{"coef": 0.5, "exps": [1, 0]}])


def test_rational_text_form():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert format_rational(Fraction(4, 2)) == "2/1"
    for bad in ("1/0", "0.5", "abc"):
        with pytest.raises(ParseError):
            parse_rational(bad)


@settings(max_examples=60, deadline=None)
@given(poly_and_point())
def test_eval_is_a_ring_homomorphism(case):
    f, g, pt = case
    assert mp_eval(f + g, pt) == mp_eval(f, pt) + mp_eval(g, pt)
    assert mp_eval(f * g, pt) == mp_eval(f, pt) * mp_eval(g, pt)


@settings(max_examples=60, deadline=None)
@given(poly_and_point(), st.lists(small_q, min_size=3, max_size=3), small_q)
def test_composition_commutes_with_evaluation(case, shifts, t):
    f, _, _ = case
    curve = [UniPoly([s, 1, -s]) for s in shifts[:f.dim]]
    u = mp_compose_uni(f, curve)
    assert u(t) == mp_eval(f, [c(t) for c in curve])
    assert u.degree <= 2 * f.total_degree


@settings(max_examples=40, deadline=None)
@given(poly_and_point())
def test_gradient_matches_finite_differences(case):
    f, _, pt = case
    h = 1e-6
    p = [float(v) + 0.123 for v in pt]
    for j, g in enumerate(mp_gradient(f)):
        up, dn = list(p), list(p)
        up[j] += h
        dn[j] -= h
        fd = (float(mp_eval(f, [Fraction(v) for v in up])) -
              float(mp_eval(f, [Fraction(v) for v in dn]))) / (2 * h)
        exact = float(mp_eval(g, [Fraction(v) for v in p]))
        assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact)) + 1e-6
