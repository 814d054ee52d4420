from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdtune.errors import (DegenerateTrajectory, DimensionError, MissingPiece,
                           SymbolicBudgetExceeded)
from gdtune.gdtrace import degree_bound, trace_param, trace_stepsize, trace_validation
from gdtune.instances import parse_instance
from gdtune.objective import (GDConfig, InitCoord, InitScale, MomentumEta, PwPolyObjective,
                              ScheduleCoord, StepSize)
from gdtune.polynomials import Budget, MultiPoly, UniPoly
from gdtune.realroots import AlgebraicNumber, isolate_roots

from conftest import scalar_quadratic

ETA = UniPoly.identity()
X = MultiPoly.variable(0, 1)
TENTH = Fraction(1, 10)
CFG = GDConfig(5, TENTH, (0, 2))


def relu_scalar():
    # boundary w; w > 0 -> (w - 1)^2, w < 0 -> 1
    return PwPolyObjective(1, [X], {"+": (X - 1) ** 2, "-": MultiPoly.constant(1, 1)})


def test_quadratic_worked_example():
    dual = trace_stepsize(scalar_quadratic(1), [1], CFG)
    assert dual.values == (5, 4, 3, 2, 3, 4, 5)
    assert dual(1) == 2 and dual(Fraction(9, 10)) == 3 and dual(Fraction(11, 10)) == 2
    b = dual.breakpoints
    assert b[2] == Fraction(9, 10) and b[3] == Fraction(11, 10)
    r2 = isolate_roots(10 * ETA**2 - 1, (0, 1))[0]
    assert b[1] == isolate_roots(10 * (1 - ETA) ** 2 - 1, (0, 1))[0]
    assert abs(float(b[1]) - (1 - float(r2))) < 1e-8
    assert abs(float(b[0]) - (1 - 10 ** (-1 / 3))) < 1e-9


def test_linear_objective_never_converges():
    dual = trace_stepsize(PwPolyObjective.polynomial(X), [3], CFG)
    assert dual.values == (5,) and dual.breakpoints == ()


def test_relu_hand_iteration():
    cfg = GDConfig(5, TENTH, (0, Fraction(3, 2)))
    dual = trace_stepsize(relu_scalar(), [2], cfg)
    assert dual.breakpoints[-1] == 1 and dual.breakpoints[-1].is_rational
    assert dual(1) == 5 and dual(Fraction(5, 4)) == 2
    for k in range(1, 100):
        eta = Fraction(k, 100)
        hand = next((i for i in range(1, 6) if 2 * abs(1 - 2 * eta) ** (i - 1) < TENTH), 5)
        assert dual(eta) == hand


def test_relu_bundled_instance_matches_handwritten_objective():
    from importlib import resources
    text = (resources.files("gdtune") / "data" / "relu_scalar.json").read_text()
    inst = parse_instance(text)
    cfg = GDConfig(5, TENTH, (0, Fraction(3, 2)))
    assert trace_stepsize(inst.objective, inst.x0, cfg) == trace_stepsize(relu_scalar(), [2], cfg)


def test_init_scale_breakpoints_double():
    dual = trace_param(scalar_quadratic(1), InitScale((1,), Fraction(1, 2)), GDConfig(5, TENTH, (0, 4)))
    assert dual.values == (1, 2, 3, 4, 5)
    assert [b.lo for b in dual.breakpoints] == [TENTH * 2 ** (i - 1) for i in range(1, 5)]


def test_init_coord_matches_init_scale_in_one_dimension():
    cfg = GDConfig(5, TENTH, (0, 4))
    a = trace_param(scalar_quadratic(1), InitScale((1,), Fraction(1, 2)), cfg)
    b = trace_param(scalar_quadratic(1), InitCoord(0, (7,), Fraction(1, 2)), cfg)
    assert a == b


def test_momentum_without_momentum_is_plain_descent():
    f = scalar_quadratic(1)
    assert trace_param(f, MomentumEta(0, (1,)), CFG) == trace_stepsize(f, [1], CFG)


def test_literal_momentum_follows_the_lagged_recurrence():
    # x_{i+1} = x_i + y_i with y_{i+1} = gamma*y_i - eta*grad(x_i): the first move is a no-op
    f, gamma = scalar_quadratic(1), Fraction(1, 2)
    dual = trace_param(f, MomentumEta(gamma, (1,), literal=True), CFG)
    for k in range(1, 40):
        eta = Fraction(k, 20)
        x, y, cost = Fraction(1), Fraction(0), 5
        for i in range(1, 6):
            if x * x < TENTH**2:
                cost = i
                break
            x, y = x + y, gamma * y - eta * x
        if not any(b == eta for b in dual.breakpoints):
            assert dual(eta) == cost


def test_schedule_coordinate_two_step_example():
    binding = ScheduleCoord(1, (0, 1, 0), (1,))
    dual = trace_param(scalar_quadratic(1), binding, GDConfig(3, TENTH, (0, 2)))
    assert dual.values == (3, 2, 3)
    assert [b.lo for b in dual.breakpoints] == [Fraction(9, 10), Fraction(11, 10)]


def test_validation_dual_pieces_follow_the_closed_form():
    vd = trace_validation(scalar_quadratic(1), PwPolyObjective.polynomial(X**2), [1], CFG)
    assert vd.piece_at(1) == (1 - ETA) ** 2
    assert vd.piece_at(Fraction(12, 10)) == (1 - ETA) ** 4
    assert vd.piece_at(Fraction(1, 10)) == (1 - ETA) ** 10
    zero = trace_validation(scalar_quadratic(1), PwPolyObjective.polynomial(MultiPoly(1)), [1], CFG)
    assert zero.n_pieces == 1 and zero.pieces[0].is_zero()


def test_validation_dual_on_the_flat_relu_region():
    cfg = GDConfig(5, TENTH, (0, Fraction(3, 2)))
    vd = trace_validation(relu_scalar(), PwPolyObjective.polynomial((X - 1) ** 2), [2], cfg)
    assert vd.piece_at(Fraction(5, 4)) == (1 - 2 * ETA) ** 2


def test_validation_dual_is_continuous_where_only_the_cost_changes():
    f = scalar_quadratic(1)
    vd = trace_validation(f, PwPolyObjective.polynomial(X**2), [1], CFG)
    # at 9/10 the cost drops from 3 to 2 and the returned point jumps from x3 to x2
    left, right = vd.piece_at(Fraction(89, 100)), vd.piece_at(Fraction(91, 100))
    assert left != right
    # with f_v independent of x, every cost change is invisible
    flat = trace_validation(f, PwPolyObjective.polynomial(MultiPoly.constant(3, 1)), [1], CFG)
    assert flat.n_pieces == 1


def test_degenerate_trajectory_on_a_boundary():
    with pytest.raises(DegenerateTrajectory):
        trace_stepsize(relu_scalar(), [0], CFG)


def test_missing_piece_is_reported():
    f = PwPolyObjective(1, [X], {"+": (X - 1) ** 2})
    with pytest.raises(MissingPiece):
        trace_stepsize(f, [-1], CFG)


def test_budget_and_dimension_errors():
    with pytest.raises(SymbolicBudgetExceeded):
        trace_stepsize(PwPolyObjective.polynomial(X**4), [1], GDConfig(5, TENTH, (0, 1), Budget(50)))
    with pytest.raises(DimensionError):
        trace_stepsize(scalar_quadratic(1), [1, 2], CFG)
    with pytest.raises(ValueError):
        GDConfig(0, TENTH, (0, 1))
    with pytest.raises(ValueError):
        GDConfig(3, TENTH, (-1, 1))


def test_degree_bound_schedule():
    assert [degree_bound(StepSize((1,)), 3, i) for i in range(1, 5)] == [1, 1, 3, 9]
    assert [degree_bound(InitScale((1,), 1), 3, i) for i in range(1, 4)] == [1, 3, 9]


def test_stats_are_recorded_per_round():
    dual = trace_stepsize(PwPolyObjective.polynomial(X**3 - X), [Fraction(1, 2)], CFG)
    st_ = dual.stats
    assert len(st_.rounds) == 5 and st_.degree_violations == 0
    assert dual.n_pieces <= st_.piece_envelope == (2 * 3) ** 6


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(-1, 1, max_denominator=8), min_size=3, max_size=4),
       st.fractions(-1, 1, max_denominator=8), st.integers(2, 5))
def test_trace_agrees_with_exact_iteration(coeffs, x0, H):
    f = MultiPoly(1, {(k,): c for k, c in enumerate(coeffs)})
    cfg = GDConfig(H, Fraction(1, 4), (0, 1))
    dual = trace_stepsize(PwPolyObjective.polynomial(f), [x0], cfg)
    assert dual.is_canonical() and dual.stats.degree_violations == 0
    grad = f.gradient[0]
    for k in range(1, 12):
        eta = Fraction(k, 12)
        x, cost = x0, H
        for i in range(1, H + 1):
            g = grad([x])
            if g * g < cfg.theta**2:
                cost = i
                break
            x = x - eta * g
        on_bp = any(b == eta for b in dual.breakpoints)
        if not on_bp:
            assert dual(eta) == cost
