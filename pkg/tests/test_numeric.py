import warnings
from fractions import Fraction

import numpy as np
import pytest

from gdtune.bounds import BoundQuery, bounds_calculator
from gdtune.errors import NonFiniteIterate
from gdtune.gdtrace import trace_param, trace_stepsize
from gdtune.instances import gen_net_mse
from gdtune.numeric import numeric_dual, oracle_compare, run_gd
from gdtune.objective import GDConfig, MomentumEta, PwPolyObjective, StepSize
from gdtune.polynomials import MultiPoly

from conftest import scalar_quadratic

X = MultiPoly.variable(0, 1)
CFG = GDConfig(5, Fraction(1, 10), (0, 2))


def test_quadratic_numeric_dual_matches_exact():
    f = scalar_quadratic(1)
    exact = trace_stepsize(f, [1], CFG)
    nd = numeric_dual(f, StepSize((1,)), CFG, grid=10_000, refine_rounds=20)
    assert nd.values == list(exact.values)
    assert np.allclose(nd.breakpoints, [float(b) for b in exact.breakpoints], atol=1e-8)
    rep = oracle_compare(exact, f, StepSize((1,)), CFG)
    assert rep.ok and rep.checked + rep.skipped == 10_001
    assert nd.to_pwconst().values == exact.values


def test_never_converging_objective_has_no_jumps():
    nd = numeric_dual(PwPolyObjective.polynomial(X), StepSize((1,)), CFG, grid=500)
    assert nd.n_jumps == 0 and set(nd.costs) == {5} and nd.unresolved == []


def test_overflow_is_flagged_and_costs_H():
    f = PwPolyObjective.polynomial(X**4)
    cfg = GDConfig(8, Fraction(1, 10), (0, 100))
    with pytest.warns(NonFiniteIterate):
        run = run_gd(f, StepSize((3,)), cfg, [50.0, 0.001])
    assert run.nonfinite.tolist() == [True, False] and run.costs[0] == 8


def test_returned_point_is_the_converged_iterate():
    run = run_gd(scalar_quadratic(1), StepSize((1,)), CFG, [1.0, 0.0])
    assert run.costs.tolist() == [2, 5]
    assert run.points[0, 0] == 0.0 and run.points[1, 0] == 1.0


def test_momentum_duals_agree_with_the_float_oracle():
    f = scalar_quadratic(1)
    for gamma in (Fraction(0), Fraction(1, 4), Fraction(1, 2)):
        b = MomentumEta(gamma, (1,))
        rep = oracle_compare(trace_param(f, b, CFG), f, b, CFG, grid=1000)
        assert rep.ok, (gamma, rep.mismatches[:3])


def test_sigmoid_network_runs_numerically():
    data = [((Fraction(1, 2),), (Fraction(1, 4),)), ((-1,), (Fraction(3, 4),))]
    f = gen_net_mse([1, 2, 1], "sigmoid", data, [0, 1, 2, 3])
    cfg = GDConfig(10, Fraction(1, 10), (0, 8))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonFiniteIterate)
        nd = numeric_dual(f, StepSize((Fraction(1, 2), Fraction(-1, 2), 1, 1)), cfg, grid=10_000)
    bound = bounds_calculator(BoundQuery("pieces_pfaffian", q=1, d=4, H=10, Delta=2, M=2))
    assert 1 <= nd.n_jumps and nd.n_jumps + 1 <= bound.value
    assert all(1 <= c <= 10 for c in nd.costs)


def test_grid_must_have_two_points():
    with pytest.raises(ValueError):
        numeric_dual(scalar_quadratic(1), StepSize((1,)), CFG, grid=1)
