import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdtune.errors import CapExceeded
from gdtune.gdtrace import trace_stepsize
from gdtune.instances import Instance, InstanceDistribution, sample_instances
from gdtune.numeric import run_gd
from gdtune.objective import GDConfig, StepSize
from gdtune.piecewise import PwConstFn, pw_sup_diff, pwconst_mean
from gdtune.realroots import AlgebraicNumber
from gdtune.tuner import (CSV_HEADER, derive_seed, empirical_pdim_lower_bound, erm_stepsize,
                          momentum_grid_tune, sample_duals, schedule_coordinate_descent,
                          uniform_convergence_experiment)

from conftest import scalar_quadratic

CFG = GDConfig(5, Fraction(1, 10), (0, 2))
QUADS = InstanceDistribution("scalar_quadratic", {"curvature": ["1/2", "2"]}, 7)


def step(values, bps):
    return PwConstFn((0, 2), [AlgebraicNumber.rational(b) for b in bps], values)


def quad_instance(c):
    return Instance(scalar_quadratic(c), (1,), label=f"c={c}")


def test_erm_examples():
    q = trace_stepsize(scalar_quadratic(1), [1], CFG)
    e = erm_stepsize([q, q])
    assert (e.eta_hat, e.train_mean_cost) == (1, 2)
    e = erm_stepsize([PwConstFn.constant((0, 2), 5)])
    assert (e.eta_hat, e.train_mean_cost) == (1, 5)
    e = erm_stepsize([step([2, 3], [1]), step([3, 2], [1])])
    assert (e.eta_hat, e.train_mean_cost, e.cell[0].lo, e.cell[1].lo) == (1, Fraction(5, 2), 0, 2)
    with pytest.raises(ValueError):
        erm_stepsize([])


def test_erm_mean_matches_the_float_oracle_at_eta_hat():
    sample = sample_instances(QUADS, 12, 3)
    e = erm_stepsize(sample_duals(sample, CFG))
    costs = [int(run_gd(i.objective, StepSize(i.x0), CFG, [float(e.eta_hat)]).costs[0])
             for i in sample]
    assert Fraction(sum(costs), len(costs)) == e.train_mean_cost
    assert 1 <= e.train_mean_cost <= CFG.H
    assert e.cell[0] < AlgebraicNumber.rational(e.eta_hat) < e.cell[1]


def test_identical_instances_have_zero_gap():
    dist = InstanceDistribution("scalar_quadratic", {"curvature": [1, 1]}, 0)
    rep = uniform_convergence_experiment(dist, [2, 4], 2, CFG, test_size=5)
    assert all(r.sup_gap == 0 for r in rep.rows)


def test_single_instance_gap_is_the_sup_diff_to_the_test_mean():
    rep = uniform_convergence_experiment(QUADS, [1], 1, CFG, test_size=20, seed=4)
    test = pwconst_mean(sample_duals(sample_instances(QUADS, 20, derive_seed(4, 0)), CFG))
    train = sample_duals(sample_instances(QUADS, 1, derive_seed(4, 1)), CFG)[0]
    assert rep.rows[0].sup_gap == pw_sup_diff(train, test)


def test_report_rows_respect_the_gap_invariant_and_csv_layout():
    rep = uniform_convergence_experiment(QUADS, [2, 8], 3, CFG, test_size=30, seed=2)
    for r in rep.rows:
        assert r.sup_gap >= abs(r.train_mean - r.test_mean)
    lines = rep.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_HEADER) and len(lines) == 7
    assert all(line.endswith(",") for line in lines[1:])
    assert '"test_size": 30' in rep.metadata_json()
    timed = uniform_convergence_experiment(QUADS, [2], 1, CFG, test_size=4, timing=True)
    assert not timed.to_csv().splitlines()[1].endswith(",")


def test_experiment_argument_checks():
    with pytest.raises(ValueError):
        uniform_convergence_experiment(QUADS, [], 1, CFG)
    with pytest.raises(ValueError):
        uniform_convergence_experiment(QUADS, [4], 0, CFG)


def test_derive_seed_is_stable_and_key_sensitive():
    assert derive_seed(1, 2) == derive_seed(1, 2)
    assert len({derive_seed(1, k) for k in range(50)}) == 50
    assert 0 <= derive_seed(-5, 3) < 2**64


def test_pdim_examples():
    flat = [PwConstFn.constant((0, 2), v) for v in (1, 2)]
    assert empirical_pdim_lower_bound(flat, 3) == 0
    assert empirical_pdim_lower_bound([step([1, 3], [1])], 3) == 1
    cfg = GDConfig(8, Fraction(1, 10), (0, 2))
    pair = [trace_stepsize(scalar_quadratic(c), [1], cfg) for c in (1, 3)]
    assert empirical_pdim_lower_bound(pair, 3) == 2
    with pytest.raises(CapExceeded):
        empirical_pdim_lower_bound(pair, 4)


@st.composite
def dual_lists(draw):
    out = []
    for _ in range(draw(st.integers(1, 4))):
        cuts = sorted(set(draw(st.lists(st.fractions(0, 2, max_denominator=6), max_size=4))) - {0, 2})
        vals = draw(st.lists(st.integers(1, 5), min_size=len(cuts) + 1, max_size=len(cuts) + 1))
        out.append(step(vals, cuts).canonical())
    return out


@settings(max_examples=60, deadline=None)
@given(dual_lists())
def test_pdim_never_exceeds_log_of_cell_count(duals):
    from gdtune.piecewise import _refined
    _, _, rows = _refined(duals)
    v = empirical_pdim_lower_bound(duals, 3)
    assert v <= math.log2(len(set(rows))) + 1e-12 or v == 0


def test_schedule_with_one_step_reduces_to_erm():
    sample = [quad_instance(Fraction(1, 2)), quad_instance(2)]
    cfg = GDConfig(1, Fraction(1, 10), (0, 2))
    res = schedule_coordinate_descent(sample, cfg, 1, [Fraction(1, 4)])
    assert len(res.sweeps[0]) == 1 and res.costs[-1] == res.sweeps[0][0].train_mean_cost == 1


def test_schedule_descent_never_increases_cost():
    sample = sample_instances(QUADS, 6, 0)
    cfg = GDConfig(2, Fraction(1, 10), (0, 2))
    res = schedule_coordinate_descent(sample, cfg, 2, [Fraction(1, 4)] * 2)
    assert all(b <= a for a, b in zip(res.costs, res.costs[1:]))
    assert res.costs[-1] <= res.costs[0]


def test_optimal_schedule_is_a_fixed_point():
    sample = [quad_instance(1)]
    cfg = GDConfig(3, Fraction(1, 10), (0, 2))
    res = schedule_coordinate_descent(sample, cfg, 1, [1, 1, 1])
    assert res.schedule == (1, 1, 1) and res.costs == [2, 2, 2, 2]


def test_momentum_grid_reductions():
    sample = sample_instances(QUADS, 5, 1)
    only_zero = momentum_grid_tune(sample, CFG, [0])
    plain = erm_stepsize(sample_duals(sample, CFG))
    assert (only_zero.eta_hat, only_zero.mean_cost) == (plain.eta_hat, plain.train_mean_cost)
    both = momentum_grid_tune(sample, CFG, [0, Fraction(1, 2)])
    assert both.mean_cost <= both.per_gamma[0].train_mean_cost
    with pytest.raises(ValueError):
        momentum_grid_tune(sample, CFG, [-1])


def test_parallel_workers_do_not_change_results():
    a = uniform_convergence_experiment(QUADS, [2, 4], 2, CFG, test_size=8, seed=3, workers=1)
    b = uniform_convergence_experiment(QUADS, [2, 4], 2, CFG, test_size=8, seed=3, workers=2)
    assert a.to_csv() == b.to_csv()
