"""Hyperparameter selection from exact dual costs, and the experiments built on it."""

from __future__ import annotations

import csv
import io
import itertools
import json
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapExceeded, DegenerateTrajectory, SymbolicBudgetExceeded
from .gdtrace import trace_param
from .instances import Instance, InstanceDistribution, draw_instance, parse_instance, serialize_instance
from .objective import GDConfig, MomentumEta, ScheduleCoord, StepSize
from .piecewise import PwConstFn, _refined, pw_sup_diff, pwconst_argmin, pwconst_mean
from .polynomials import format_rational
from .realroots import AlgebraicNumber

CSV_HEADER = ("trial", "m", "eta_hat", "train_mean", "test_mean", "sup_gap", "wall_ms")


@dataclass
class ErmResult:
    eta_hat: Fraction
    train_mean_cost: Fraction
    cell: tuple[AlgebraicNumber, AlgebraicNumber]
    m: int
    n_breakpoints: int
    mean_dual: PwConstFn = field(repr=False)


def erm_stepsize(duals: Sequence[PwConstFn]) -> ErmResult:
    """Exact empirical risk minimizer over the common parameter domain."""
    if not duals:
        raise ValueError("need at least one dual")
    mean = pwconst_mean(duals)
    best = pwconst_argmin(mean)
    return ErmResult(best.eta, Fraction(best.value), (best.left, best.right), len(duals),
                     len(mean.breakpoints), mean)


def _require_x0(inst: Instance):
    if inst.x0 is None:
        raise ValueError(f"instance {inst.label!r} has no starting point")
    return inst.x0


# --- uniform convergence experiment ------------------------------------------


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic 64-bit child seed of ``seed`` for the given keys."""
    words = np.random.SeedSequence([seed & (2**64 - 1), *keys]).generate_state(2, np.uint32)
    return int(words[0]) | (int(words[1]) << 32)


def _trace_text(args):
    text, cfg = args
    inst = parse_instance(text)
    try:
        return trace_param(inst.objective, StepSize(inst.x0), cfg)
    except (SymbolicBudgetExceeded, DegenerateTrajectory):
        return None


def _trace_many(instances, cfg, pool):
    jobs = [(serialize_instance(i), cfg) for i in instances]
    if pool is None:
        return [_trace_text(j) for j in jobs]
    return list(pool.map(_trace_text, jobs, chunksize=max(1, len(jobs) // 64)))


def _draw_duals(dist, stream_seed, count, cfg, pool):
    """Duals of ``count`` instances from one stream; failed draws are replaced in order."""
    insts = [draw_instance(dist, stream_seed, k) for k in range(count)]
    duals = _trace_many(insts, cfg, pool)
    nxt, subs = count, 0
    for k in range(count):
        while duals[k] is None:
            subs += 1
            duals[k] = _trace_many([draw_instance(dist, stream_seed, nxt)], cfg, None)[0]
            nxt += 1
    return duals, subs


@dataclass
class ExperimentRow:
    trial: int
    m: int
    eta_hat: Fraction
    train_mean: Fraction
    test_mean: Fraction
    sup_gap: Fraction
    wall_ms: float | None = None


@dataclass
class ExperimentReport:
    rows: list[ExperimentRow]
    metadata: dict

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([r.trial, r.m, format_rational(r.eta_hat), format_rational(r.train_mean),
                        format_rational(r.test_mean), format_rational(r.sup_gap),
                        "" if r.wall_ms is None else f"{r.wall_ms:.1f}"])
        return buf.getvalue()

    def metadata_json(self) -> str:
        return json.dumps(self.metadata, indent=2, sort_keys=True) + "\n"

    def median_sup_gap(self) -> dict[int, float]:
        by_m: dict[int, list[float]] = {}
        for r in self.rows:
            by_m.setdefault(r.m, []).append(float(r.sup_gap))
        return {m: statistics.median(v) for m, v in sorted(by_m.items())}

    def loglog_slope(self) -> float:
        """Least-squares slope of log(median sup-gap) against log(m)."""
        med = self.median_sup_gap()
        ms = np.array(list(med), dtype=float)
        gaps = np.array(list(med.values()))
        if (gaps <= 0).any():
            raise ValueError("a median sup-gap is zero; slope undefined")
        return float(np.polyfit(np.log(ms), np.log(gaps), 1)[0])


def uniform_convergence_experiment(dist: InstanceDistribution, m_schedule: Sequence[int],
                                   trials: int, cfg: GDConfig, test_size: int | None = None,
                                   seed: int = 0, workers: int = 1,
                                   timing: bool = False) -> ExperimentReport:
    """Train/test gap of exact step-size ERM for growing sample sizes.

    One held-out sample of ``test_size`` instances (default 10x the largest m)
    stands in for the expectation.  Each trial draws max(m) training instances
    and uses nested prefixes for the smaller sizes.  Results do not depend on
    ``workers``; wall-clock times are only written when ``timing`` is set.
    """
    m_schedule = sorted(set(int(m) for m in m_schedule))
    if not m_schedule or m_schedule[0] < 1 or trials < 1:
        raise ValueError("need positive sample sizes and at least one trial")
    m_max = m_schedule[-1]
    test_size = test_size or 10 * m_max
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        test_duals, test_subs = _draw_duals(dist, derive_seed(seed, 0), test_size, cfg, pool)
        test_mean = pwconst_mean(test_duals)
        rows, subs = [], [test_subs]
        for trial in range(trials):
            train, s = _draw_duals(dist, derive_seed(seed, trial + 1), m_max, cfg, pool)
            subs.append(s)
            for m in m_schedule:
                t0 = time.perf_counter()
                erm = erm_stepsize(train[:m])
                gap = pw_sup_diff(erm.mean_dual, test_mean)
                ms = (time.perf_counter() - t0) * 1e3
                rows.append(ExperimentRow(trial, m, erm.eta_hat, erm.train_mean_cost,
                                          Fraction(test_mean(erm.eta_hat)), gap,
                                          ms if timing else None))
    finally:
        if pool is not None:
            pool.shutdown()
    meta = {
        "seed": seed,
        "distribution": dist.to_record(),
        "config": {"H": cfg.H, "theta": format_rational(cfg.theta),
                   "domain": [format_rational(v) for v in cfg.domain],
                   "max_degree": cfg.budget.max_degree, "max_bits": cfg.budget.max_bits},
        "m_schedule": m_schedule,
        "trials": trials,
        "test_size": test_size,
        "substitutions": {"test": subs[0], "train": subs[1:]},
    }
    return ExperimentReport(rows, meta)


# --- pseudo-dimension -----------------------------------------------------------


def _witnesses(values) -> list[Fraction]:
    vals = sorted(set(Fraction(v) for v in values))
    return [(a + b) / 2 for a, b in zip(vals, vals[1:])]


def empirical_pdim_lower_bound(duals: Sequence[PwConstFn], m_max: int = 3) -> int:
    """Largest m <= m_max such that some m of the duals are pseudo-shattered.

    The functions are the cost maps eta -> dual_i(eta); a subset is shattered
    when, for some choice of thresholds, every above/below pattern occurs on
    some cell of the common refinement.  The search is exhaustive, hence the cap.
    """
    if m_max > 3:
        raise CapExceeded(f"m_max={m_max} exceeds the exhaustive-search cap of 3")
    if not duals or m_max < 1:
        return 0
    _, _, rows = _refined(duals)
    cols = list(zip(*rows))
    wits = [_witnesses(c) for c in cols]
    for m in range(min(m_max, len(duals)), 0, -1):
        for subset in itertools.combinations(range(len(duals)), m):
            if any(not wits[i] for i in subset):
                continue
            for r in itertools.product(*(wits[i] for i in subset)):
                pats = {tuple(row[i] > ri for i, ri in zip(subset, r)) for row in rows}
                if len(pats) == 2**m:
                    return m
    return 0


# --- multi-parameter tuning loops ----------------------------------------------


@dataclass
class ScheduleResult:
    schedule: tuple[Fraction, ...]
    sweeps: list[list[ErmResult]]
    costs: list[Fraction]  # empirical mean cost: initial, then after each coordinate


def schedule_coordinate_descent(sample: Sequence[Instance], cfg: GDConfig, sweeps: int,
                                init_schedule) -> ScheduleResult:
    """Cyclic exact line search over the per-step sizes of a schedule.

    A coordinate moves to the ERM point of its slice only when that strictly
    lowers the empirical mean cost, so the recorded cost never increases.
    """
    if sweeps < 1:
        raise ValueError("sweeps must be at least 1")
    sched = [Fraction(v) for v in init_schedule]
    if len(sched) != cfg.H:
        raise ValueError(f"schedule needs {cfg.H} entries")
    costs: list[Fraction] = []
    history = []
    for _ in range(sweeps):
        per = []
        for t in range(1, cfg.H + 1):
            duals = [trace_param(i.objective, ScheduleCoord(t, sched, _require_x0(i)), cfg)
                     for i in sample]
            erm = erm_stepsize(duals)
            current = Fraction(erm.mean_dual(sched[t - 1]))
            if not costs:
                costs.append(current)
            if erm.train_mean_cost < current:
                sched[t - 1] = erm.eta_hat
                current = erm.train_mean_cost
            if current > costs[-1]:
                raise AssertionError("empirical cost increased during coordinate descent")
            costs.append(current)
            per.append(erm)
        history.append(per)
    return ScheduleResult(tuple(sched), history, costs)


@dataclass
class MomentumResult:
    gamma: Fraction
    eta_hat: Fraction
    mean_cost: Fraction
    per_gamma: dict[Fraction, ErmResult]


def momentum_grid_tune(sample: Sequence[Instance], cfg: GDConfig, gamma_grid,
                       literal: bool = False) -> MomentumResult:
    """Exact step-size ERM for each momentum value on a grid; ties go to the earlier gamma."""
    grid = [Fraction(g) for g in gamma_grid]
    if not grid or any(g < 0 for g in grid):
        raise ValueError("gamma grid must be nonempty and non-negative")
    per = {}
    for g in grid:
        duals = [trace_param(i.objective, MomentumEta(g, _require_x0(i), literal), cfg)
                 for i in sample]
        per[g] = erm_stepsize(duals)
    best = min(grid, key=lambda g: per[g].train_mean_cost)
    return MomentumResult(best, per[best].eta_hat, per[best].train_mean_cost, per)


def sample_duals(sample: Sequence[Instance], cfg: GDConfig) -> list[PwConstFn]:
    return [trace_param(i.objective, StepSize(_require_x0(i)), cfg) for i in sample]
