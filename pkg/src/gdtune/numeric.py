"""Floating-point gradient descent over a grid of hyperparameter values.

This is the brute-force oracle used to cross-check the exact traces, and the
only execution mode for smooth (sigmoid/tanh) network objectives.  Any
objective exposing ``dim`` and ``grad_batch(X)`` works.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NonFiniteIterate
from .objective import (GDConfig, InitCoord, InitScale, MomentumEta, ScheduleCoord,
                        StepSize, binding_dim)
from .piecewise import PwConstFn
from .realroots import AlgebraicNumber


@dataclass
class GDRun:
    """Outcome of vectorized gradient descent at several parameter values."""

    params: np.ndarray
    costs: np.ndarray
    points: np.ndarray  # returned iterate per parameter, shape (n, d)
    nonfinite: np.ndarray


def _initial(binding, params):
    n = len(params)
    if isinstance(binding, InitScale):
        return np.outer(params, np.array([float(c) for c in binding.direction]))
    if isinstance(binding, InitCoord):
        x = np.tile(np.array([float(c) for c in binding.base]), (n, 1))
        x[:, binding.index] = params
        return x
    return np.tile(np.array([float(c) for c in binding.x0]), (n, 1))


def _steps(binding, params, i):
    if isinstance(binding, StepSize | MomentumEta):
        return params
    if isinstance(binding, InitScale | InitCoord):
        return np.full(len(params), float(binding.eta))
    if isinstance(binding, ScheduleCoord):
        return params if i == binding.t else np.full(len(params), float(binding.schedule[i - 1]))
    raise TypeError(f"unknown binding {binding!r}")


def run_gd(f, binding, cfg: GDConfig, params) -> GDRun:
    """Run the thresholded gradient descent loop at every value in ``params``."""
    params = np.asarray(params, dtype=float)
    if binding_dim(binding) != f.dim:
        raise ValueError("binding and objective dimensions differ")
    H = cfg.H
    theta2 = float(cfg.theta) ** 2
    x = _initial(binding, params)
    y = np.zeros_like(x)
    n = len(params)
    costs = np.full(n, H, dtype=np.int64)
    points = np.full_like(x, np.nan)
    done = np.zeros(n, dtype=bool)
    bad = np.zeros(n, dtype=bool)
    for i in range(1, H + 1):
        live = np.flatnonzero(~done)
        if live.size == 0:
            break
        with np.errstate(all="ignore"):
            g = f.grad_batch(x[live])
            norm2 = np.einsum("ij,ij->i", g, g)
        conv = norm2 < theta2
        hit = live[conv]
        costs[hit] = i
        points[hit] = x[hit]
        done[hit] = True
        move = live[~conv]
        g = g[~conv]
        eta = _steps(binding, params[move], i)[:, None]
        with np.errstate(all="ignore"):
            if isinstance(binding, MomentumEta):
                y_new = float(binding.gamma) * y[move] - eta * g
                x[move] = x[move] + (y[move] if binding.literal else y_new)
                y[move] = y_new
            else:
                x[move] = x[move] - eta * g
        blown = move[~np.isfinite(x[move]).all(axis=1)]
        if blown.size:
            bad[blown] = True
            done[blown] = True
            costs[blown] = H
    rest = ~done
    points[rest] = x[rest]
    if bad.any():
        warnings.warn(f"{int(bad.sum())} parameter values produced non-finite iterates",
                      NonFiniteIterate, stacklevel=2)
    return GDRun(params, costs, points, bad)


@dataclass
class NumericDual:
    """Step-function estimate of a dual cost from a grid run plus bisection."""

    domain: tuple[Fraction, Fraction]
    grid: np.ndarray
    costs: np.ndarray
    breakpoints: list[float]
    values: list[int]
    unresolved: list[tuple[float, float]]
    nonfinite: np.ndarray

    @property
    def n_jumps(self) -> int:
        return len(self.breakpoints)

    def __call__(self, t: float) -> int:
        return self.values[int(np.searchsorted(self.breakpoints, t, side="left"))]

    def to_pwconst(self) -> PwConstFn:
        bps = [AlgebraicNumber.rational(Fraction(b)) for b in self.breakpoints]
        return PwConstFn(self.domain, bps, self.values).canonical()


def _costs_at(f, binding, cfg, params):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonFiniteIterate)
        return run_gd(f, binding, cfg, params).costs


def numeric_dual(f, binding, cfg: GDConfig, grid: int = 10_000,
                 refine_rounds: int = 20) -> NumericDual:
    """Approximate dual cost: grid evaluation, then bisection at every jump.

    Each jump between adjacent grid points is localized to an interval of
    width (domain width) / (grid * 2**refine_rounds); those intervals are
    returned as ``unresolved``.  Several true breakpoints between two grid
    points with equal end costs are invisible at this resolution.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    lo, hi = cfg.domain
    ts = np.linspace(float(lo), float(hi), grid + 1)
    run = run_gd(f, binding, cfg, ts)
    costs = run.costs
    jumps = np.flatnonzero(costs[:-1] != costs[1:])
    a, b = ts[jumps].copy(), ts[jumps + 1].copy()
    ca = costs[jumps].copy()
    for _ in range(refine_rounds):
        if a.size == 0:
            break
        mid = 0.5 * (a + b)
        cm = _costs_at(f, binding, cfg, mid)
        left = cm == ca
        a = np.where(left, mid, a)
        b = np.where(left, b, mid)
    bps = [float(v) for v in 0.5 * (a + b)]
    values = [int(costs[0])] + [int(costs[k + 1]) for k in jumps]
    return NumericDual((lo, hi), ts, costs, bps, values,
                       list(zip(a.tolist(), b.tolist())), run.nonfinite)


@dataclass
class OracleReport:
    """Grid comparison of an exact dual against floating-point runs."""

    checked: int
    skipped: int
    mismatches: list[tuple[float, int, int]]  # (parameter, exact cost, numeric cost)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def oracle_compare(exact: PwConstFn, f, binding, cfg: GDConfig, grid: int = 10_000,
                   tol: float = 1e-6) -> OracleReport:
    """Compare exact and float costs at grid points farther than ``tol`` from any breakpoint."""
    nd = numeric_dual(f, binding, cfg, grid, refine_rounds=0)
    ts = nd.grid
    bps = np.array([float(b) for b in exact.breakpoints])
    idx = np.searchsorted(bps, ts, side="left")
    exact_costs = np.array(exact.values, dtype=float)[idx]
    if bps.size:
        left = np.abs(ts - bps[np.clip(idx - 1, 0, bps.size - 1)])
        right = np.abs(ts - bps[np.clip(idx, 0, bps.size - 1)])
        keep = np.minimum(left, right) > tol
    else:
        keep = np.ones(ts.size, dtype=bool)
    bad = np.flatnonzero(keep & (exact_costs != nd.costs))
    return OracleReport(int(keep.sum()), int((~keep).sum()),
                        [(float(ts[k]), int(exact_costs[k]), int(nd.costs[k])) for k in bad])
