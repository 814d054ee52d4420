"""Shape values of the sample-complexity and piece-count bounds.

Every formula is evaluated with its hidden constants set to 1 and natural
logarithms, so the numbers show how a bound scales, not what it guarantees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from fractions import Fraction

SHAPE_LABEL = "shape value, not a rigorous constant"

_LN_MAX = math.log(1.7976931348623157e308)


@dataclass(frozen=True)
class BoundQuery:
    regime: str
    H: int | None = None
    eps: Fraction | None = None
    delta: Fraction | None = None
    Delta: int | None = None
    p: int | None = None
    d: int | None = None
    q: int | None = None
    M: int | None = None
    Delta_v: int | None = None
    p_v: int | None = None
    n: int | None = None
    s: int | None = None
    degree: int | None = None
    Lambda: int | None = None
    N: int | None = None
    pdim: float | None = None


@dataclass(frozen=True)
class BoundResult:
    regime: str
    value: float
    log_value: float
    pdim: float | None
    formula: str
    label: str = SHAPE_LABEL

    def to_record(self) -> dict:
        return {"regime": self.regime, "value": self.value, "log_value": self.log_value,
                "pdim": self.pdim, "formula": self.formula, "label": self.label}


def _need(q: BoundQuery, *names):
    vals = []
    for name in names:
        v = getattr(q, name)
        if v is None:
            raise ValueError(f"regime {q.regime!r} needs parameter {name!r}")
        if v <= 0:
            raise ValueError(f"parameter {name!r} must be positive")
        vals.append(float(v))
    return vals


def _from_log(regime, log_value, pdim, formula):
    value = math.exp(log_value) if log_value < _LN_MAX else math.inf
    return BoundResult(regime, value, log_value, pdim, formula)


def _sample(regime, q: BoundQuery, pdim: float, formula: str, extra_log: float = 0.0):
    H, eps, delta = _need(q, "H", "eps", "delta")
    m = (H / eps) ** 2 * (pdim + math.log(1 / delta) + extra_log)
    return BoundResult(regime, m, math.log(m) if m > 0 else -math.inf, pdim, formula)


def _ln_pdD(q):
    p, d, D = _need(q, "p", "d", "Delta")
    return math.log(p * d * D)


def bounds_calculator(q: BoundQuery) -> BoundResult:
    r = q.regime
    if r == "warren":
        deg, s, n = _need(q, "degree", "s", "n")
        return _from_log(r, n * math.log(4 * math.e * deg * s / n), None, "(4 e degree s / n)^n")
    if r == "khovanskii":
        d, qq, D, M = _need(q, "d", "q", "Delta", "M")
        lv = (d * qq * (d * qq - 1) / 2) * math.log(2) + d * math.log(D) \
            + d * qq * math.log(d * d * (D + M))
        return _from_log(r, lv, None, "2^(dq(dq-1)/2) Delta^d (d^2 (Delta+M))^(dq)")
    if r == "gj":
        n, D, L = _need(q, "n", "Delta", "Lambda")
        v = n * math.log(D * L)
        return BoundResult(r, v, math.log(v) if v > 0 else -math.inf, v, "n ln(Delta Lambda)")
    if r == "pdim_pieces":
        (N,) = _need(q, "N")
        v = math.log(N)
        return BoundResult(r, v, math.log(v) if v > 0 else -math.inf, v, "ln N")
    if r == "pieces_poly":
        D, H = _need(q, "Delta", "H")
        return _from_log(r, H * math.log(D), None, "Delta^H")
    if r == "pieces_pwpoly":
        p, d, D, H = _need(q, "p", "d", "Delta", "H")
        return _from_log(r, H * math.log(2 * p * d * D), None, "(2 p d Delta)^H")
    if r == "pieces_pfaffian":
        qq, d, H, D, M = _need(q, "q", "d", "H", "Delta", "M")
        lv = (qq * d * H) ** 2 * math.log(2) + qq * d * H * math.log(D + M)
        return _from_log(r, lv, None, "2^(q^2 d^2 H^2) (Delta+M)^(q d H)")
    if r == "uniform":
        (pdim,) = _need(q, "pdim")
        return _sample(r, q, pdim, "(H/eps)^2 (Pdim + ln(1/delta))")
    if r == "stepsize_poly":
        H, D = _need(q, "H", "Delta")
        return _sample(r, q, H * math.log(D), "(H/eps)^2 (H ln Delta + ln(1/delta))")
    if r in ("stepsize_pwpoly", "init_scale", "momentum"):
        H = _need(q, "H")[0]
        return _sample(r, q, H * _ln_pdD(q), "(H/eps)^2 (H ln(p d Delta) + ln(1/delta))")
    if r == "schedule":
        H = _need(q, "H")[0]
        return _sample(r, q, H * H * _ln_pdD(q), "(H/eps)^2 (H^2 ln(p d Delta) + ln(1/delta))")
    if r == "init_vector":
        H, d = _need(q, "H", "d")
        return _sample(r, q, d * H * _ln_pdD(q), "(H/eps)^2 (d H ln(p d Delta) + ln(1/delta))")
    if r == "pfaffian":
        H, qq, d, D, M = _need(q, "H", "q", "d", "Delta", "M")
        pdim = (qq * d * H) ** 2 + qq * d * H * math.log(D + M)
        return _sample(r, q, pdim, "(H/eps)^2 (q^2 d^2 H^2 + q d H ln(Delta+M) + ln(1/delta))")
    if r == "validation":
        H = _need(q, "H")[0]
        Dv, pv = _need(q, "Delta_v", "p_v")
        return _sample(r, q, H * _ln_pdD(q),
                       "(H/eps)^2 (H ln(p d Delta) + ln(Delta_v p_v / delta))",
                       extra_log=math.log(Dv * pv))
    raise ValueError(f"unknown regime {r!r}; choose from {', '.join(REGIMES)}")


REGIMES = ("warren", "khovanskii", "gj", "pdim_pieces", "pieces_poly", "pieces_pwpoly",
           "pieces_pfaffian", "uniform", "stepsize_poly", "stepsize_pwpoly", "init_scale",
           "momentum", "schedule", "init_vector", "pfaffian", "validation")

QUERY_FIELDS = tuple(f.name for f in fields(BoundQuery) if f.name != "regime")
