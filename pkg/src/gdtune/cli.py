"""Command-line entry point: ``gdtune <command> [--config FILE] [flags]``.

The config file is a JSON object; every flag overrides the matching key.
Exit status is 0 on success, 2 for configuration errors and 3 when a trace
hits the symbolic budget or a degenerate trajectory.  Errors are reported
as a one-line JSON record on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .bounds import QUERY_FIELDS, REGIMES, BoundQuery, bounds_calculator
from .errors import (DegenerateTrajectory, GdtuneError, MissingPiece, NonFiniteIterate,
                     ParseError, SymbolicBudgetExceeded)
from .gdtrace import DualCostFunction, trace_param, trace_validation
from .instances import (Instance, InstanceDistribution, draw_instance, parse_instance,
                        sample_instances)
from .numeric import oracle_compare
from .objective import GDConfig, InitCoord, InitScale, MomentumEta, StepSize
from .piecewise import pwpoly_min
from .polynomials import Budget, format_rational, parse_rational
from .tuner import (empirical_pdim_lower_bound, erm_stepsize, momentum_grid_tune,
                    sample_duals, schedule_coordinate_descent,
                    uniform_convergence_experiment)

DEFAULTS = {"H": 5, "theta": "1/10", "domain": ["0", "2"], "seed": 0, "grid": 10_000,
            "trials": 20, "m_schedule": [8, 32, 128, 512], "gamma_grid": ["0", "1/2"],
            "m": 16, "sweeps": 1, "m_max": 3, "workers": 1}

COMMANDS = ("trace", "tune", "schedule", "momentum", "init-scale", "init-coord", "validate",
            "experiment", "pdim", "bounds", "oracle-check", "plotdata")


class ConfigError(GdtuneError):
    code = "config"


class _Label:
    """Name of the instance being processed, attached to budget errors."""

    current: str | None = None


# --- config handling -----------------------------------------------------------


def _rat(v, field) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ParseError("expected an integer or 'num/den' string", field=field)
    return Fraction(v) if isinstance(v, int) else parse_rational(v, field)


def _csv(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def load_config(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
        if not isinstance(data, dict):
            raise ParseError("config must be a JSON object")
        cfg.update(data)
        cfg["_base"] = str(Path(args.config).parent)
    for key in ("seed", "H", "grid", "trials", "budget_degree", "m", "sweeps", "m_max",
                "workers", "test_size", "instance", "theta", "regime", "eta", "index",
                "literal", "validation"):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    if args.domain is not None:
        cfg["domain"] = list(args.domain)
    if args.gamma_grid is not None:
        cfg["gamma_grid"] = _csv(args.gamma_grid)
    if args.m_schedule is not None:
        cfg["m_schedule"] = [int(x) for x in _csv(args.m_schedule)]
    for key in ("direction", "schedule"):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = _csv(v)
    for key in QUERY_FIELDS:
        v = getattr(args, f"q_{key}", None)
        if v is not None:
            cfg.setdefault("query", {})[key] = v
    return cfg


def gd_config(cfg: dict) -> GDConfig:
    dom = cfg["domain"]
    if not isinstance(dom, list) or len(dom) != 2:
        raise ParseError("domain must be [lo, hi]", field="domain")
    budget = Budget(int(cfg.get("budget_degree", Budget.max_degree)))
    try:
        return GDConfig(int(cfg["H"]), _rat(cfg["theta"], "theta"),
                        (_rat(dom[0], "domain[0]"), _rat(dom[1], "domain[1]")), budget)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ConfigError(str(exc)) from None


def _bundled(name: str) -> str | None:
    res = resources.files("gdtune") / "data" / f"{name}.json"
    return res.read_text() if res.is_file() else None


def load_instance(cfg: dict, key: str = "instance") -> Instance:
    ref = cfg.get(key)
    if ref is None:
        raise ConfigError(f"no {key} given (path, bundled name, or inline object)")
    if isinstance(ref, dict):
        from .instances import instance_from_record
        return instance_from_record(ref)
    text = _bundled(ref)
    if text is None:
        path = Path(ref)
        if not path.is_absolute() and "_base" in cfg and not path.exists():
            path = Path(cfg["_base"]) / path
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read instance {ref!r}: {exc}") from None
    return parse_instance(text)


def load_sample(cfg: dict) -> list[Instance]:
    if "instances" in cfg:
        return [load_instance({"instance": ref, **{k: v for k, v in cfg.items() if k == "_base"}})
                for ref in cfg["instances"]]
    if "distribution" not in cfg:
        raise ConfigError("need 'instances' or 'distribution' in the config")
    dist = InstanceDistribution.from_record(cfg["distribution"])
    return sample_instances(dist, int(cfg["m"]), int(cfg["seed"]))


def _x0(inst: Instance):
    if inst.x0 is None:
        raise ConfigError(f"instance {inst.label!r} has no x0")
    return inst.x0


# --- output -----------------------------------------------------------------------


def _emit(args, name: str, payload: str, summary: str):
    """Write ``payload`` to --out/name (summary to stdout) or both to the console."""
    if args.out:
        out = Path(args.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
            (out / name).write_text(payload)
        except OSError as exc:
            raise ConfigError(f"cannot write output: {exc}") from None
        print(summary)
        print(f"wrote {out / name}")
    else:
        sys.stdout.write(payload)
        print(summary, file=sys.stderr)


def _dual_record(dual, param: str) -> dict:
    rec = dual.to_record()
    rec["parameter"] = param
    if isinstance(dual, DualCostFunction) and dual.stats is not None:
        st = dual.stats
        rec["stats"] = {"pieces": dual.n_pieces, "piece_envelope": st.piece_envelope,
                        "round_degrees": [r.max_degree for r in st.rounds],
                        "degree_bounds": [r.degree_bound for r in st.rounds]}
    return rec


def _summary(dual, param: str) -> str:
    cells = []
    for (a, b), v in zip(dual.cell_endpoints(), dual.values):
        cells.append(f"  ({float(a):.6g}, {float(b):.6g}) -> {v}")
    return f"{dual.n_pieces} piece(s) in {param}:\n" + "\n".join(cells)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _erm_record(e) -> dict:
    return {"eta_hat": format_rational(e.eta_hat), "train_mean": format_rational(e.train_mean_cost),
            "cell": [e.cell[0].to_record(), e.cell[1].to_record()], "m": e.m,
            "breakpoints": e.n_breakpoints}


# --- commands ---------------------------------------------------------------------


def _traced(inst: Instance, binding, gcfg, param):
    _Label.current = inst.label
    return trace_param(inst.objective, binding, gcfg)


def cmd_trace(args, cfg):
    inst = load_instance(cfg)
    dual = _traced(inst, StepSize(_x0(inst)), gd_config(cfg), "eta")
    _emit(args, "dual.json", _json(_dual_record(dual, "eta")), _summary(dual, "eta"))


def cmd_init_scale(args, cfg):
    inst = load_instance(cfg)
    direction = [_rat(v, "direction") for v in cfg.get("direction") or _x0(inst)]
    binding = InitScale(direction, _rat(cfg.get("eta", "1/2"), "eta"))
    dual = _traced(inst, binding, gd_config(cfg), "sigma")
    _emit(args, "dual.json", _json(_dual_record(dual, "sigma")), _summary(dual, "sigma"))


def cmd_init_coord(args, cfg):
    inst = load_instance(cfg)
    binding = InitCoord(int(cfg.get("index", 0)), _x0(inst), _rat(cfg.get("eta", "1/2"), "eta"))
    dual = _traced(inst, binding, gd_config(cfg), f"x0[{binding.index}]")
    _emit(args, "dual.json", _json(_dual_record(dual, "x0")), _summary(dual, "x0"))


def cmd_validate(args, cfg):
    inst = load_instance(cfg)
    if inst.validation is None:
        raise ConfigError(f"instance {inst.label!r} has no validation objective")
    _Label.current = inst.label
    vdual = trace_validation(inst.objective, inst.validation, _x0(inst), gd_config(cfg))
    best = pwpoly_min(vdual)
    loc = (best.location.to_record() if hasattr(best.location, "to_record")
           else format_rational(best.location))
    val = (format_rational(best.value) if best.exact
           else [format_rational(best.value[0]), format_rational(best.value[1])])
    rec = {"validation_dual": vdual.to_record(), "minimizer": loc, "min_value": val,
           "exact": best.exact}
    summary = (f"validation dual: {vdual.n_pieces} piece(s); minimum "
               f"{float(best.value if best.exact else best.value[0]):.6g} at eta = "
               f"{float(best.location):.6g}")
    _emit(args, "validation.json", _json(rec), summary)


def cmd_tune(args, cfg):
    sample = load_sample(cfg)
    gcfg = gd_config(cfg)
    duals = []
    for inst in sample:
        duals.append(_traced(inst, StepSize(_x0(inst)), gcfg, "eta"))
    e = erm_stepsize(duals)
    _emit(args, "erm.json", _json(_erm_record(e)),
          f"eta_hat = {e.eta_hat} (~{float(e.eta_hat):.6g}), mean cost {e.train_mean_cost} "
          f"over m = {e.m}")


def cmd_schedule(args, cfg):
    sample = load_sample(cfg)
    gcfg = gd_config(cfg)
    init = cfg.get("schedule") or ["1/4"] * gcfg.H
    res = schedule_coordinate_descent(sample, gcfg, int(cfg["sweeps"]),
                                      [_rat(v, "schedule") for v in init])
    rec = {"schedule": [format_rational(v) for v in res.schedule],
           "costs": [format_rational(c) for c in res.costs],
           "sweeps": [[_erm_record(e) for e in sw] for sw in res.sweeps]}
    _emit(args, "schedule.json", _json(rec),
          f"schedule {[str(v) for v in res.schedule]}; mean cost {res.costs[0]} -> {res.costs[-1]}")


def cmd_momentum(args, cfg):
    sample = load_sample(cfg)
    grid = [_rat(g, "gamma_grid") for g in cfg["gamma_grid"]]
    res = momentum_grid_tune(sample, gd_config(cfg), grid, bool(cfg.get("literal", False)))
    rec = {"gamma": format_rational(res.gamma), "eta_hat": format_rational(res.eta_hat),
           "mean_cost": format_rational(res.mean_cost),
           "per_gamma": {format_rational(g): _erm_record(e) for g, e in res.per_gamma.items()}}
    _emit(args, "momentum.json", _json(rec),
          f"best gamma {res.gamma}, eta_hat {res.eta_hat}, mean cost {res.mean_cost}")


def cmd_experiment(args, cfg):
    if "distribution" not in cfg:
        raise ConfigError("experiment needs a 'distribution'")
    dist = InstanceDistribution.from_record(cfg["distribution"])
    rep = uniform_convergence_experiment(
        dist, cfg["m_schedule"], int(cfg["trials"]), gd_config(cfg),
        cfg.get("test_size"), int(cfg["seed"]), int(cfg["workers"]), bool(cfg.get("timing")))
    med = rep.median_sup_gap()
    lines = [f"m={m}: median sup_gap {g:.4g}" for m, g in med.items()]
    if len(med) > 1 and all(g > 0 for g in med.values()):
        lines.append(f"log-log slope {rep.loglog_slope():.3f}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.meta.json").write_text(rep.metadata_json())
    _emit(args, "report.csv", rep.to_csv(), "\n".join(lines))


def cmd_pdim(args, cfg):
    sample = load_sample(cfg)
    duals = sample_duals(sample, gd_config(cfg))
    m_max = int(cfg["m_max"])
    v = empirical_pdim_lower_bound(duals, m_max)
    _emit(args, "pdim.json", _json({"pdim_lower_bound": v, "m_max": m_max, "instances": len(duals)}),
          f"pseudo-dimension lower bound: {v}")


def cmd_bounds(args, cfg):
    regime = cfg.get("regime")
    if regime is None:
        raise ConfigError(f"--regime is required; one of {', '.join(REGIMES)}")
    q = dict(cfg.get("query", {}))
    for key in ("H",):
        if key in cfg and key not in q and args.H is not None:
            q[key] = cfg[key]
    for key in ("eps", "delta"):
        if key in q:
            q[key] = _rat(q[key], key)
    try:
        res = bounds_calculator(BoundQuery(regime, **q))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _emit(args, "bounds.json", _json(res.to_record()),
          f"{regime}: {res.value:.6g}  [{res.formula}; {res.label}]")


def cmd_oracle_check(args, cfg):
    gcfg = gd_config(cfg)
    if "distribution" in cfg:
        dist = InstanceDistribution.from_record(cfg["distribution"])
    else:
        dist = InstanceDistribution("random_poly", {"d": 1, "degree": 3, "p": 1,
                                                    "denominator": 16}, 0)
    count = int(cfg.get("count", 5))
    total, checked, lines, rows = 0, 0, [], []
    for k in range(count):
        inst = draw_instance(dist, int(cfg["seed"]), k)
        dual = _traced(inst, StepSize(_x0(inst)), gcfg, "eta")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonFiniteIterate)
            rep = oracle_compare(dual, inst.objective, StepSize(inst.x0), gcfg, int(cfg["grid"]))
        total += len(rep.mismatches)
        checked += rep.checked
        rows.append({"label": inst.label, "pieces": dual.n_pieces, "checked": rep.checked,
                     "skipped": rep.skipped, "mismatches": rep.mismatches})
        lines.append(f"{inst.label}: {dual.n_pieces} piece(s), {len(rep.mismatches)} mismatches")
    lines.append(f"{total} mismatches over {checked} grid points")
    _emit(args, "oracle.json", _json({"mismatches": total, "instances": rows}), "\n".join(lines))


def cmd_plotdata(args, cfg):
    inst = load_instance(cfg)
    gcfg = gd_config(cfg)
    if cfg.get("validation"):
        _Label.current = inst.label
        vdual = trace_validation(inst.objective, inst.validation, _x0(inst), gcfg)
        pts = vdual.sample()
    else:
        pts = _traced(inst, StepSize(_x0(inst)), gcfg, "eta").vertices()
    text = "".join(f"{x:.17g}\t{y:.17g}\n" for x, y in pts)
    _emit(args, "plot.tsv", text, f"{len(pts)} vertices")


HANDLERS = {
    "trace": cmd_trace, "tune": cmd_tune, "schedule": cmd_schedule, "momentum": cmd_momentum,
    "init-scale": cmd_init_scale, "init-coord": cmd_init_coord, "validate": cmd_validate,
    "experiment": cmd_experiment, "pdim": cmd_pdim, "bounds": cmd_bounds,
    "oracle-check": cmd_oracle_check, "plotdata": cmd_plotdata,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gdtune", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON config file")
    ap.add_argument("--instance", help="instance file or bundled name (quadratic, relu_scalar)")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--domain", nargs=2, metavar=("LO", "HI"))
    ap.add_argument("--H", type=int)
    ap.add_argument("--theta")
    ap.add_argument("--grid", type=int)
    ap.add_argument("--gamma-grid", dest="gamma_grid")
    ap.add_argument("--m-schedule", dest="m_schedule")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--budget-degree", dest="budget_degree", type=int)
    ap.add_argument("--workers", type=int)
    ap.add_argument("--test-size", dest="test_size", type=int)
    ap.add_argument("--m", type=int, help="sample size for tune/schedule/momentum/pdim")
    ap.add_argument("--sweeps", type=int)
    ap.add_argument("--m-max", dest="m_max", type=int)
    ap.add_argument("--eta", help="fixed step size for init-scale / init-coord")
    ap.add_argument("--index", type=int, help="free coordinate for init-coord")
    ap.add_argument("--direction", help="comma-separated direction for init-scale")
    ap.add_argument("--schedule", help="comma-separated initial schedule")
    ap.add_argument("--literal", action="store_const", const=True,
                    help="momentum: move by the previous velocity")
    ap.add_argument("--validation", action="store_const", const=True,
                    help="plotdata: sample the validation dual instead")
    ap.add_argument("--regime", help=f"bounds regime: {', '.join(REGIMES)}")
    for key in QUERY_FIELDS:
        if key == "H":
            continue
        kind = str if key in ("eps", "delta") else (float if key == "pdim" else int)
        flag = "--" + key.replace("_", "-")
        ap.add_argument(flag, dest=f"q_{key}", type=kind)
    return ap


def _error(exc, code: int) -> int:
    rec = {"error": getattr(exc, "code", "error"), "message": str(exc)}
    if _Label.current is not None and code == 3:
        rec["instance"] = _Label.current
    print(json.dumps(rec), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _Label.current = None
    try:
        cfg = load_config(args)
        if args.command == "bounds" and args.H is not None:
            cfg.setdefault("query", {})["H"] = args.H
        return HANDLERS[args.command](args, cfg) or 0
    except (SymbolicBudgetExceeded, DegenerateTrajectory, MissingPiece) as exc:
        return _error(exc, 3)
    except (ParseError, ConfigError) as exc:
        return _error(exc, 2)
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        exc.code = "config"
        return _error(exc, 2)


if __name__ == "__main__":
    sys.exit(main())
