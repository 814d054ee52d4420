import json
from fractions import Fraction

import pytest

from gdtune.cli import main
from gdtune.piecewise import PwConstFn

QUADS = {"family": "scalar_quadratic", "params": {"curvature": ["1/2", "2"]}, "seed": 7}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, **cfg):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_trace_bundled_quadratic(capsys):
    code, out, err = run(capsys, "trace", "--instance", "quadratic")
    assert code == 0 and "7 piece(s)" in err
    rec = json.loads(out)
    dual = PwConstFn.from_record(rec)
    assert dual.values == (5, 4, 3, 2, 3, 4, 5)
    assert dual.breakpoints[2] == Fraction(9, 10) and dual.breakpoints[3] == Fraction(11, 10)
    assert rec["stats"]["pieces"] == 7 and rec["parameter"] == "eta"


def test_trace_writes_into_out_dir(capsys, tmp_path):
    code, out, _ = run(capsys, "trace", "--instance", "relu_scalar", "--domain", "0", "3/2",
                       "--out", str(tmp_path))
    assert code == 0 and "wrote" in out
    dual = PwConstFn.from_record(json.loads((tmp_path / "dual.json").read_text()))
    assert dual.breakpoints[-1] == 1 and dual.values[-1] == 2


def test_bounds_warren(capsys):
    code, _, err = run(capsys, "bounds", "--regime", "warren", "--degree", "2", "--s", "3", "--n", "1")
    assert code == 0 and "65.2388" in err


def test_bounds_with_H_and_rationals(capsys):
    code, out, _ = run(capsys, "bounds", "--regime", "stepsize_poly", "--H", "10", "--eps", "1/10",
                       "--delta", "1/100", "--Delta", "3")
    assert code == 0 and json.loads(out)["value"] == pytest.approx(1.559e5, rel=1e-3)


def test_oracle_check_reports_zero_mismatches(capsys):
    code, _, err = run(capsys, "oracle-check", "--grid", "2000")
    assert code == 0 and "0 mismatches over" in err


def test_validate_and_plotdata(capsys):
    code, out, err = run(capsys, "validate", "--instance", "relu_scalar", "--domain", "0", "3/2")
    assert code == 0 and json.loads(out)["exact"] and "minimum 0" in err
    code, out, _ = run(capsys, "plotdata", "--instance", "quadratic")
    rows = [tuple(map(float, line.split("\t"))) for line in out.splitlines()]
    assert code == 0 and rows[0] == (0.0, 5.0) and rows[-1] == (2.0, 5.0) and len(rows) == 14
    code, out, _ = run(capsys, "plotdata", "--instance", "quadratic", "--validation")
    assert code == 0 and len(out.splitlines()) > 14


def test_init_scale_and_init_coord(capsys):
    code, out, _ = run(capsys, "init-scale", "--instance", "quadratic", "--eta", "1/2",
                       "--domain", "0", "4")
    assert code == 0
    assert [b["lo"] for b in json.loads(out)["breakpoints"]] == ["1/10", "1/5", "2/5", "4/5"]
    code, _, _ = run(capsys, "init-coord", "--instance", "quadratic", "--eta", "1/2", "--index", "0")
    assert code == 0


def test_sample_commands_from_a_config(capsys, tmp_path):
    cfg = write_config(tmp_path, distribution=QUADS, m=4)
    code, out, _ = run(capsys, "tune", "--config", cfg)
    assert code == 0 and 1 <= Fraction(json.loads(out)["train_mean"]) <= 5
    code, out, _ = run(capsys, "schedule", "--config", cfg, "--H", "2", "--schedule", "1/4,1/4")
    costs = [Fraction(c) for c in json.loads(out)["costs"]]
    assert code == 0 and costs == sorted(costs, reverse=True)
    code, out, _ = run(capsys, "momentum", "--config", cfg, "--gamma-grid", "0,1/2")
    assert code == 0 and set(json.loads(out)["per_gamma"]) == {"0/1", "1/2"}
    code, out, _ = run(capsys, "pdim", "--config", cfg, "--H", "8")
    assert code == 0 and json.loads(out)["pdim_lower_bound"] >= 1


def test_instances_listed_in_config(capsys, tmp_path):
    cfg = write_config(tmp_path, instances=["quadratic", "quadratic"])
    code, out, _ = run(capsys, "tune", "--config", cfg)
    assert code == 0 and json.loads(out)["eta_hat"] == "1/1"


def test_experiment_csv_is_reproducible(capsys, tmp_path):
    cfg = write_config(tmp_path, distribution=QUADS, m_schedule=[2, 4], trials=2, test_size=10)
    for sub, workers in (("a", "1"), ("b", "2")):
        code, _, _ = run(capsys, "experiment", "--config", cfg, "--seed", "5", "--workers", workers,
                         "--out", str(tmp_path / sub))
        assert code == 0
    a, b = ((tmp_path / s / "report.csv").read_bytes() for s in "ab")
    assert a == b and a.startswith(b"trial,m,eta_hat,train_mean,test_mean,sup_gap,wall_ms\n")
    meta = json.loads((tmp_path / "a" / "report.meta.json").read_text())
    assert meta["seed"] == 5 and meta["m_schedule"] == [2, 4]


def test_budget_error_exits_3_with_label(capsys):
    code, _, err = run(capsys, "trace", "--instance", "quadratic", "--H", "8", "--budget-degree", "2")
    rec = json.loads(err)
    assert code == 3 and rec["error"] == "budget" and rec["instance"] == "quadratic"


def test_degenerate_trajectory_exits_3(capsys, tmp_path):
    inst = json.loads((__import__("importlib").resources.files("gdtune") / "data" /
                       "relu_scalar.json").read_text())
    inst["x0"] = ["0"]
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(inst))
    code, _, err = run(capsys, "trace", "--instance", str(path))
    assert code == 3 and json.loads(err)["error"] == "degenerate_trajectory"


@pytest.mark.parametrize("argv", [
    ["trace", "--instance", "quadratic", "--theta", "1/0"],
    ["trace", "--instance", "quadratic", "--theta", "0.1"],
    ["trace", "--instance", "quadratic", "--H", "0"],
    ["trace", "--instance", "quadratic", "--domain", "1", "1"],
    ["trace", "--instance", "missing-file.json"],
    ["trace"],
    ["bounds"],
    ["bounds", "--regime", "warren"],
    ["tune"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in json.loads(err.strip().splitlines()[-1])


def test_pdim_cap_is_a_config_error(capsys, tmp_path):
    cfg = write_config(tmp_path, instances=["quadratic"])
    code, _, err = run(capsys, "pdim", "--config", cfg, "--m-max", "4")
    assert code == 2 and "cap" in err


def test_bad_config_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n "H": 3,\n}')
    code, _, err = run(capsys, "trace", "--config", str(path))
    assert code == 2 and "line 3" in err


def test_unwritable_out_dir(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, _ = run(capsys, "trace", "--instance", "quadratic", "--out", str(blocker / "sub"))
    assert code == 2
