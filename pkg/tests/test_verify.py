import csv
import io
import json
import math
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from mixmod.verify import REPORT_SCHEMA, ConfigError, ExperimentConfig, Report, emit_report, report_from_json, run_experiment, trial_rng
from mixmod.verify.cli import main
from mixmod.verify.experiments import run_trials


def test_trial_rng_counter_based():
    a = trial_rng(7, 3).standard_normal(4)
    b = trial_rng(7, 3).standard_normal(4)
    c = trial_rng(7, 4).standard_normal(4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    trial_rng(2**64 - 1, 0).random()


def test_run_trials_order_independent_of_threads(monkeypatch):
    cfg = ExperimentConfig.defaults("monotonicity", trials=12)

    def fn(i, rng):
        from mixmod.verify.report import TrialRecord
        return TrialRecord(i, "", 0.0, {"x": float(rng.random())})

    monkeypatch.setenv("VERIFY_THREADS", "1")
    serial = run_trials(cfg, fn)
    monkeypatch.setenv("VERIFY_THREADS", "4")
    parallel = run_trials(cfg, fn)
    assert [r.trial for r in parallel] == list(range(12))
    assert [r.values for r in serial] == [r.values for r in parallel]


def test_schatten_example():
    cfg = ExperimentConfig.defaults("schatten-bound", N=8, trials=10, p_grid=(1, 2), seed=42)
    r = run_experiment(cfg)
    assert r.passed and r.max_violation <= 1e-9
    assert len(r.trials) == 10


def test_kn_roundtrip_example():
    r = run_experiment(ExperimentConfig.defaults("kn-roundtrip", N=16, trials=5))
    assert r.passed and r.max_violation <= 1e-12


def test_counterexample_example():
    r = run_experiment(ExperimentConfig.defaults("counterexample", N=32, M=4))
    assert r.passed
    assert r.checks["spectrum_error"][0] <= 1e-9
    table = r.observed["sharpness"]
    assert [row["K"] for row in table] == [4, 8, 16]


@pytest.mark.parametrize(
    "name,overrides",
    [
        ("schatten-bound", dict(N=128)),
        ("kn-magnitude", dict(N=64)),
        ("counterexample", dict(N=32, M=5)),
        ("lemma31", dict(p_grid=(3.0,))),
        ("frame-suite", dict(a=3)),
        ("embedding", dict(p_grid=(2.5,))),
        ("monotonicity", dict(seed=-1)),
        ("monotonicity", dict(format="xml")),
    ],
)
def test_config_errors(name, overrides):
    with pytest.raises(ConfigError):
        ExperimentConfig.defaults(name, **overrides).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig.defaults("no-such-experiment")


def test_empty_report():
    r = run_experiment(ExperimentConfig.defaults("kn-roundtrip", trials=0))
    obj = json.loads(emit_report(r))
    jsonschema.validate(obj, REPORT_SCHEMA)
    assert obj["trials"] == [] and obj["aggregate"]["pass"] is True


def test_report_roundtrip_and_csv(tmp_path):
    r = run_experiment(ExperimentConfig.defaults("norm-equivalence", trials=4))
    text = emit_report(r, "json", tmp_path / "r.json")
    assert (tmp_path / "r.json").read_text() == text
    back = report_from_json(text)
    assert back.experiment == r.experiment and back.primary == r.primary
    assert back.checks == r.checks
    assert [t.to_dict() for t in back.trials] == [t.to_dict() for t in r.trials]
    assert back.config == r.config
    assert emit_report(back) == text
    rows = list(csv.reader(io.StringIO(emit_report(r, "csv"))))
    assert len(rows) == len(r.trials) + 1
    assert rows[0][:3] == ["trial", "digest", "violation"]
    # 17 significant digits round-trip exactly
    col = rows[0].index("ratio[p=1]")
    assert float(rows[1][col]) == r.trials[0].values["ratio[p=1]"]
    with pytest.raises(ValueError):
        emit_report(r, "yaml")


def test_pass_flag_recomputable():
    r = run_experiment(ExperimentConfig.defaults("lemma31", trials=5))
    obj = json.loads(emit_report(r))
    for name, check in obj["aggregate"]["checks"].items():
        values = [t["values"][name] for t in obj["trials"] if name in t["values"]]
        if values:
            assert check["max"] == max(values)
        assert check["pass"] == (check["max"] <= check["tolerance"])


def test_cli_examples(capsys, tmp_path):
    assert main(["kn-roundtrip", "--dim", "8", "--trials", "3", "--seed", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["config"]["N"] == 8 and out["config"]["seed"] == 1
    assert main(["schatten-bound", "--dim", "128"]) == 2
    assert "N must lie" in capsys.readouterr().err
    assert main(["counterexample", "--dim", "32", "--channels", "5"]) == 2
    assert main(["nonsense"]) == 2
    assert main(["embedding", "--p", "1.5,x"]) == 2
    path = tmp_path / "out.csv"
    assert main(["frame-suite", "--trials", "3", "--format", "csv", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert path.read_text().count("\n") == 4


def test_cli_failure_exit(monkeypatch, capsys):
    import mixmod.verify.cli as cli

    def failing(cfg):
        return Report(cfg.name, cfg.to_dict(), [], {"x": (1.0, 0.0)}, "x")

    monkeypatch.setattr(cli, "run_experiment", failing)
    assert cli.main(["monotonicity", "--trials", "1"]) == 1
    assert "failed checks: x" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mixmod", "kn-roundtrip", "--dim", "4", "--trials", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["aggregate"]["pass"] is True
