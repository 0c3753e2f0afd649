import logging
import subprocess
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from mfcsim.cli import configure_logging, main
from mfcsim.data.loader import load_canned_scenario
from mfcsim.output.reporter import export_csv
from mfcsim.simulation.engine import SimulationEngine
from validate_scenario import main as validate

ROOT = Path(__file__).resolve().parent.parent


def test_run_linear(tmp_path, capsys):
    out = tmp_path / "linear.csv"
    code = main(["run", "--scenario", "linear-2x2", "--set", "sim.duration=5", "--out", str(out)])
    assert code == 0
    frame = pd.read_csv(out)
    assert len(frame.columns) == 20
    assert len(frame) == 501
    assert "RMSE" in capsys.readouterr().out


def test_run_three_tank(tmp_path):
    out = tmp_path / "tanks.csv"
    assert main(["run", "--scenario", "three-tank", "--set", "sim.duration=30", "--out", str(out)]) == 0
    assert out.exists()


def test_cli_matches_api(tmp_path):
    out = tmp_path / "cli.csv"
    args = ["run", "--scenario", "linear-2x2", "--set", "sim.duration=3", "--seed", "3", "--out", str(out)]
    assert main(args) == 0

    scenario = load_canned_scenario("linear-2x2", ["sim.duration=3"]).with_seed(3)
    api = export_csv(SimulationEngine(scenario).run(), tmp_path / "api.csv")
    assert out.read_bytes() == api.read_bytes()


def test_run_from_file(tmp_path):
    config = tmp_path / "tanks.yaml"
    config.write_text(
        "name: small\n"
        "plant: {type: three_tank}\n"
        "channels: [{kp: 10.0}, {kp: 10.0}]\n"
        "references: [{breakpoints: [[0.0, 0.1]]}, {breakpoints: [[0.0, 0.1]]}]\n"
        "sim: {duration: 5.0}\n",
        encoding="utf-8",
    )
    assert main(["run", "--config", str(config), "--out", str(tmp_path / "small.csv")]) == 0


def test_configuration_errors_exit_1(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "missing.yaml")]) == 1
    assert "Error" in capsys.readouterr().err

    bad = tmp_path / "bad.yaml"
    bad.write_text("name: bad\nplant: {type: three_tank, pumps: 3}\n", encoding="utf-8")
    assert main(["run", "--config", str(bad)]) == 1
    assert "plant.pumps" in capsys.readouterr().err

    assert main(["run", "--scenario", "linear-2x2", "--set", "sim.duration"]) == 1
    assert main(["run"]) == 1
    assert main(["fly"]) == 1


def test_help_exits_0():
    assert main(["--help"]) == 0


def test_divergence_exits_2(tmp_path):
    args = [
        "run", "--scenario", "linear-2x2",
        "--set", "sim.duration=5", "--set", "sim.divergence_threshold=0.5",
        "--out", str(tmp_path / "diverged.csv"),
    ]
    assert main(args) == 2
    assert (tmp_path / "diverged.csv").exists()


def test_compare(tmp_path, capsys):
    code = main(["compare", "--scenario", "three-tank", "--set", "sim.duration=30", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "model_free.csv").exists()
    assert (tmp_path / "classic_pid.csv").exists()
    summary = pd.read_csv(tmp_path / "summary.csv", index_col="metric")
    assert {"rmse_y_1", "rmse_y_2", "diverged"} <= set(summary.index)
    out = capsys.readouterr().out
    assert "MODEL-FREE vs CLASSIC PID" in out
    assert "RMSE y_1" in out


def test_estimator_on_polynomial(tmp_path):
    out = tmp_path / "trace.csv"
    args = [
        "estimator", "--taylor-order", "2", "--window", "0.5", "--period", "0.001",
        "--signal", "polynomial:1,2,3", "--duration", "2", "--out", str(out),
    ]
    assert main(args) == 0
    trace = pd.read_csv(out)
    for order in range(3):
        assert np.max(np.abs(trace[f"est_{order}"] - trace[f"true_{order}"])) < 1e-4

    kernel = pd.read_csv(tmp_path / "trace_kernel.csv", index_col="order")
    assert kernel.shape == (3, 501)


def test_estimator_on_constant(tmp_path):
    out = tmp_path / "constant.csv"
    assert main(["estimator", "--signal", "polynomial:5", "--out", str(out)]) == 0
    trace = pd.read_csv(out)
    np.testing.assert_allclose(trace["est_1"], 0.0, atol=1e-9)


def test_estimator_rejects_bad_orders(tmp_path):
    args = ["estimator", "--taylor-order", "1", "--integration-order", "1", "--out", str(tmp_path / "x.csv")]
    assert main(args) == 1


def test_log_level_from_environment(monkeypatch):
    monkeypatch.setenv("MFC_LOG", "DEBUG")
    configure_logging()
    assert logging.getLogger().level == logging.DEBUG
    monkeypatch.setenv("MFC_LOG", "nonsense")
    configure_logging(verbose=True)
    assert logging.getLogger().level == logging.INFO
    monkeypatch.delenv("MFC_LOG")
    configure_logging()
    assert logging.getLogger().level == logging.WARNING


@pytest.mark.parametrize("scenario, code", [("three-tank", 0), ("four-tank", 1)])
def test_validate_scenario_script(scenario, code):
    result = subprocess.run(
        [sys.executable, str(ROOT / "validate_scenario.py"), "--scenario", scenario],
        cwd=ROOT,
        capture_output=True,
        text=True,
    )
    assert result.returncode == code
    if code == 0:
        assert "VALID" in result.stdout


def test_validate_scenario_usage_errors_exit_1(capsys):
    assert validate(["--scenario", "four-tank"]) == 1
    assert validate([]) == 1
    assert validate(["--scenario", "three-tank", "--set", "sim.duration=nan"]) == 1
    assert validate(["--help"]) == 0
    assert "INVALID" in capsys.readouterr().err
