import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest
from conftest import SKEW_CHANNELS

from secrecy_game.cli import main

REFERENCE = str(Path(__file__).resolve().parents[1] / "configs" / "reference.json")
SKEW_07 = json.dumps({"g_sd": 10.0, "g_rd": 2.5, "g_se": SKEW_CHANNELS[0.7], "g_re": 40.0 / 9.0})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_reference(capsys):
    code, out, _ = run(capsys, "analyze", "--config", REFERENCE)
    doc = json.loads(out)
    assert code == 0
    assert doc["conditions_hold"] is True
    assert doc["baseline"] == pytest.approx(1.0146, abs=1e-4)
    assert doc["maximin"] == 0.0
    assert doc["minimax"] == pytest.approx(0.4492, abs=2e-4)
    assert doc["reduced_game"]["a"] == pytest.approx(0.5255, abs=5e-4)


def test_analyze_conditions_violated(capsys):
    code, out, _ = run(capsys, "analyze", "--config", '{"g_sd": 1, "g_rd": 1, "g_se": 100, "g_re": 1}')
    assert code == 2
    assert json.loads(out)["conditions"]["cond_ii"] is False


def test_solve_conditions_violated(capsys):
    code, _, err = run(capsys, "solve", "--config", '{"g_sd": 1, "g_rd": 1, "g_se": 100, "g_re": 1}')
    assert code == 2
    assert "cond_ii" in err


@pytest.mark.parametrize(
    "config",
    ["/nonexistent/channel.json", "{not json", '{"g_sd": -1, "g_rd": 1, "g_se": 1, "g_re": 1}', '{"g_sd": 1}'],
)
def test_input_errors_exit_1(capsys, config):
    code, out, err = run(capsys, "analyze", "--config", config)
    assert code == 1
    assert out == ""
    assert err.startswith("error:")


def test_usage_errors_use_input_exit_code():
    for argv in (
        ["frobnicate"],
        ["solve", "--config", REFERENCE, "--t", "1"],
        ["solve", "--config", REFERENCE, "--method", "magic"],
        ["simulate", "--config", REFERENCE, "--blocks", "0"],
    ):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 1


def test_solve_both_t400(capsys, tmp_path):
    out = tmp_path / "solve.json"
    code, _, _ = run(capsys, "solve", "--config", REFERENCE, "--t", "400", "--method", "both", "--out", str(out))
    doc = json.loads(out.read_text())
    assert code == 0
    for key in ("value_analytic", "value_discrete", "bound", "k", "alpha", "a", "L"):
        assert key in doc
    assert doc["value_analytic"] == pytest.approx(0.092, abs=1e-3)
    assert doc["value_discrete"] == pytest.approx(0.0923, abs=5e-4)
    assert doc["bound"] == pytest.approx(0.00669, abs=5e-6)
    assert doc["gap"] <= doc["bound"]
    assert doc["analytic"] == "ok" and doc["authoritative"] == "analytic"
    assert doc["equilibrium_check"]["passed"] is True


def test_solve_unsupported_k(capsys):
    code, out, _ = run(capsys, "solve", "--config", SKEW_07, "--method", "analytic", "--t", "100")
    doc = json.loads(out)
    assert code == 0
    assert doc["analytic"] == "unsupported_k"
    assert doc["k"] == 2
    assert doc["value_discrete"] is not None
    assert doc["authoritative"] == "discrete"


def test_solve_tiny_grid(capsys):
    code, out, _ = run(capsys, "solve", "--config", REFERENCE, "--t", "2", "--method", "discrete")
    doc = json.loads(out)
    assert code == 0
    assert 0 <= doc["value_discrete"] <= doc["L"] * (1 - doc["a"])


def test_solve_dumps(capsys, tmp_path):
    m = tmp_path / "matrix.csv"
    prefix = tmp_path / "lp"
    code, _, _ = run(
        capsys, "solve", "--config", REFERENCE, "--t", "10", "--method", "discrete",
        "--dump-matrix", str(m), "--strategies", str(prefix),
    )
    assert code == 0
    assert m.read_text().splitlines()[0] == "i,j,xi,eta,payoff"
    assert len(m.read_text().splitlines()) == 1 + 11 * 11
    for role in ("source", "jammer"):
        assert Path(f"{prefix}_{role}.csv").read_text().startswith("index,rate,probability")


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--config", REFERENCE, "--t", "200")
    doc = json.loads(out)
    assert code == 0
    assert doc["passed"] is True
    assert doc["discrete"]["passed"] is True and doc["discrete"]["epsilon"] == 1e-8
    assert doc["analytic"]["passed"] is True


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--config", REFERENCE, "--blocks", "100000", "--seed", "3")
    doc = json.loads(out)
    assert code == 0
    assert doc["strategy"] == "analytic"
    assert abs(doc["empirical_mean"] - 0.092) <= 0.003
    assert doc["target"] == pytest.approx(0.092, abs=1e-3)
    _, again, _ = run(capsys, "simulate", "--config", REFERENCE, "--blocks", "100000", "--seed", "3")
    assert again == out


def test_export_cdf(capsys, tmp_path):
    out = tmp_path / "cdf.csv"
    code, _, _ = run(capsys, "export-cdf", "--config", REFERENCE, "--t", "400", "--n", "1000", "--out", str(out))
    assert code == 0
    for path in (out, tmp_path / "cdf_discrete.csv"):
        rows = list(csv.reader(path.open()))
        assert rows[0] == ["rate", "F_source", "F_jammer"]
        assert len(rows) == 1002
        cell = float(rows[2][0]) - float(rows[1][0])
        for r in rows[1:]:
            rate, fs = float(r[0]), float(r[1])
            if rate < 1.947 - cell:
                assert fs == 0.0
            if rate > 2.893 + cell:
                assert fs == 1.0


def test_export_cdf_falls_back_to_discrete(capsys):
    code, out, err = run(capsys, "export-cdf", "--config", SKEW_07, "--t", "50", "--n", "20")
    assert code == 0
    assert "unavailable" in err
    assert out.splitlines()[0] == "rate,F_source,F_jammer"


def test_json_round_trip_12_digits(capsys):
    _, out, _ = run(capsys, "analyze", "--config", REFERENCE)
    doc = json.loads(out)
    for value in doc["corner_points"].values():
        assert float(f"{value:.12g}") == value


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "secrecy_game", "analyze", "--config", REFERENCE],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["conditions_hold"] is True


def test_solver_failure_exit_3(capsys, monkeypatch):
    from secrecy_game import SolverFailure, discrete

    def broken(*args, **kwargs):
        raise SolverFailure("iteration cap reached")

    monkeypatch.setattr(discrete, "solve_grid_game", broken)
    code, _, err = run(capsys, "solve", "--config", REFERENCE, "--method", "discrete")
    assert code == 3
    assert "iteration cap" in err
