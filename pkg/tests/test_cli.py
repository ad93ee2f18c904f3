import json
import subprocess
import sys

import numpy as np
import pytest

from greenlab.cli import main


def run_cli(args):
    return main(args)


def test_solve_writes_solution(tmp_path):
    out = tmp_path / "sol.csv"
    code = run_cli(["solve", "--a", "1", "--b", "0.5", "--p", "7",
                    "--out", str(out)])
    assert code == 0
    assert out.exists()
    assert (tmp_path / "sol.json").exists()
    rows = out.read_text().splitlines()
    assert rows[0] == "r,v,dv,w,dw"
    assert len(rows) > 1000


def test_solve_zero_source_constant(tmp_path, capsys):
    out = tmp_path / "flat.csv"
    code = run_cli(["solve", "--a", "1", "--b", "0", "--p", "0",
                    "--out", str(out)])
    assert code == 0
    captured = capsys.readouterr().out
    assert "v0 = 1" in captured
    data = np.genfromtxt(out, delimiter=",", names=True)
    assert np.max(np.abs(data["v"] - 1.0)) <= 1e-10


def test_solve_usage_errors(tmp_path):
    assert run_cli(["solve", "--a", "0", "--b", "0"]) == 2
    assert run_cli(["solve", "--a", "1", "--b", "-1"]) == 2


def test_solve_failure_is_exit_one(tmp_path, capsys):
    out = tmp_path / "bad.csv"
    code = run_cli(["solve", "--a", "0.05", "--b", "5", "--out", str(out)])
    assert code == 1
    diag = json.loads(capsys.readouterr().out)
    assert diag["error"] in ("PositivityLossError", "NonConvergenceError")


def test_check_representation_paths(tmp_path):
    sol = tmp_path / "sol.csv"
    assert run_cli(["solve", "--a", "1", "--b", "0.5", "--out", str(sol)]) == 0
    report = tmp_path / "rep.json"
    code = run_cli(["check-representation", "--sol", str(sol),
                    "--report", str(report)])
    assert code == 0
    payload = json.loads(report.read_text())
    assert payload["reports"][0]["passed"]

    # quoted constants break the boundary trace: exit 1 plus erratum note
    code_paper = run_cli(["check-representation", "--sol", str(sol),
                          "--constants", "paper", "--report", str(report)])
    assert code_paper == 1

    assert run_cli(["check-representation", "--sol", str(tmp_path / "nope.csv"),
                    "--report", str(report)]) == 2


def test_map_hyperbolic(tmp_path, capsys):
    sol = tmp_path / "sol.csv"
    run_cli(["solve", "--a", "1", "--b", "0.5", "--out", str(sol)])
    prof = tmp_path / "profile.csv"
    code = run_cli(["map", "hyperbolic", "--sol", str(sol), "--out", str(prof)])
    assert code == 0
    out = capsys.readouterr().out
    assert "alpha" in out
    data = np.genfromtxt(prof, delimiter=",", names=True)
    assert set(data.dtype.names) == {"rho", "u"}
    meta = json.loads((tmp_path / "profile.json").read_text())
    assert meta["alpha_est"] == pytest.approx(1 / np.sqrt(2), abs=1e-3)


def test_demo_nonexistence(tmp_path):
    table = tmp_path / "table.csv"
    report = tmp_path / "demo.json"
    code = run_cli(["demo", "nonexistence", "--alpha", "1",
                    "--out", str(table), "--report", str(report)])
    assert code == 0
    data = np.genfromtxt(table, delimiter=",", names=True)
    assert list(data["rho_x"]) == [0.0, 5.0, 10.0, 15.0]
    assert np.all(np.diff(data["T"]) < 0.0)
    assert run_cli(["demo", "nonexistence", "--alpha", "-1"]) == 2


def test_verify_exit_codes(tmp_path):
    report = tmp_path / "r.json"
    code = run_cli(["verify", "identities", "--r-list", "0.2,0.5",
                    "--report", str(report)])
    assert code == 0
    payload = json.loads(report.read_text())
    assert payload["command"] == "verify identities"
    assert all(r["passed"] for r in payload["reports"])

    # an unattainable tolerance flips the exit code (forced failure)
    code_bad = run_cli(["verify", "identities", "--r-list", "0.2,0.5",
                        "--tol", "1e-30", "--report", str(report)])
    assert code_bad == 1


def test_verify_reports_are_deterministic(tmp_path):
    r1, r2 = tmp_path / "a.json", tmp_path / "b.json"
    run_cli(["verify", "moving-plane", "--samples", "5000", "--seed", "9",
             "--report", str(r1)])
    run_cli(["verify", "moving-plane", "--samples", "5000", "--seed", "9",
             "--report", str(r2)])
    a = json.loads(r1.read_text())
    b = json.loads(r2.read_text())
    assert a["reports"] == b["reports"]


def test_errata_command(tmp_path):
    report = tmp_path / "errata.json"
    code = run_cli(["errata", "--report", str(report)])
    assert code == 0
    records = json.loads(report.read_text())
    names = {rec["name"] for rec in records}
    assert names == {
        "boggio-constant",
        "representation-constants",
        "hyperbolic-kernel",
        "linear-growth-beta",
    }
    assert all(rec["oracle_ok"] for rec in records)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "greenlab.cli", "verify", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "kernels" in proc.stdout
