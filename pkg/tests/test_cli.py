import json
import os
import subprocess
import sys

from entropic_uncertainty.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_entropy_command(capsys, tmp_path):
    csv_path = tmp_path / "bins.csv"
    code, out = run(capsys, "entropy", "--state", "gaussian:1,0,0", "--delta", "100", "--xi0", "0",
                    "--csv", str(csv_path))
    assert code == 0
    data = json.loads(out.out)
    assert abs(data["entropy"]["value"] - 0.6931471805599453) < 1e-6
    assert csv_path.read_text().startswith("k,lower_edge,upper_edge,prob\n")


def test_entropy_window_defaults_to_midpoint(capsys):
    code, out = run(capsys, "entropy", "--state", "gaussian:1", "--delta", "1", "--window", "0")
    assert code == 0
    assert json.loads(out.out)["xi0"] == -0.5


def test_bounds_command(capsys):
    code, out = run(capsys, "bounds", "--dx", "1", "--dp", "1", "--hbar", "1",
                    "--x2-tail", "0.2", "--p2-tail", "0.1", "--qx", "0.1", "--qp", "0.1")
    data = json.loads(out.out)
    assert code == 0
    assert data["bound_L_case"] == 1 and data["bound_L"] < data["bound_B"]


def test_bounds_with_state(capsys):
    code, out = run(capsys, "bounds", "--dx", "0.5", "--dp", "0.5", "--state", "gaussian:1",
                    "--window", "2", "2")
    assert code == 0
    assert json.loads(out.out)["report"]["verdicts"]["L"] == "satisfied"


def test_bad_input_exit_code(capsys):
    code, out = run(capsys, "entropy", "--state", "gaussian:1", "--delta", "1", "--xi0", "0",
                    "--window", "2")
    assert code == 2 and "DomainError" in out.err


def test_verify_exit_status(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"states": [{"family": "gaussian", "sigma": 1.0}],
                               "gamma_grid": [1.0, 20.0], "windows": [[1, 1]]}))
    code, out = run(capsys, "verify", "--config", str(cfg), "--out", str(tmp_path / "out"))
    assert code == 0
    assert json.loads((tmp_path / "out" / "reports.json").read_text())["summary"]["ok"]

    cfg.write_text(json.dumps({"states": [{"family": "grid", "path": str(tmp_path / "none.txt")}],
                               "gamma_grid": [1.0]}))
    code, _ = run(capsys, "verify", "--config", str(cfg), "--out", str(tmp_path / "out2"))
    assert code == 1


def test_crossover_and_fig2(capsys, tmp_path):
    code, out = run(capsys, "crossover")
    assert code == 0 and 7.16 < json.loads(out.out)["gamma_star"] < 7.18
    code, _ = run(capsys, "fig2", "--gamma-lo", "0.5", "--gamma-hi", "20", "--n", "10",
                  "--out", str(tmp_path / "f.csv"))
    assert code == 0 and (tmp_path / "f_plot.py").exists()


def test_spheroidal_table(capsys, tmp_path):
    code, _ = run(capsys, "spheroidal-table", "--c-hi", "2", "--n", "3", "--out", str(tmp_path / "t.csv"))
    assert code == 0
    assert (tmp_path / "t.csv").read_text().splitlines()[0] == "c,eigenvalue,R00_at_1"


def test_module_entry_point_and_env_override():
    env = dict(os.environ, ENTROPIC_UR_QUAD_EPSREL="1e-8")
    out = subprocess.run([sys.executable, "-c",
                          "from entropic_uncertainty import _numerics; print(_numerics.EPSREL)"],
                         env=env, capture_output=True, text=True, check=True)
    assert float(out.stdout) == 1e-8
    res = subprocess.run([sys.executable, "-m", "entropic_uncertainty", "crossover"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "gamma_star" in res.stdout
