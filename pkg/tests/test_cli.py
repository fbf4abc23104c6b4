import csv
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from unifact.cli import main
from unifact.io import matrix_to_json

CONFIGS = Path(__file__).resolve().parent.parent / "demos" / "configs"


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write(path, obj):
    path.write_text(json.dumps(obj))
    return path


def error_json(capsys):
    return json.loads(capsys.readouterr().err)


@pytest.fixture
def small_e1(tmp_path):
    cfg = json.loads((CONFIGS / "example1.json").read_text())
    cfg["times"] = {"start": 0.0, "stop": 10.0, "num": 21}
    cfg["snapshots"] = [0.0, 10.0]
    return write(tmp_path / "e1.json", cfg)


def test_example1_artifacts(tmp_path, small_e1):
    out = tmp_path / "results"
    assert main(["example1", "--config", str(small_e1), "--out", str(out)]) == 0
    for name in ("timeseries.csv", "deviation.csv", "manifest.json", "snapshots.json"):
        assert (out / name).exists()
    ts = rows(out / "timeseries.csv")
    assert len(ts) == 21
    assert list(ts[0]) == ["t", "delta_d", "relative_entropy", "bures",
                           "pop_gg", "pop_EG", "pop_ee", "pop_singlet"]
    snaps = json.loads((out / "snapshots.json").read_text())
    assert [s["t"] for s in snaps["snapshots"]] == [0.0, 10.0]
    assert snaps["analytic_mode"] == "printed"
    man = json.loads((out / "manifest.json").read_text())
    assert man["kind"] == "example1" and man["seed"] == 0
    assert len(man["config_sha256"]) == 64 and man["wall_seconds"] >= 0


def test_modulus_squared_flag(tmp_path, small_e1):
    out = tmp_path / "r"
    assert main(["example1", "--config", str(small_e1), "--out", str(out), "--modulus-squared"]) == 0
    assert json.loads((out / "snapshots.json").read_text())["analytic_mode"] == "modulus"


def test_outputs_are_byte_identical(tmp_path, small_e1):
    for name in ("a", "b"):
        assert main(["example1", "--config", str(small_e1), "--out", str(tmp_path / name),
                     "--seed", "5"]) == 0
    for f in ("timeseries.csv", "deviation.csv", "snapshots.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    ma = json.loads((tmp_path / "a" / "manifest.json").read_text())
    mb = json.loads((tmp_path / "b" / "manifest.json").read_text())
    assert ma["config_sha256"] == mb["config_sha256"] and ma["seed"] == 5


def test_trotter_range(tmp_path):
    out = tmp_path / "results"
    cfg = str(CONFIGS / "zz_xx_system.json")
    assert main(["trotter", "--config", cfg, "--n", "2..8", "--out", str(out)]) == 0
    r = rows(out / "trotter.csv")
    assert len(r) == 7 and list(r[0]) == ["n", "tau", "error", "seconds"]
    assert main(["trotter", "--config", cfg, "--n", "6", "--plain-trotter", "--out", str(tmp_path / "p")]) == 0
    plain = rows(tmp_path / "p" / "trotter.csv")
    assert float(plain[0]["error"]) > float(r[4]["error"])


def test_perturb_both_cases(tmp_path):
    for case in ("a", "b"):
        out = tmp_path / case
        assert main(["perturb", "--config", str(CONFIGS / "perturb_b.json"), "--case", case,
                     "--out", str(out)]) == 0
        r = rows(out / "discrepancy.csv")
        assert [float(x["lam"]) for x in r] == [0.04, 0.02, 0.01]
        assert 3 <= float(r[1]["ratio"]) <= 5
        state = json.loads((out / "state.json").read_text())
        assert state["case"] == case and state["rho"]["dim"] == 4


def test_sweep_lambda(tmp_path):
    out = tmp_path / "sw"
    assert main(["sweep", "--config", str(CONFIGS / "sweep_lam.json"), "--out", str(out)]) == 0
    r = rows(out / "sweep.csv")
    assert len(r) == 3 and "discrepancy" in r[0]
    for k in range(3):
        assert (out / "points" / f"{k:03d}" / "manifest.json").exists()


def test_sweep_n_on_trotter(tmp_path, monkeypatch):
    monkeypatch.setenv("UNIFACT_THREADS", "3")
    cfg = write(tmp_path / "s.json", {"base": "trotter", "axis": "n", "values": [4, 5, 6, 7, 8],
                                      "params": json.loads((CONFIGS / "zz_xx_system.json").read_text())})
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    err = [float(x["error"]) for x in rows(tmp_path / "o" / "sweep.csv")]
    ratios = np.array(err[:-1]) / np.array(err[1:])
    assert np.all((ratios > 3.5) & (ratios < 4.5))


def test_empty_sweep_is_validation_error(tmp_path, capsys):
    cfg = write(tmp_path / "s.json", {"base": "trotter", "axis": "n", "values": [], "params": {}})
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert error_json(capsys)["error"] == "validation"
    assert not (tmp_path / "o").exists()


def test_measure_and_axioms(tmp_path):
    bell = np.zeros((4, 4))
    bell[np.ix_([0, 3], [0, 3])] = 0.5
    a = write(tmp_path / "bell.json", matrix_to_json(bell))
    b = write(tmp_path / "mixed.json", matrix_to_json(np.eye(4) / 4))
    assert main(["measure", str(a), str(b), "--out", str(tmp_path / "m")]) == 0
    rep = json.loads((tmp_path / "m" / "report.json").read_text())
    assert abs(rep["delta_d"] - 0.75) <= 1e-12
    assert main(["measure", str(a), "--reference", "traced", "--dims", "2,2",
                 "--out", str(tmp_path / "t")]) == 0
    rep = json.loads((tmp_path / "t" / "report.json").read_text())
    assert rep["reference"].startswith("product of marginals")
    assert main(["axioms", str(a), str(b), "--dims", "2,2", "--seed", "11",
                 "--out", str(tmp_path / "x")]) == 0
    ax = json.loads((tmp_path / "x" / "axioms.json").read_text())
    assert ax["seed"] == 11 and ax["local_unitary_max_dev"] <= 1e-10


def test_pure_reference_gives_infinite_entropy(tmp_path):
    a = write(tmp_path / "a.json", matrix_to_json(np.eye(2) / 2))
    b = write(tmp_path / "b.json", matrix_to_json(np.diag([1.0, 0.0])))
    assert main(["measure", str(a), str(b), "--out", str(tmp_path / "m")]) == 0
    assert json.loads((tmp_path / "m" / "report.json").read_text())["relative_entropy"] == "inf"


def test_closure_and_wei_norman(tmp_path):
    assert main(["closure", "--config", str(CONFIGS / "su2_closure.json"), "--out", str(tmp_path / "c")]) == 0
    assert json.loads((tmp_path / "c" / "manifest.json").read_text())["summary"]["dim"] == 3
    assert main(["wei-norman", "--config", str(CONFIGS / "driven_qubit.json"),
                 "--out", str(tmp_path / "w")]) == 0
    r = rows(tmp_path / "w" / "trajectory.csv")
    assert list(r[0])[:3] == ["t", "re_g1", "im_g1"] and len(r) == 201


def test_example2(tmp_path):
    cfg = json.loads((CONFIGS / "example2.json").read_text())
    cfg["times"] = [0.0, 1.0, 2.0]
    cfg["snapshots"] = [2.0]
    path = write(tmp_path / "e2.json", cfg)
    assert main(["example2", "--config", str(path), "--out", str(tmp_path / "o")]) == 0
    r = rows(tmp_path / "o" / "timeseries.csv")
    assert len(r) == 3 and float(r[0]["delta_d"]) == 0.0 and float(r[2]["delta_d"]) > 0


def test_validation_errors(tmp_path, capsys):
    cfg = str(CONFIGS / "zz_xx_system.json")
    assert main(["trotter", "--config", cfg, "--tol", "bogus=1", "--out", str(tmp_path)]) == 2
    assert "bogus" in error_json(capsys)["message"]
    assert main(["trotter", "--config", cfg, "--tol", "ode_tol", "--out", str(tmp_path)]) == 2
    capsys.readouterr()
    assert main(["trotter", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == 2
    capsys.readouterr()
    bad = write(tmp_path / "bad.json", {"h_a": "Z", "h_b": "Z"})
    assert main(["trotter", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "h_int" in error_json(capsys)["message"]


def test_computation_error_exit_3(tmp_path, capsys):
    cfg = write(tmp_path / "leak.json", {"fock_cutoff": 16, "photon_dist": [[13, 1.0]],
                                         "times": {"stop": 5.0, "num": 11}})
    assert main(["example1", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 3
    err = error_json(capsys)
    assert err["error"] == "cutoff_leakage" and err["suggested_cutoff"] > 16
    assert not (tmp_path / "o" / "manifest.json").exists()


def test_tolerance_override_reaches_computation(tmp_path, capsys):
    cfg = str(CONFIGS / "driven_qubit.json")
    assert main(["wei-norman", "--config", cfg, "--tol", "ode_tol=1e-15", "--out", str(tmp_path)]) == 3
    assert error_json(capsys)["error"] == "step_too_large"


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "unifact.cli", "sweep", "--config",
                           str(CONFIGS / "sweep_lam.json"), "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run([sys.executable, "-m", "unifact.cli", "measure", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert json.loads(proc.stderr)["error"] == "validation"
