import json

import numpy as np
import pytest

from lattice_pdo.cli import main


def write_config(tmp_path, cfg, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def base_config(task, **overrides):
    cfg = {
        "lattice": {"hbar": 1.0, "dim": 1},
        "symbol": {"family": "difference", "params": {}},
        "truncation": {"radius": 1},
        "task": task,
        "params": {},
        "output": {"directory": ".", "formats": ["csv", "json"]},
    }
    cfg.update(overrides)
    return cfg


def test_assemble_difference_csv(tmp_path):
    cfg = base_config("assemble")
    rc = main(["run", write_config(tmp_path, cfg), "--out", str(tmp_path / "out")])
    assert rc == 0
    lines = (tmp_path / "out" / "kernel.csv").read_text().splitlines()
    assert len(lines) == 1 + 5  # header plus the five nonzero stencil entries
    values = sorted(float(l.split(",")[2]) for l in lines[1:])
    assert values == [-1.0, -1.0, -1.0, 1.0, 1.0]
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["version"]
    names = {o["path"] for o in manifest["outputs"]}
    assert "kernel.csv" in names
    assert all(len(o["sha256"]) == 64 for o in manifest["outputs"])


def test_order_report_nuclear(tmp_path):
    cfg = base_config("order-report",
                      params={"mu": -3.0, "delta": 0.0, "r": 1.0, "p": 2.0, "p2": 2.0})
    rc = main(["run", write_config(tmp_path, cfg), "--out", str(tmp_path / "out")])
    assert rc == 0
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["verdicts"]["r_nuclear"] == "holds"
    assert report["t"] == pytest.approx(1.0)


def test_spectrum_task_weyl_bracket(tmp_path):
    cfg = base_config(
        "spectrum",
        symbol={"family": "schrodinger",
                "params": {"potential": {"c": 1.0, "l": 1}, "lambda": 0.0}},
        truncation={"radius": 25},
        params={"j_max": 5, "tol": 1e-8},
    )
    rc = main(["run", write_config(tmp_path, cfg), "--out", str(tmp_path / "out")])
    assert rc == 0
    lines = (tmp_path / "out" / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "j,lambda_j,converged,R_used"
    rows = [l.split(",") for l in lines[1:]]
    assert len(rows) == 5
    assert all(r[2] == "1" for r in rows)
    lam = np.array([float(r[1]) for r in rows])
    # sorted-potential oracle: V(k) + 2 over the box, smallest five
    r_used = int(rows[0][3])
    ks = np.arange(-r_used, r_used + 1)
    oracle = np.sort(ks.astype(float) ** 2 + 2.0)[:5]
    assert np.max(np.abs(lam - oracle)) <= 4.0


def test_coeffs_task(tmp_path):
    cfg = base_config("coeffs", params={"freq_radius": 2})
    rc = main(["run", write_config(tmp_path, cfg), "--out", str(tmp_path / "out")])
    assert rc == 0
    lines = (tmp_path / "out" / "coeffs.csv").read_text().splitlines()
    assert lines[0] == "k_1,m_1,re,im"
    assert len(lines) == 1 + 3 * 5


def test_check_nuclear_task(tmp_path):
    cfg = base_config(
        "check-nuclear",
        symbol={"family": "decaying", "params": {"s": 3.0, "a": 1.0, "b": 0.0}},
        truncation={"radius": 50},
        params={"r": 1.0, "p2": 2.0, "p": 2.0},
    )
    rc = main(["run", write_config(tmp_path, cfg), "--out", str(tmp_path / "out")])
    assert rc == 0
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["verdicts"]["r_nuclear"] == "holds"
    assert not report["diverging"]
    sums = (tmp_path / "out" / "sums.csv").read_text().splitlines()
    assert sums[0] == "criterion,radius,value"
    assert len(sums) == 3  # value at R and at 2R


def test_check_bounds_divergence(tmp_path):
    cfg = base_config(
        "check-bounds",
        symbol={"family": "multiplication", "params": {"epsilon": 1.0}},
        truncation={"radius": 50},
        params={"p": 2.0},
    )
    rc = main(["run", write_config(tmp_path, cfg), "--out", str(tmp_path / "out")])
    assert rc == 0
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["verdicts"]["l1_to_linf_bounded"] == "fails"
    assert report["diverging"]["sup_entry"]


def test_diag_approx_task(tmp_path):
    cfg = base_config(
        "diag-approx",
        symbol={"family": "decaying", "params": {"s": 3.0, "a": 2.0, "b": 1.0}},
        truncation={"radius": 30},
    )
    rc = main(["run", write_config(tmp_path, cfg), "--out", str(tmp_path / "out")])
    assert rc == 0
    summary = json.loads((tmp_path / "out" / "diag_approx.json").read_text())
    assert summary["hermitized"] is True
    assert summary["applicable"] is True
    lines = (tmp_path / "out" / "diag_approx.csv").read_text().splitlines()
    assert lines[0] == "index,k_1,eigenvalue,diag,residual"
    assert len(lines) == 1 + 61


def test_fit_growth_task(tmp_path):
    cfg = base_config(
        "fit-growth",
        symbol={"family": "schrodinger",
                "params": {"potential": {"c": 1.0, "l": 1}, "lambda": 0.0}},
        truncation={"radius": 25},
        params={"j_max": 60, "tol": 1e-8, "j_range": [20, 60], "max_dim": 1001},
    )
    rc = main(["run", write_config(tmp_path, cfg), "--out", str(tmp_path / "out")])
    assert rc == 0
    growth = json.loads((tmp_path / "out" / "growth.json").read_text())
    assert 1.8 <= growth["slope"] <= 2.2


def test_config_error_unknown_family(tmp_path, capsys):
    cfg = base_config("assemble", symbol={"family": "nope", "params": {}})
    rc = main(["run", write_config(tmp_path, cfg), "--out", str(tmp_path / "out")])
    assert rc == 2
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1
    payload = json.loads(err[0])
    assert payload["error"] == "config"
    assert payload["field"] == "symbol.family"


def test_config_error_missing_field(tmp_path, capsys):
    cfg = base_config("assemble")
    del cfg["lattice"]["hbar"]
    rc = main(["run", write_config(tmp_path, cfg), "--out", str(tmp_path / "out")])
    assert rc == 2
    payload = json.loads(capsys.readouterr().err.strip())
    assert payload["field"] == "lattice.hbar"


def test_config_error_bad_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["run", str(path)]) == 2


def test_budget_failure_exit_code(tmp_path, capsys):
    cfg = base_config(
        "spectrum",
        symbol={"family": "schrodinger",
                "params": {"potential": {"c": 1.0, "l": 1}, "lambda": 0.0}},
        truncation={"radius": 2},
        params={"j_max": 5, "tol": 1e-8, "max_dim": 7},
    )
    rc = main(["run", write_config(tmp_path, cfg), "--out", str(tmp_path / "out")])
    assert rc == 3
    payload = json.loads(capsys.readouterr().err.strip())
    assert payload["error"] == "numeric"
    # the partial spectrum is still written
    assert (tmp_path / "out" / "spectrum.csv").exists()


def test_determinism_across_thread_counts(tmp_path):
    cfg = base_config(
        "check-nuclear",
        symbol={"family": "decaying", "params": {"s": 2.0, "a": 1.0, "b": 1.0}},
        truncation={"radius": 40},
        params={"r": 1.0, "p2": 2.0},
    )
    path = write_config(tmp_path, cfg)
    assert main(["run", path, "--out", str(tmp_path / "a"), "--threads", "1"]) == 0
    assert main(["run", path, "--out", str(tmp_path / "b"), "--threads", "8"]) == 0
    assert (tmp_path / "a" / "sums.csv").read_bytes() == (tmp_path / "b" / "sums.csv").read_bytes()
    ra = json.loads((tmp_path / "a" / "report.json").read_text())
    rb = json.loads((tmp_path / "b" / "report.json").read_text())
    assert ra == rb
