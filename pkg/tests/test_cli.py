import csv
import json
import math
import subprocess
import sys

import pytest

from slekit.cli import EXIT_INVALID, EXIT_OK, EXIT_STAT, main
from slekit.sle_core import load_binary


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_two_samples(tmp_path, capsys):
    plan = json.dumps({"kappa": 2.0, "samples": 2, "master_seed": 7, "engine": {"horizon": 2.0}})
    code, out, _ = run(["simulate", plan, "--output-dir", tmp_path, "--workers", 1], capsys)
    assert code == EXIT_OK
    bins = sorted(p.name for p in tmp_path.glob("*.bin"))
    assert len(bins) == 2 and bins[0].startswith("trace_000000_")
    assert (tmp_path / "manifest.json").exists()
    tr = load_binary(tmp_path / bins[0])
    assert tr.kappa == 2.0 and str(tr.seed) in bins[0]


def test_simulate_rerun_identical(tmp_path, capsys):
    plan = json.dumps({"kappa": 3.0, "samples": 2, "master_seed": 1, "engine": {"horizon": 1.0}})
    for sub in ("a", "b"):
        assert run(["simulate", plan, "--output-dir", tmp_path / sub, "--csv"], capsys)[0] == EXIT_OK
    for p in (tmp_path / "a").iterdir():
        assert (tmp_path / "b" / p.name).read_bytes() == p.read_bytes()
    csvs = list((tmp_path / "a").glob("*.csv"))
    assert len(csvs) == 2
    assert csvs[0].read_text().splitlines()[0] == "t,re,im"


def test_flags_override_plan(tmp_path, capsys):
    plan = json.dumps({"kappa": 9.0, "samples": 5, "engine": {"horizon": 1.0}})
    code, _, _ = run(["simulate", plan, "--kappa", 2, "--samples", 1, "--output-dir", tmp_path], capsys)
    assert code == EXIT_OK
    assert len(list(tmp_path.glob("*.bin"))) == 1


def test_invalid_kappa(tmp_path, capsys):
    code, _, err = run(["simulate", json.dumps({"kappa": 9}), "--output-dir", tmp_path], capsys)
    assert code == EXIT_INVALID
    assert "(0, 8)" in err


def test_malformed_json(tmp_path, capsys):
    code, _, _ = run(["simulate", "{not json", "--output-dir", tmp_path], capsys)
    assert code == EXIT_INVALID


def test_env_output_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SLEKIT_OUTPUT_DIR", str(tmp_path / "env"))
    plan = json.dumps({"kappa": 2.0, "samples": 1, "engine": {"horizon": 0.5}})
    assert run(["simulate", plan], capsys)[0] == EXIT_OK
    assert len(list((tmp_path / "env").glob("*.bin"))) == 1


def test_kernel_command(capsys):
    q = json.dumps({"kappa": 4, "mode": "radial", "points": [{"z": [0.5, 0], "r": 0.1}]})
    code, out, _ = run(["kernel", q], capsys)
    assert code == EXIT_OK
    res = json.loads(out)
    assert res["kernel"] == pytest.approx(0.447214, abs=1e-6)
    assert run(["kernel", json.dumps({"kappa": 4, "points": [{"z": [1.5, 0], "r": 0.1}]})], capsys)[0] == EXIT_INVALID


def test_verify_synthetic_exact_passes(tmp_path, capsys):
    radii = [0.16, 0.08, 0.04, 0.02]
    k = [r ** 0.75 for r in radii]
    plan = {"kappa": 2.0, "synthetic": {"radius_sets": [[r] for r in radii], "p_hat": k, "kernel": k}}
    code, out, _ = run(["verify-bounds", json.dumps(plan), "--output-dir", tmp_path], capsys)
    assert code == EXIT_OK
    rep = json.loads((tmp_path / "verify_bounds.json").read_text())
    assert rep["c_hat"] == pytest.approx(1.0) and rep["verdict"] == "PASS"
    rows = list(csv.reader(open(tmp_path / "verify_bounds.csv")))
    assert rows[0] == ["r", "p_hat", "lo", "hi", "kernel", "ratio", "C_hat"]


def test_verify_synthetic_growth_fails(tmp_path, capsys):
    radii = [0.16, 0.08, 0.04, 0.02]
    k = [r ** 0.75 for r in radii]
    p = [kk * (0.16 / r) ** 2 for kk, r in zip(k, radii)]
    plan = {"kappa": 2.0, "synthetic": {"radius_sets": [[r] for r in radii], "p_hat": p, "kernel": k}}
    code, out, _ = run(["verify-bounds", json.dumps(plan), "--output-dir", tmp_path], capsys)
    assert code == EXIT_STAT
    assert "FAIL" in out


def test_verify_small_campaign(tmp_path, capsys):
    plan = {"kappa": 2.0, "samples": 40, "master_seed": 3, "engine": {"dt": 0.02},
            "queries": {"points": [[0.4, 0.2]], "radius_sets": [[0.4], [0.2], [0.1]]}}
    code, out, _ = run(["verify-bounds", json.dumps(plan), "--output-dir", tmp_path, "--workers", 1], capsys)
    assert code in (EXIT_OK, EXIT_STAT)
    rep = json.loads((tmp_path / "verify_bounds.json").read_text())
    assert "slope" in rep and "c_hat" in rep
    assert (tmp_path / "campaign" / "aggregate.json").exists()


def test_minkowski_deterministic_segment(tmp_path, capsys):
    plan = {"kappa": 2.0, "deterministic": True, "d": 1.0,
            "queries": {"minkowski": {"r_list": [0.04, 0.02, 0.01]}}}
    code, _, _ = run(["minkowski", json.dumps(plan), "--output-dir", tmp_path], capsys)
    assert code == EXIT_OK
    rows = list(csv.DictReader(open(tmp_path / "minkowski_moments.csv")))
    assert list(rows[0]) == ["n", "r", "moment", "lo", "hi"]
    for row in rows:
        r = float(row["r"])
        assert float(row["moment"]) == pytest.approx(2 + math.pi * r, rel=0.02)


def test_minkowski_saturated(tmp_path, capsys):
    plan = {"kappa": 2.0, "samples": 2, "master_seed": 0, "engine": {"horizon": 2.0},
            "queries": {"minkowski": {"r_list": [2.5], "n_max": 1, "grid_factor": 400,
                                      "region": {"type": "disc", "center": [0, 0], "radius": 1}}}}
    code, _, _ = run(["minkowski", json.dumps(plan), "--output-dir", tmp_path, "--workers", 1], capsys)
    assert code == EXIT_OK
    rows = list(csv.DictReader(open(tmp_path / "minkowski_moments.csv")))
    assert float(rows[0]["moment"]) == pytest.approx(2.5 ** (1.25 - 2) * math.pi, rel=5e-3)


def test_module_entry_point(tmp_path):
    q = json.dumps({"kappa": 2, "mode": "whole-plane", "points": [{"z": [2, 0], "r": 0.5}]})
    out = subprocess.run([sys.executable, "-m", "slekit", "kernel", q], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["kernel"] == pytest.approx(0.353553, abs=1e-6)
