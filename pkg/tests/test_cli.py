"""Command-line harness: suites, generation, searches, determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from matphi.cli import main
from matphi.formats import (
    boolean_function_from_obj,
    ensemble_from_obj,
    kernel_from_obj,
    load_json,
    matrix_from_obj,
    product_model_from_obj,
)
from matphi.suites import SUITES, RunConfig, run_suite, validate_suite_config
from matphi.errors import ConfigError


def _run(args):
    return main(args)


def test_suite_exit_zero_and_json(tmp_path):
    out = tmp_path / "report.json"
    code = _run(["fourier", "--seed", "3", "--trials", "3", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["pass"] is True
    names = [r["check"] for r in report["reports"]]
    assert names == sorted(names)
    assert set(names) == set(SUITES["fourier"])


def test_suite_csv_format(tmp_path):
    out = tmp_path / "report.csv"
    code = _run(["efron-stein", "--seed", "3", "--trials", "3", "--format", "csv", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "check,phi,d,n,trials,max_gap,pass,seed"
    assert len(lines) == 1 + len(SUITES["efron-stein"])
    assert all(line.split(",")[6] == "true" for line in lines[1:])


def test_unknown_suite_is_config_error():
    assert _run(["no-such-suite"]) == 2


def test_entropy_alias():
    config = RunConfig(trials=1)
    assert validate_suite_config(config, "entropy") == "characterizations"


def test_cube_rejected_outside_characterizations():
    config = RunConfig(trials=1, phi="cube")
    with pytest.raises(ConfigError):
        validate_suite_config(config, "sobolev")
    assert validate_suite_config(config, "characterizations") == "characterizations"


def test_cube_characterizations_fail_with_witnesses(tmp_path):
    out = tmp_path / "cube.json"
    code = _run([
        "characterizations", "--phi", "cube", "--d", "1", "--seed", "1",
        "--trials", "15", "--out", str(out),
    ])
    assert code == 1
    report = json.loads(out.read_text())
    failing = {r["check"] for r in report["reports"] if not r["pass"]}
    assert {"char-a", "char-d", "char-e"}.issubset(failing)
    by_name = {r["check"]: r for r in report["reports"]}
    for name in ("char-a", "char-d", "char-e"):
        assert by_name[name]["violations"]


def test_generate_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code = _run(["generate", "kernel", "--n", "2", "--seed", "7", "--out", str(path)])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    kernel, _ = kernel_from_obj(load_json(a))
    assert np.allclose(kernel.rows.sum(axis=1), 1.0, atol=1e-15)


def test_generate_psd_contract(tmp_path):
    out = tmp_path / "psd.json"
    assert _run(["generate", "psd", "--d", "3", "--seed", "9", "--out", str(out)]) == 0
    m = matrix_from_obj(load_json(out))
    assert np.linalg.eigvalsh(m)[0] >= 1e-3 - 1e-12


def test_generate_all_kinds(tmp_path):
    for kind, loader in [
        ("hermitian", matrix_from_obj),
        ("ensemble", ensemble_from_obj),
        ("boolean-function", boolean_function_from_obj),
        ("product-model", product_model_from_obj),
    ]:
        out = tmp_path / f"{kind}.json"
        code = _run(["generate", kind, "--d", "2", "--n", "2", "--seed", "5", "--out", str(out)])
        assert code == 0
        loader(load_json(out))


def test_search_lsi_counterexample(tmp_path, capsys):
    out = tmp_path / "witness.json"
    code = _run([
        "search", "lsi-counterexample", "--d", "2", "--n", "1", "--seed", "0",
        "--trials", "10", "--out", str(out),
    ])
    assert code == 0
    assert "found" in capsys.readouterr().out
    witness = json.loads(out.read_text())
    assert witness["found"] is True
    assert witness["objective"] > 1e-6


def test_search_lsi_scalar_not_found(tmp_path, capsys):
    code = _run([
        "search", "lsi-counterexample", "--d", "1", "--n", "1", "--seed", "0",
        "--trials", "30",
    ])
    assert code == 0
    assert "not found" in capsys.readouterr().out


def test_eta_identity_kernel(tmp_path, capsys):
    kernel_file = tmp_path / "kernel.json"
    kernel_file.write_text(json.dumps({"rows": [[1.0, 0.0], [0.0, 1.0]]}))
    code = _run(["eta", "--in", str(kernel_file), "--d", "2", "--trials", "3", "--seed", "1"])
    assert code == 0
    assert "eta_hat = 1.0" in capsys.readouterr().out


def test_eta_requires_input():
    assert _run(["eta"]) == 2


def test_run_suite_determinism_across_jobs():
    base = dict(seed=42, trials=3, samples=1500, d=2, n=3)
    serial = run_suite(RunConfig(jobs=1, **base), "all")
    parallel = run_suite(RunConfig(jobs=8, **base), "all")
    assert serial.passed and parallel.passed
    assert serial.comparable_dict() == parallel.comparable_dict()


def test_run_suite_repeat_identical():
    config = RunConfig(seed=11, trials=2, samples=1000)
    first = run_suite(config, "sobolev")
    second = run_suite(config, "sobolev")
    assert first.comparable_dict() == second.comparable_dict()


def test_cli_entry_point_module():
    proc = subprocess.run(
        [sys.executable, "-m", "matphi.cli", "fourier", "--seed", "2", "--trials", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["pass"] is True


def test_env_seed_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("MATPHI_SEED", "123")
    out = tmp_path / "r.json"
    assert _run(["fourier", "--trials", "2", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["config"]["seed"] == 123


def test_tol_override_plumbs_through():
    # an absurdly loose override lets the cube control pass char-d
    strict = run_suite(RunConfig(seed=1, trials=10, d=1, phi="cube"), "characterizations")
    loose = run_suite(
        RunConfig(seed=1, trials=10, d=1, phi="cube", tol=1e9), "characterizations"
    )
    strict_d = next(r for r in strict.reports if r.check == "char-e")
    loose_d = next(r for r in loose.reports if r.check == "char-e")
    assert not strict_d.passed
    assert loose_d.passed
