import json
import math

import numpy as np
import pytest

from oel.cli import main
from oel.linalg import dump_matrix


@pytest.fixture()
def matrices(tmp_path):
    a = tmp_path / "A.json"
    b = tmp_path / "B.json"
    dump_matrix(np.eye(2), a)
    dump_matrix(np.diag([2.0, 3.0]), b)
    return str(a), str(b)


def test_compute_relative_entropy(matrices, capsys):
    a, b = matrices
    assert main(["compute", "S", "--A", a, "--B", b]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["n"] == 2
    assert out["data"][0][0] == pytest.approx(math.log(2.0), rel=1e-12)
    assert out["data"][1][1] == pytest.approx(math.log(3.0), rel=1e-12)


def test_compute_tsallis_identity(matrices, capsys):
    a, b = matrices
    assert main(["compute", "T", "--A", a, "--B", b, "--t", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["data"][0][0] == pytest.approx(1.0)
    assert out["data"][1][1] == pytest.approx(2.0)


def test_compute_requires_t(matrices, capsys):
    a, b = matrices
    assert main(["compute", "T", "--A", a, "--B", b]) == 2
    assert "error" in capsys.readouterr().err


def test_compute_malformed_matrix(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope")
    ok = tmp_path / "ok.json"
    dump_matrix(np.eye(2), ok)
    assert main(["compute", "S", "--A", str(bad), "--B", str(ok)]) == 2


def test_verify_pass_fail_error_na(matrices, capsys):
    # pass
    assert main(["verify", "cor-3.8", "--a", "4", "--b", "1", "--t", "0.25"]) == 0
    verdict = json.loads(capsys.readouterr().out)
    assert verdict["pass"] is True and verdict["witness"]["refinement_regime"] is True
    # fail: negative tolerance demands strictly positive slack everywhere
    assert main(["verify", "cor-3.8", "--a", "4", "--b", "4", "--t", "0.25", "--tol", "-1"]) == 1
    capsys.readouterr()
    # usage error: unknown chain
    assert main(["verify", "nope-1.1"]) == 2
    # not applicable: operator hypothesis violated
    a, b = matrices
    bad_b = b  # relative spectrum (2, 3)... need one below 1 for thm-3.5
    assert main(["verify", "thm-3.5", "--A", a, "--B", a, "--s", "0.5", "--t", "1.0"]) == 0
    capsys.readouterr()


def test_verify_not_applicable_exit_code(tmp_path, capsys):
    a = tmp_path / "A.json"
    b = tmp_path / "B.json"
    dump_matrix(np.eye(2), a)
    dump_matrix(np.diag([0.5, 2.0]), b)
    assert main(["verify", "thm-3.5", "--A", str(a), "--B", str(b), "--s", "0.5", "--t", "1"]) == 3
    verdict = json.loads(capsys.readouterr().out)
    assert verdict["status"] == "not-applicable"


def test_verify_operator_fixture(tmp_path, capsys):
    a = tmp_path / "A.json"
    b = tmp_path / "B.json"
    dump_matrix(np.eye(2), a)
    dump_matrix(math.exp(-2.0) * np.eye(2), b)
    assert main(["verify", "thm-3.6", "--A", str(a), "--B", str(b)]) == 0
    verdict = json.loads(capsys.readouterr().out)
    assert verdict["regime"]["case"] == "below-1-over-e"
    assert verdict["links"][1]["data"][0][0] == pytest.approx(-2.0, abs=1e-10)


def test_verify_missing_required_flag(capsys):
    assert main(["verify", "prop-2.1", "--a", "1", "--b", "4"]) == 2
    assert "missing required" in capsys.readouterr().err


def test_verify_scalar_examples(capsys):
    assert main(["verify", "prop-2.1", "--a", "1", "--b", "4", "--v", "0.5", "--n", "1"]) == 0
    capsys.readouterr()
    assert main(["verify", "thm-2.6-convex", "--fn", "inv-pow-1", "--s", "1", "--t", "2"]) == 0
    capsys.readouterr()
    assert main(["verify", "cor-2.4", "--w", "0.5,0.5", "--x", "1,4", "--t", "1"]) == 0
    capsys.readouterr()
    assert main(["verify", "lem-3.4", "--x", "2", "--s", "0.5", "--t", "1"]) == 0
    capsys.readouterr()
    assert main(["verify", "thm-2.12", "--A", "", "--B", ""]) == 2
    capsys.readouterr()


def test_verify_two_function_defaults(tmp_path, capsys):
    a = tmp_path / "A.json"
    dump_matrix(np.diag([1.6, 3.5]), a)
    assert main(["verify", "thm-2.12", "--A", str(a), "--B", str(a), "--mode", "expectation"]) == 0
    capsys.readouterr()


def test_fuzz_exit_codes_and_determinism(tmp_path, capsys):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    args = ["fuzz", "prop-2.1", "--trials", "50", "--seed", "42"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert doc["seed"] == 42 and doc["chains"][0]["trials"] == 50
    assert (tmp_path / "r1.csv").exists()


def test_fuzz_stdout_and_failure_exit(capsys):
    assert main(["fuzz", "cor-3.8", "--trials", "5", "--seed", "1", "--tol", "-1"]) == 1
    captured = capsys.readouterr()
    doc = json.loads(captured.out)
    assert doc["chains"][0]["failures"]
    assert main(["fuzz", "unknown-chain", "--trials", "1"]) == 2


def test_list_chains_and_functions(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for cid in ("prop-2.1", "thm-2.6-convex", "cor-3.8", "zou", "thm-3.6", "thm-2.12"):
        assert cid in out
    assert main(["list", "--functions"]) == 0
    out = capsys.readouterr().out
    assert "inv-sin" in out and "log_convex" in out


def test_pretty_output(matrices, capsys):
    a, b = matrices
    assert main(["compute", "S", "--A", a, "--B", b, "--pretty"]) == 0
    out = capsys.readouterr().out
    assert "0.693147" in out
    assert main(["verify", "cor-3.8", "--a", "4", "--b", "1", "--t", "0.25", "--pretty"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "min relative slack" in out
    assert main(["verify", "zou", "--A", a, "--B", b, "--t", "0.5", "--pretty"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert main(["fuzz", "prop-2.1", "--trials", "5", "--pretty"]) == 0
    err = capsys.readouterr().err
    assert "failures=0" in err


def test_env_var_tolerance(monkeypatch, capsys):
    monkeypatch.setenv("OEL_DEFAULT_TOL", "-1")
    # with the env-forced negative tolerance an equality chain now fails
    assert main(["verify", "cor-3.8", "--a", "2", "--b", "2", "--t", "0.5"]) == 1
    capsys.readouterr()
    monkeypatch.setenv("OEL_DEFAULT_TOL", "not-a-float")
    assert main(["verify", "cor-3.8", "--a", "2", "--b", "2", "--t", "0.5"]) == 2
