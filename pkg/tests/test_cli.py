import json
import math
import subprocess
import sys

import pytest

from opspace import osnorm
from opspace.cli import main
from opspace.seqspace import first_row_matrix, matrixseq_to_json


def run_cli(args, input_text=None):
    proc = subprocess.run(
        [sys.executable, "-m", "opspace.cli", *args],
        capture_output=True,
        text=True,
        input=input_text,
    )
    return proc.returncode, proc.stdout, proc.stderr


def test_witness_sign_matrix():
    code, out, _ = run_cli(["witness", "an", "--n", "2"])
    assert code == 0
    data = json.loads(out)
    assert data["re"] == [[1.0, 1.0], [1.0, -1.0]]
    assert data["im"] == [[0.0, 0.0], [0.0, 0.0]]


def test_witness_flat_vector():
    code, out, _ = run_cli(["witness", "un", "--n", "3"])
    assert code == 0
    data = json.loads(out)
    assert [c["k"] for c in data["coords"]] == [1, 2, 3]


def test_norm_round_trip_matches_library(tmp_path):
    code, out, _ = run_cli(["witness", "xn", "--n", "3"])
    assert code == 0
    path = tmp_path / "x3.json"
    path.write_text(out)
    code, out, _ = run_cli(["norm", "--structure", "row", "--input", str(path)])
    assert code == 0
    est = json.loads(out)
    want = osnorm.eval_exact(osnorm.ROW, first_row_matrix(3))
    assert est["lower"] == pytest.approx(want, abs=1e-12)
    assert est["upper"] == pytest.approx(want, abs=1e-12)


def test_norm_oh_value(tmp_path):
    path = tmp_path / "x4.json"
    path.write_text(matrixseq_to_json(first_row_matrix(4)))
    code, out, _ = run_cli(["norm", "--structure", "oh", "--input", str(path)])
    assert code == 0
    est = json.loads(out)
    assert est["lower"] == pytest.approx(math.sqrt(2), rel=1e-9)


def test_norm_stdin_and_interp(tmp_path):
    text = matrixseq_to_json(first_row_matrix(2))
    code, out, _ = run_cli(
        ["norm", "--structure", "interp:(min:p=2,max:p=2,theta=0.5)", "--input", "-"],
        input_text=text,
    )
    assert code == 0
    est = json.loads(out)
    assert est["upper"] == pytest.approx(2**0.25, rel=1e-6)


def test_malformed_json_exits_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run_cli(["norm", "--structure", "row", "--input", str(path)])
    assert code == 2
    assert "error" in err.lower()


def test_unknown_flag_exits_2():
    code, _, _ = run_cli(["norm", "--bogus", "x"])
    assert code == 2


def test_unknown_structure_exits_2(tmp_path):
    path = tmp_path / "x.json"
    path.write_text(matrixseq_to_json(first_row_matrix(2)))
    code, _, _ = run_cli(["norm", "--structure", "diag", "--input", str(path)])
    assert code == 2


def test_experiment_writes_csv(tmp_path):
    out_path = tmp_path / "rows.csv"
    code, _, _ = run_cli(
        ["experiment", "lemma43", "--n-max", "3", "--out", str(out_path)]
    )
    assert code == 0
    lines = out_path.read_text().strip().split("\n")
    assert lines[0] == "experiment,n,p,theta,structure,lower,upper,closed_form,rel_gap,method"
    assert len(lines) > 1


def test_experiment_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _, _ = run_cli(["experiment", "lemma42", "--n-max", "2", "--seed", "3", "--out", str(path)])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_budget_file_and_env(tmp_path, monkeypatch):
    budget = tmp_path / "budget.json"
    budget.write_text(json.dumps({"starts": 4, "max_iter": 50, "tol": 1e-8, "seed": 1}))
    path = tmp_path / "x.json"
    path.write_text(matrixseq_to_json(first_row_matrix(2)))
    # via flag, in-process
    assert main(["norm", "--structure", "min:p=2", "--input", str(path), "--budget", str(budget)]) == 0
    # via environment variable
    monkeypatch.setenv("OSNORM_BUDGET", str(budget))
    assert main(["norm", "--structure", "min:p=2", "--input", str(path)]) == 0
    monkeypatch.delenv("OSNORM_BUDGET")


def test_bad_budget_exits_2(tmp_path):
    budget = tmp_path / "budget.json"
    budget.write_text(json.dumps({"bogus": 1}))
    path = tmp_path / "x.json"
    path.write_text(matrixseq_to_json(first_row_matrix(2)))
    assert main(["norm", "--structure", "min:p=2", "--input", str(path), "--budget", str(budget)]) == 2


def test_kp_map_roundtrip(tmp_path):
    seq = {"coords": [{"k": 1, "re": 1.0, "im": 0.0}, {"k": 2, "re": 1.0, "im": 0.0}]}
    path = tmp_path / "v.json"
    path.write_text(json.dumps(seq))
    code, out, _ = run_cli(["kp", "--op", "map", "--p", "2", "--input", str(path)])
    assert code == 0
    data = json.loads(out)
    want = -math.log(2) / 2
    assert data["coords"][0]["re"] == pytest.approx(want)


def test_kp_quasinorm(tmp_path):
    payload = {
        "x": {"coords": []},
        "y": {"coords": [{"k": k, "re": 1.0, "im": 0.0} for k in range(1, 5)]},
    }
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(payload))
    code, out, _ = run_cli(["kp", "--op", "quasinorm", "--p", "2", "--input", str(path)])
    assert code == 0
    assert json.loads(out)["quasinorm"] == pytest.approx(2 * math.log(2) + 2)


def test_kp_probe():
    code, out, _ = run_cli(["kp", "--op", "probe", "--p", "2", "--samples", "5", "--seed", "0"])
    assert code == 0
    data = json.loads(out)
    assert data["samples"] == 5
    assert data["max_ratio"] > 0


def test_verify_kp_suite_passes():
    code, out, _ = run_cli(["verify", "--suite", "kp"])
    assert code == 0
    assert "[PASS]" in out


def test_verify_unknown_suite_exits_2():
    code, _, _ = run_cli(["verify", "--suite", "nonsense"])
    assert code == 2
