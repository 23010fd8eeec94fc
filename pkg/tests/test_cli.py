import json
import subprocess
import sys

import pytest

from oddstop.cli import main


@pytest.fixture
def sec3(tmp_path):
    path = tmp_path / "secretary3.json"
    assert main(["gen", "--secretary", "--n", "3", "--output", str(path)]) == 0
    return path


def run(args, capsys):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_secretary(sec3):
    doc = json.loads(sec3.read_text())
    assert doc["n"] == 3
    assert doc["p"] == [1.0, 0.5, 1 / 3]
    assert doc["rewards"] == [1 / 3, 2 / 3, 1.0]


def test_gen_variant(capsys):
    code, out, _ = run(["gen", "--variant", "last-success", "--p-list", "0.5,0.5,0.5"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["rewards"] == [0.25, 0.5, 1.0]
    assert "variant" not in doc and doc["source"]["variant"] == {"kind": "last-success"}


def test_gen_errors(capsys):
    code, _, err = run(["gen", "--variant", "k-of-last-l", "--k", "2", "--l", "1", "--p-list", "0.5,0.5,0.5"], capsys)
    assert code == 1 and json.loads(err)["error"]["code"] == "variant"
    code, _, _ = run(["gen", "--variant", "last-success", "--n", "3"], capsys)
    assert code == 1


def test_gen_seeded(capsys):
    a = run(["gen", "--variant", "mth-last", "--m", "2", "--n", "6", "--seed", "5"], capsys)
    b = run(["gen", "--variant", "mth-last", "--m", "2", "--n", "6", "--seed", "5"], capsys)
    assert a == b and a[0] == 0


def test_solve_all(sec3, capsys):
    code, out, _ = run(["solve", "--input", sec3, "--method", "all"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["agreement"] is True
    assert doc["checks"]["compared"] == ["dp", "simplex", "odds-theorem"]
    for m in ("dp", "simplex", "odds-theorem"):
        assert abs(doc["results"][m]["value"] - 0.5) <= 1e-9
    assert doc["policy"] == {"stop": [False, True, True], "pi": [1.0, 0.0, 0.0]}


def test_solve_single(tmp_path, capsys):
    path = tmp_path / "n1.json"
    path.write_text(json.dumps({"n": 1, "p": [0.5], "rewards": [1.0]}))
    code, out, _ = run(["solve", "--input", path, "--method", "dp"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["value"] == 0.5 and doc["method"] == "dp"
    assert set(doc) >= {"value", "policy", "method", "timing_ms"}


def test_solve_odds_warns_on_other_rewards(tmp_path, capsys):
    path = tmp_path / "u.json"
    path.write_text(json.dumps({"p": [0.5, 0.5], "rewards": [1.0, 1.0]}))
    code, out, err = run(["solve", "--input", path, "--method", "odds-theorem"], capsys)
    assert code == 0 and "warning" in err and "warning" in json.loads(out)
    code, out, _ = run(["solve", "--input", path, "--method", "all"], capsys)
    assert code == 0 and json.loads(out)["checks"]["compared"] == ["dp", "simplex"]


def test_solve_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    code, _, err = run(["solve", "--input", bad], capsys)
    assert code == 1 and json.loads(err)["error"]["code"] == "parse"
    bad.write_text(json.dumps({"p": [2.0], "rewards": [1.0]}))
    code, _, err = run(["solve", "--input", bad], capsys)
    assert code == 1 and json.loads(err)["error"]["code"] == "probability"
    code, _, err = run(["solve", "--input", tmp_path / "missing.json"], capsys)
    assert code == 1 and json.loads(err)["error"]["code"] == "io"


def test_verify(sec3, capsys):
    code, out, _ = run(["verify", "--input", sec3], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    assert "odds_theorem_vs_dp" in {c["name"] for c in doc["checks"]}


def test_verify_random(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert main(["gen", "--variant", "any-of-last-m", "--m", "3", "--n", "25", "--seed", "9", "--output", str(path)]) == 0
    code, out, _ = run(["verify", "--input", path], capsys)
    assert code == 0 and json.loads(out)["ok"]


def test_verify_check_files(sec3, tmp_path, capsys):
    sol = tmp_path / "sol.json"
    assert main(["solve", "--input", str(sec3), "--method", "simplex", "--output", str(sol)]) == 0
    code, out, _ = run(["verify", "--input", sec3, "--check-files", sol], capsys)
    assert code == 0
    doc = json.loads(sol.read_text())
    doc["value"] = 0.6
    doc["flow"]["y"][0] = 0.2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(["verify", "--input", sec3, "--check-files", bad], capsys)
    rep = json.loads(out)
    assert code == 2 and not rep["ok"]
    failed = {c["name"] for c in rep["checks"] if not c["ok"]}
    assert {"file_value_vs_dp", "file_flow_feasibility"} <= failed


def test_simulate(sec3, capsys):
    args = ["simulate", "--input", sec3, "--seed", "42", "--trials", "1000000", "--compare-exact"]
    code, out1, _ = run(args, capsys)
    code2, out2, _ = run(args, capsys)
    assert code == code2 == 0 and out1 == out2
    doc = json.loads(out1)
    assert abs(doc["z_score"]) <= 4 and doc["exact"] == 0.5
    assert doc["seed"] == 42 and doc["workers"] == 1


def test_simulate_policy_file(sec3, tmp_path, capsys):
    pol = tmp_path / "pol.json"
    pol.write_text(json.dumps({"pi": [1, 1, 1]}))
    code, out, _ = run(["simulate", "--input", sec3, "--policy", pol, "--trials", "1000"], capsys)
    assert code == 0 and json.loads(out)["estimate"] == 0.0
    pol.write_text(json.dumps({"pi": [1, 1]}))
    code, _, _ = run(["simulate", "--input", sec3, "--policy", pol], capsys)
    assert code == 1
    code, _, _ = run(["simulate", "--input", sec3, "--trials", "0"], capsys)
    assert code == 1


def test_export_lp(tmp_path, capsys):
    n1 = tmp_path / "n1.json"
    n1.write_text(json.dumps({"n": 1, "p": [0.5], "rewards": [1.0]}))
    code, out, _ = run(["export-lp", "--input", n1, "--formulation", "ff", "--format", "lp-text"], capsys)
    assert code == 0
    for name in ("Cap_1", "Cons_1", "Source"):
        assert f" {name}:" in out
    code, _, err = run(["export-lp", "--input", n1, "--formulation", "secretary-reduced"], capsys)
    assert code == 1 and json.loads(err)["error"]["code"] == "formulation"


def test_export_lp_bit_exact(sec3, tmp_path, capsys):
    outs = []
    for k in range(2):
        path = tmp_path / f"o{k}.mps"
        assert main(["export-lp", "--input", str(sec3), "--formulation", "dual-p", "--format", "mps", "--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    code, out, _ = run(["export-lp", "--input", sec3, "--formulation", "secretary-reduced", "--format", "mps"], capsys)
    assert code == 0 and "OBJSENSE" in out


def test_usage_error(capsys):
    assert main(["solve"]) == 1
    assert main(["frobnicate"]) == 1


def test_module_entry(sec3):
    res = subprocess.run([sys.executable, "-m", "oddstop", "solve", "--input", str(sec3)], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["value"] == 0.5
