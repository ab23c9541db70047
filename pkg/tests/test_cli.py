import io
import json
import os
import subprocess
import sys

import pytest

from erdos278.cli import TIMING_KEYS, run_cli


def run(argv, env=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(argv):
    code, out, err = run(argv + ["--json"])
    assert code == 0, err
    return json.loads(out)


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


@pytest.fixture
def system_file(tmp_path):
    path = tmp_path / "sys.json"
    path.write_text(json.dumps({"congruences": [{"a": 0, "n": 2}, {"a": 1, "n": 3}]}))
    return str(path)


def test_density(system_file):
    rep = run_json(["density", system_file])
    assert rep["command"] == "density"
    assert rep["results"]["density"] == "1/3"
    assert rep["results"]["period"] == "6"
    assert len(rep["input_digest"]) == 64


def test_text_output(system_file):
    code, out, _ = run(["density", system_file])
    assert code == 0
    assert "results.density: 1/3" in out.splitlines()


def test_optimize_and_worst():
    rep = run_json(["optimize", "3", "6", "15"])
    assert rep["results"]["density"] == "13/30"
    assert rep["results"]["residues"] == [0, 1, 2]
    assert run_json(["worst", "3", "6", "15"])["results"]["density"] == "2/3"


def test_family_cross_check():
    rep = run_json(["family", "--q", "3", "--standalone", "--primes", "2", "5", "7", "--cross-check"])
    res = rep["results"]
    assert res["cross_check"]["agree"]
    assert res["moduli"] == [3, 6, 15, 21]
    assert res["density"] == res["cross_check"]["exhaustive_density"]


def test_family_from_moduli_and_file(tmp_path):
    a = run_json(["family", "--q", "3", "--moduli", "3", "6", "15"])["results"]
    path = tmp_path / "fam.json"
    path.write_text(json.dumps({"q": 3, "standalone": True, "primes": [2, 5]}))
    b = run_json(["family", "--file", str(path)])["results"]
    assert a["density"] == b["density"] == "13/30"


def test_family_structure_error():
    code, _, err = run(["family", "--q", "3", "--moduli", "6", "10"])
    assert code == 1 and "error:" in err


def test_partition_with_bruteforce():
    res = run_json(["partition", "--primes", "2", "3", "5", "7", "--parts", "2", "--bruteforce"])["results"]
    assert res["bruteforce_agrees"]
    assert res["value"] == res["bruteforce_value"]


def test_log_form():
    res = run_json(["log-form", "--primes", "2", "3", "5", "--bits", "32"])["results"]
    assert res["precision_bits"] == 32
    assert len(res["weights"]) == 3


def test_generate_verify_solve(tmp_path):
    path = str(tmp_path / "inst.json")
    gen = run_json(["generate-hard", "--primes", "101", "103", "107", "109", "-o", path])["results"]
    assert gen["report"]["a_ok"] and gen["ratio_below_three"] and gen["weights_times_x_at_least_4n"]
    ver = run_json(["verify", path])["results"]
    assert ver["all_ok"]
    sol = run_json(["solve", path])["results"]
    assert int(sol["best_value"]) < int(sol["capacity"])  # (d) holds, so half is unreachable
    assert sol["nodes_expanded"] > 0


def test_generate_with_x_warns():
    res = run_json(["generate-hard", "--primes", "101", "103", "107", "109", "--x", "100000"])["results"]
    assert res["x_supplied"] and "warning" in res


def test_verify_failing_instance(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"a": [1, 2, 4]}))
    code, out, _ = run(["verify", str(path), "--json"])
    assert code == 0
    res = json.loads(out)["results"]
    assert not res["d_ok"] and not res["all_ok"]


def test_solve_explicit_capacity(tmp_path):
    path = tmp_path / "k.json"
    path.write_text(json.dumps({"a": ["2", "3", "7"]}))
    res = run_json(["solve", str(path), "--capacity", "6"])["results"]
    assert res["best_value"] == "5" and res["chosen"] == [0, 1]
    code, _, _ = run(["solve", str(path), "--capacity", "lots"])
    assert code == 1


def test_exit_codes(tmp_path, system_file):
    assert run(["optimize", "3", "6", "15", "--enum-cap", "10"])[0] == 2
    assert run(["density", system_file, "--sieve-cap", "5"])[0] == 2
    assert run(["generate-hard", "--primes", "101", "103", "--x", str(2**400),
                "--precision-cap", "64"])[0] == 2
    assert run(["generate-hard", "--primes", "2", "101"])[0] == 1
    assert run(["density", str(tmp_path / "missing.json")])[0] == 1
    assert run(["optimize", "0"])[0] == 1
    assert run(["nonsense"])[0] == 1
    assert run(["--version"])[0] == 0


def test_node_budget_exit(tmp_path):
    path = str(tmp_path / "inst.json")
    run_json(["generate-hard", "--primes", "101", "103", "107", "109", "113", "127", "-o", path])
    code, _, err = run(["solve", path, "--node-budget", "5"])
    assert code == 2 and "node_budget" in err


def test_env_caps_and_flag_precedence(monkeypatch):
    monkeypatch.setenv("ERDOS278_ENUM_CAP", "10")
    assert run(["optimize", "3", "6", "15"])[0] == 2
    code, out, _ = run(["optimize", "3", "6", "15", "--enum-cap", "1000", "--json"])
    assert code == 0 and json.loads(out)["caps"]["enum_cap"] == 1000
    monkeypatch.setenv("ERDOS278_ENUM_CAP", "ten")
    assert run(["optimize", "3", "6", "15"])[0] == 1


def test_bench_deterministic():
    argv = ["bench", "--sizes", "6", "8", "--control", "--json"]
    a, b = run_json(argv[:-1]), run_json(argv[:-1])
    assert strip_timing(a) == strip_timing(b)
    kinds = [r["kind"] for r in a["results"]["runs"]]
    assert kinds == ["hard", "control", "hard", "control"]


def test_reports_byte_identical(system_file):
    for argv in (["density", system_file], ["optimize", "4", "6", "9"],
                 ["partition", "--primes", "2", "3", "5", "7", "11", "--parts", "3"]):
        assert run(argv + ["--json"])[1] == run(argv + ["--json"])[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "erdos278", "worst", "2", "3", "--json"],
                          capture_output=True, text=True, env=dict(os.environ))
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["density"] == "1/3"
