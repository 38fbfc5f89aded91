import csv
import io
import json
import subprocess
import sys

import pytest

from fuglede_lp import ProjSet, projective_triangle
from fuglede_lp.cli import main


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return path


@pytest.fixture
def line3(tmp_path):
    return write(tmp_path, "line.json", {"p": 3, "elements": [[0, 0, 0], [0, 0, 1], [0, 0, 2]]})


def test_analyze_line(line3, capsys):
    code, out, _ = run(["analyze", line3], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["spectral"]["status"] == "yes" and rep["tile"]["status"] == "yes"
    assert rep["size"] == 3 and rep["k"] == 1
    assert len(rep["level_counts"]) == 13
    assert rep["config"]["command"] == "analyze" and rep["config"]["max_nodes"] == 2_000_000


def test_analyze_six_point_set(tmp_path, capsys):
    six = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [1, 1, 2]]
    path = write(tmp_path, "six.json", {"p": 3, "elements": six})
    code, out, _ = run(["analyze", path], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["charspec_ok"] and rep["zero_set_blocking"]


def test_analyze_empty(tmp_path, capsys):
    path = write(tmp_path, "empty.json", {"p": 3, "elements": []})
    code, out, _ = run(["analyze", path], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["size"] == 0 and rep["charspec"]["trivial"]


@pytest.mark.parametrize("content", ['{"p": 3, "elements": [[0,0', '{"p": 4, "elements": []}', '[1, 2]'])
def test_bad_input_exit_2(tmp_path, capsys, content):
    path = write(tmp_path, "bad.json", content)
    code, _, err = run(["analyze", path], capsys)
    assert code == 2 and "error" in err


def test_missing_file_exit_2(tmp_path, capsys):
    code, _, _ = run(["search", tmp_path / "nope.json"], capsys)
    assert code == 2


def test_budget_misuse_exit_4(line3, capsys, monkeypatch):
    assert run(["search", line3, "--max-nodes", 0], capsys)[0] == 4
    assert run(["analyze", line3, "--time-limit", -1], capsys)[0] == 4
    monkeypatch.setenv("FUGLEDE_LP_MAX_NODES", "many")
    assert run(["search", line3], capsys)[0] == 4


def test_env_budget_override(tmp_path, capsys, monkeypatch):
    H = {"p": 5, "elements": [[a, b, 0] for a in range(5) for b in range(5)]}
    path = write(tmp_path, "plane.json", H)
    monkeypatch.setenv("FUGLEDE_LP_MAX_NODES", "2")
    code, out, _ = run(["search", path, "--what", "spectrum"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["spectral"]["status"] == "inconclusive"
    assert rep["config"]["max_nodes"] == 2
    code, out, _ = run(["search", path, "--what", "spectrum", "--max-nodes", 10 ** 6], capsys)
    assert json.loads(out)["spectral"]["status"] == "yes"


def test_blocking_and_witness_chain(tmp_path, capsys):
    out_path = tmp_path / "tri.json"
    code, _, _ = run(["blocking", "--triangle", "--p", 3, "-o", out_path], capsys)
    rep = json.loads(out_path.read_text())
    assert code == 0 and rep["blocking"] and rep["minimal"] and rep["size"] == 6
    code, out, _ = run(["witness", "--blocking", out_path], capsys)
    assert code == 0
    assert json.loads(out)["report"] == {"valid": True, "h_at_O": "3", "ht_at_O": "15",
                                        "bound": "27/5", "excluded_k": [2]}


def test_blocking_minimalize(tmp_path, capsys):
    path = write(tmp_path, "c.json", projective_triangle(3).complement().to_json())
    code, out, _ = run(["blocking", "--input", path, "--minimalize"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["size"] == 7 and rep["minimalized"]["size"] == 6
    code, _, _ = run(["blocking", "--input", write(tmp_path, "one.json", {"p": 3, "points": [[1, 0, 0]]}),
                      "--minimalize"], capsys)
    assert code == 2


def test_blocking_random_is_seeded(capsys):
    a = run(["blocking", "--random", "--p", 7, "--seed", 4], capsys)[1]
    b = run(["blocking", "--random", "--p", 7, "--seed", 4], capsys)[1]
    assert a == b and json.loads(a)["minimal"]


def test_witness_function_mode(tmp_path, capsys):
    from fuglede_lp import section5_witness
    S = projective_triangle(5)
    f = write(tmp_path, "h.json", section5_witness(S).to_json())
    e = write(tmp_path, "e.json", S.to_json())
    code, out, _ = run(["witness", "--function", f, "--allowed", e], capsys)
    assert code == 0 and json.loads(out)["report"]["excluded_k"] == [3, 4]


def test_lp_round_trip_and_verify(tmp_path, capsys):
    Z = write(tmp_path, "z.json", projective_triangle(3).complement().to_json())
    sol = tmp_path / "sol.json"
    code, _, _ = run(["lp", "--forbidden", Z, "-o", sol], capsys)
    rep = json.loads(sol.read_text())
    assert code == 0 and rep["solution"]["certified"]
    from fractions import Fraction
    assert Fraction(rep["solution"]["bound"]) <= Fraction(27, 5)
    code, out, _ = run(["lp", "--forbidden", Z, "--verify", sol], capsys)
    assert code == 0 and json.loads(out)["certified"]
    vals = rep["solution"]["witness"]["values"]
    vals[3][1] = str(Fraction(vals[3][1]) + Fraction(1, 1000))
    bad = write(tmp_path, "bad.json", rep)
    code, out, _ = run(["lp", "--forbidden", Z, "--verify", bad], capsys)
    assert code == 3 and not json.loads(out)["certified"]


def test_lp_empty_and_spec_and_from_set(tmp_path, capsys, line3):
    Z = write(tmp_path, "z.json", {"p": 3, "points": [], "contains_O": False})
    code, out, _ = run(["lp", "--forbidden", Z], capsys)
    assert code == 0 and json.loads(out)["solution"]["bound"] == "1"
    spec = write(tmp_path, "spec.json", {"p": 3, "forbidden_Z": ProjSet.full(3).to_json(),
                                         "allow_negative_on_Z": False})
    code, out, _ = run(["lp", "--spec", spec], capsys)
    assert code == 0 and json.loads(out)["solution"]["bound"] == "27"
    code, out, _ = run(["lp", "--from-set", line3], capsys)
    assert code == 0 and json.loads(out)["solution"]["certified"]


def test_thresholds_table(tmp_path, capsys):
    path = tmp_path / "t.csv"
    code, _, _ = run(["thresholds", "--primes", 3, 5, 7, "-o", path], capsys)
    assert code == 0
    rows = {int(r["p"]): r for r in csv.DictReader(io.StringIO(path.read_text()))}
    assert rows[3]["t1_excluded_k"] == "2"
    assert rows[5]["t1_excluded_k"] == "4"
    assert rows[5]["blocking_size"] == "9" and rows[5]["section5_excluded_k"] == "3 4"
    assert rows[7]["t3_lower"] == "119/5" and rows[7]["t3_excluded_k"] == "4 5 6"
    assert all(r["lp_certified"] == "True" for r in rows.values())
    again = tmp_path / "t2.csv"
    run(["thresholds", "--primes", 3, 5, 7, "-o", again], capsys)
    assert again.read_text() == path.read_text()


def test_thresholds_rejects_non_prime(capsys):
    assert run(["thresholds", "--primes", 4], capsys)[0] == 2


def test_fuglede_check(tmp_path, capsys):
    summary = tmp_path / "s.json"
    code, out, _ = run(["fuglede-check", "--p", 2, "--summary", summary], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "set-id,size,spectral,tile" and len(lines) == 257
    s = json.loads(summary.read_text())
    assert s["discrepancies"] == 0 and s["sets"] == 256 and s["config"]["p"] == 2
    assert run(["fuglede-check", "--p", 5], capsys)[0] == 2


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_console_entry_point(line3):
    res = subprocess.run([sys.executable, "-m", "fuglede_lp.cli", "search", str(line3), "--what", "tile"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["tile"]["status"] == "yes"
