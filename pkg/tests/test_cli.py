import json
import subprocess
import sys

import pytest

from padlocks.cli import main

BOUNDS_6_11 = '{"k":6,"n":11,"lower":11,"upper":11,"lower_witnesses":["triangular"],"upper_witness":"direct"}\n'

TABLE_11 = """k,n,lower,upper,lower_witnesses,upper_witness
1,11,1,1,single_padlock,single
2,11,6,6,sperner,two
3,11,6,9,sperner;triangular,bose
4,11,10,11,triangular,direct
5,11,11,11,triangular,direct
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_golden(capsys):
    assert run(capsys, "bounds", "--k", "6", "--n", "11") == (0, BOUNDS_6_11, "")


def test_table_golden(capsys):
    code, out, _ = run(capsys, "table", "--n", "11", "--k-max", "5")
    assert code == 0 and out == TABLE_11


def test_table_by_k(capsys):
    code, out, _ = run(capsys, "table", "--k", "2", "--n-max", "10")
    rows = out.strip().splitlines()[1:]
    assert [r.split(",")[3] for r in rows] == ["2", "3", "4", "4", "4", "5", "5", "5", "5"]


def test_construct_verify_round_trip(capsys, tmp_path):
    out_file = tmp_path / "bose.json"
    code, out, _ = run(capsys, "construct", "--scheme", "bose", "--n", "12", "--verify", "--out", str(out_file))
    inline = json.loads(out)
    assert code == 0 and inline["verdict"] is True and inline["padlocks"] == 9
    code, again, _ = run(capsys, "verify", "--system", str(out_file), "--k", "3")
    assert code == 0 and json.loads(again) == inline


def test_construct_is_deterministic(capsys):
    first = run(capsys, "construct", "--scheme", "recursive", "--k", "3", "--n", "9")
    second = run(capsys, "construct", "--scheme", "recursive", "--k", "3", "--n", "9")
    assert first == second


def test_false_verdict_is_reported(capsys, tmp_path):
    f = tmp_path / "d.json"
    run(capsys, "construct", "--scheme", "direct", "--k", "2", "--n", "4", "--out", str(f))
    code, out, _ = run(capsys, "verify", "--system", str(f), "--k", "3")
    assert code == 0 and json.loads(out)["verdict"] is False


def test_formula_access_structure(capsys):
    code, out, _ = run(capsys, "construct", "--scheme", "dnf", "--formula", "A.B + C", "--verify")
    lines = out.strip().splitlines()
    assert code == 0 and json.loads(lines[1])["minimal_authorized"] == [[2], [0, 1]]


def test_share_and_reconstruct(capsys, tmp_path):
    sys_file, share_file = tmp_path / "s.json", tmp_path / "sh.json"
    run(capsys, "construct", "--scheme", "two", "--n", "6", "--out", str(sys_file))
    code, _, _ = run(capsys, "share", "--system", str(sys_file), "--secret", "4", "--q", "7", "--seed", "3", "--out", str(share_file))
    assert code == 0
    first = share_file.read_text()
    run(capsys, "share", "--system", str(sys_file), "--secret", "4", "--q", "7", "--seed", "3", "--out", str(share_file))
    assert share_file.read_text() == first
    code, out, _ = run(capsys, "reconstruct", "--system", str(sys_file), "--shares", str(share_file), "--coalition", "1,4")
    assert code == 0 and json.loads(out) == {"coalition": [1, 4], "opened": True, "secret": 4}
    code, out, _ = run(capsys, "reconstruct", "--system", str(sys_file), "--shares", str(share_file), "--coalition", "5")
    assert json.loads(out)["opened"] is False


def test_knot_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "knot", "--build", "1", "3")
    assert code == 0 and out == "x1 x2 x3 x2' x3' x1' x3 x2 x3' x2'\n"
    word = tmp_path / "w.txt"
    word.write_text(out)
    code, out, _ = run(capsys, "knot", "--verify", str(word), "--k", "1", "--n", "3")
    assert json.loads(out)["verdict"] is True
    code, out, _ = run(capsys, "knot", "--search", "1", "2", "4")
    assert json.loads(out) == {"length": 4, "word": "x1 x2 x1' x2'", "nodes": json.loads(out)["nodes"]}


@pytest.mark.parametrize(
    "text,path",
    [
        ("{", "$"),
        ('{"n":2,"padlocks":1,"circuit":{"t":"thr","m":"x","ch":[{"t":"lock","id":0}]},"keys":[[0],[0]]}', "$.circuit.m"),
        ('{"n":2,"padlocks":1,"circuit":{"t":"lock","id":0},"keys":[[0],["a"]]}', "$.keys[1]"),
    ],
)
def test_malformed_input_names_the_path(capsys, tmp_path, text, path):
    f = tmp_path / "bad.json"
    f.write_text(text)
    code, _, err = run(capsys, "verify", "--system", str(f), "--k", "1")
    assert code == 2 and path in err


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "bounds", "--k", "3")[0] == 2
    assert run(capsys, "construct", "--scheme", "direct", "--n", "3")[0] == 2


def test_capacity_is_exit_one(capsys):
    code, _, err = run(capsys, "construct", "--scheme", "direct", "--k", "2", "--n", "21", "--verify")
    assert code == 1 and "enumeration limit" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "padlocks", "bounds", "--k", "6", "--n", "11"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == BOUNDS_6_11
