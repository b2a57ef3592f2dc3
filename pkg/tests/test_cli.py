import json
from pathlib import Path

import pytest

from bitten.cli import dump_report, example_dot, example_table, main

GOLDEN = Path(__file__).parent / "golden"
INSTANCE = str(GOLDEN / "example_instance.json")


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_example_table_matches_golden():
    assert example_table() == (GOLDEN / "example_table.txt").read_text(encoding="utf-8")


def test_example_dot_matches_golden(capsys):
    assert example_dot() == (GOLDEN / "example_hasse.dot").read_text(encoding="utf-8")
    code, out = run(capsys, "hasse", INSTANCE)
    golden = (GOLDEN / "example_hasse.dot").read_text(encoding="utf-8")
    assert code == 0 and out == golden.replace("digraph example", "digraph quotient", 1)


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "laws", INSTANCE, "--pack", "heyting")[0] == 0
    assert run(capsys, "laws", INSTANCE, "--pack", "concrete", "--budget", "20000")[0] == 1
    assert run(capsys, "approx", INSTANCE, "--subset", "{x1,x9}")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert run(capsys, "quotient", str(bad))[0] == 2
    bad.write_text('{"universe": ["a"], "tolerance_pairs": [["a", "b"]]}', encoding="utf-8")
    assert run(capsys, "quotient", str(bad))[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_json_report_round_trip(capsys):
    code, out = run(capsys, "laws", INSTANCE, "--pack", "heyting", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass" and rep["report_version"] == 1
    assert rep["command"] == "laws" and len(rep["instance_digest"]) == 16
    assert dump_report(rep) + "\n" == out


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("BITTEN_SEED", "11")
    a = run(capsys, "random", "--n", "5", "--count", "3")[1]
    monkeypatch.delenv("BITTEN_SEED")
    b = run(capsys, "random", "--n", "5", "--count", "3", "--seed", "11")[1]
    assert a == b
    monkeypatch.setenv("BITTEN_SEED", "eleven")
    assert run(capsys, "random")[0] == 2


def test_random_instances(capsys, tmp_path):
    code, out = run(capsys, "random", "--n", "4", "--count", "2", "--density", "0")
    docs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(docs) == 2 and all(d["tolerance_pairs"] == [] for d in docs)
    out = run(capsys, "random", "--n", "4", "--density", "1")[1]
    assert len(json.loads(out)["tolerance_pairs"]) == 6
    # every generated instance loads back
    path = tmp_path / "r.json"
    path.write_text(run(capsys, "random", "--n", "5", "--seed", "3")[1], encoding="utf-8")
    assert run(capsys, "quotient", str(path))[0] == 0


def test_represent_with_refined_search(capsys):
    code, out = run(capsys, "represent", INSTANCE, "--search-bound", "4", "--json")
    rep = json.loads(out)
    assert code == 0
    refined = rep["results"][1]
    assert refined["outcome"] == "witness" and refined["ortho_normal"]
    assert refined["witness_blocks"] == ["{p1,p2}", "{p1,p3}", "{p4}"]
    assert rep["results"][0]["kstar"] == 53 and rep["results"][0]["c1o2"] == 14


@pytest.mark.parametrize("command", ["quotient", "sgba", "auai"])
def test_other_commands_pass_on_the_example(capsys, command):
    assert run(capsys, command, INSTANCE)[0] == 0


def test_approx_subset(capsys):
    code, out = run(capsys, "approx", INSTANCE, "--subset", "{x1,x2}", "--json")
    assert code == 0
    row = json.loads(out)["results"][0]
    assert row["lower"] == "{x1,x2}" and row["upper"] == "{x1,x2,x3}" and row["negative"] == "{x4}"
