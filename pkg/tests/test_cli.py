import json

import pytest

from procreal.cli import main
from procreal.corpus import corpus_proofs
from procreal.logic import proof_to_json


@pytest.fixture()
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    return write


def test_lts_json(files, capsys):
    path = files("w.term", "rec X. {a,b}.X\n")
    assert main(["lts", path, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["states"] == ["rec X. {a,b}.X"]
    assert data["complete"] is True


def test_lts_dot(files, capsys):
    path = files("w.term", "{a}.0\n")
    assert main(["lts", path, "--format", "dot"]) == 0
    assert capsys.readouterr().out.startswith("digraph")


def test_equiv_equal_exit_zero(files, capsys):
    p = files("p.term", "{a}.{b}.0\n")
    assert main(["equiv", p, p]) == 0


def test_equiv_distinguished_exit_one_with_witness(files, capsys):
    p = files("p.term", "{a}.({b}.0 + {c}.0)\n")
    q = files("q.term", "{a}.{b}.0 + {a}.{c}.0\n")
    assert main(["equiv", p, q, "--format", "json"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"] == "distinguished"
    assert data["witness"]["trace"] == ["{a}"]


def test_equiv_unknown_exit_two(files, capsys):
    p = files("p.term", "rec X. {a}.(X [n1of3])\n")
    q = files("q.term", "rec X. {a}.(X [n1of3]) | 0\n")
    assert main(["equiv", p, q, "--max-states", "30", "--depth", "2"]) == 2


def test_equiv_weak_bisim_mode(files):
    p = files("p.term", "{}.{a}.0\n")
    q = files("q.term", "{a}.0\n")
    assert main(["equiv", p, q, "--mode", "weak-bisim"]) == 0


def test_perp_exit_codes(files):
    p = files("p.term", "{a}.0\n")
    q = files("q.term", "{~a}.0\n")
    loop = files("loop.term", "rec X. {}.X\n")
    nil = files("nil.term", "0\n")
    assert main(["perp", p, q]) == 0
    assert main(["perp", loop, nil]) == 1


def test_parse_error_exit_three(files, capsys):
    bad = files("bad.term", "{a}.0 +\n")
    assert main(["equiv", bad, bad]) == 3
    assert "line" in capsys.readouterr().err


def test_failures_depth(files, capsys):
    p = files("p.term", "{a}.0\n")
    assert main(["failures", p, "--depth", "1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == [
        {"acceptances": [["{a}"]], "trace": []},
        {"acceptances": [[]], "trace": ["{a}"]},
    ]


def test_values_expansion(files, capsys):
    p = files("p.term", "in s(x). out s(x). 0\n")
    assert main(["lts", p, "--values", "0,1", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert any("s_0" in s for s in data["states"][0:1] + data["states"])


def test_values_required(files, capsys):
    p = files("p.term", "in s(x). 0\n")
    assert main(["lts", p]) == 3


def test_extract_and_verify_cut(files, tmp_path, capsys):
    proof = corpus_proofs()["tensor_par"]["proof"]
    ppath = files("p.json", json.dumps(proof_to_json(proof)))
    out = str(tmp_path / "out.term")
    assert main(["extract", ppath, "-o", out]) == 0
    from procreal.parsing import parse_term

    parse_term(open(out).read())
    capsys.readouterr()
    assert main(["verify-cut", ppath, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["overall"] == "pass"
    assert data["cut_free"] is True
    assert all(s["verdict"] == "pass" for s in data["steps"])


def test_check_type(files, capsys):
    env = files(
        "types.json",
        json.dumps(
            {"atoms": {"a": {"alphabet": ["a"], "pos": ["{a}.0"], "neg": ["{~a}.0"]}}}
        ),
    )
    good = files("good.term", "{alpha}.{a}.0 + {beta}.{a}.0\n")
    bad = files("bad.term", "{a}.0\n")
    assert main(["check-type", good, env, "a&a"]) == 0
    assert main(["check-type", bad, env, "a&a"]) == 1


def test_cli_deterministic_output(files, capsys):
    proof = corpus_proofs()["with_plus1"]["proof"]
    ppath = files("p.json", json.dumps(proof_to_json(proof)))
    assert main(["verify-cut", ppath, "--format", "json"]) == 0
    first = capsys.readouterr().out
    assert main(["verify-cut", ppath, "--format", "json"]) == 0
    second = capsys.readouterr().out
    assert first == second


def test_usage_error_exit_three():
    assert main(["no-such-command"]) == 3
