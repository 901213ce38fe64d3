import random

import pytest

from procreal.corpus import corpus_proofs
from procreal.logic import (
    FAtom,
    FBang,
    FExists,
    FForall,
    FPar,
    FPlus,
    FQuest,
    FTensor,
    FWith,
    NotReducible,
    PAxiom,
    PCut,
    PExchange,
    PParR,
    PTensorR,
    Proof,
    check_proof,
    conclusion,
    cut_eliminate,
    cut_step,
    find_redex,
    has_cut,
    negate,
    parse_formula,
    print_formula,
    print_sequent,
    proof_from_json,
    proof_to_json,
    subst_value_formula,
)

A = FAtom("a")
B = FAtom("b")


def random_formula(rng, depth):
    if depth <= 0:
        return FAtom(rng.choice("abc"), rng.random() < 0.5)
    kind = rng.choice(["atom", "tensor", "par", "with", "plus", "bang", "quest", "forall"])
    if kind == "atom":
        return FAtom(rng.choice("abc"), rng.random() < 0.5)
    if kind in ("tensor", "par", "with", "plus"):
        cls = {"tensor": FTensor, "par": FPar, "with": FWith, "plus": FPlus}[kind]
        return cls(random_formula(rng, depth - 1), random_formula(rng, depth - 1))
    if kind == "bang":
        return FBang(random_formula(rng, depth - 1))
    if kind == "quest":
        return FQuest(random_formula(rng, depth - 1))
    return FForall("x", random_formula(rng, depth - 1))


def test_negate_examples():
    assert negate(FAtom("a")) == FAtom("a", False)
    assert negate(FTensor(A, B)) == FPar(negate(A), negate(B))
    assert negate(FBang(A)) == FQuest(negate(A))
    assert negate(FForall("x", A)) == FExists("x", negate(A))


def test_negate_involutive_on_random_formulas():
    rng = random.Random(2)
    for _ in range(300):
        f = random_formula(rng, rng.randint(0, 4))
        assert negate(negate(f)) == f


def test_formula_parse_print_roundtrip():
    rng = random.Random(6)
    for _ in range(300):
        f = random_formula(rng, rng.randint(0, 4))
        assert parse_formula(print_formula(f)) == f


def test_formula_syntax():
    assert parse_formula("a*b") == FTensor(A, B)
    assert parse_formula("a@b") == FPar(A, B)
    assert parse_formula("a&b") == FWith(A, B)
    assert parse_formula("a(+)b") == FPlus(A, B)
    assert parse_formula("!a") == FBang(A)
    assert parse_formula("?~a") == FQuest(negate(A))
    assert parse_formula("forall x. p(x)") == FForall("x", FAtom("p", True, ("x",)))


def test_subst_value_formula():
    f = FForall("x", FTensor(FAtom("p", True, ("x",)), FAtom("p", True, ("y",))))
    g = subst_value_formula(f, "y", 2)
    assert g.body.right.args == (2,)
    assert g.body.left.args == ("x",)


def test_axiom_conclusion():
    assert conclusion(PAxiom(A)) == (negate(A), A)


def test_cut_mismatch_diagnostic():
    bad = PCut(A, PAxiom(A), PAxiom(A), -1, -1)
    res = check_proof(bad)
    assert not res.ok
    assert "dual cut formula" in res.error


def test_tensor_rule_conclusion():
    t = PTensorR(PAxiom(A), PAxiom(B))
    assert conclusion(t) == (negate(A), negate(B), FTensor(A, B))


def test_exchange_validation():
    bad = PExchange((0, 0), PAxiom(A))
    assert not check_proof(bad).ok


def test_cut_free_proof_unchanged():
    t = PTensorR(PAxiom(A), PAxiom(B))
    res = cut_eliminate(t)
    assert res.steps == 0 and res.proof == t and res.status == "done"


def test_axiom_cut_one_step():
    cut = PCut(A, PAxiom(A), PAxiom(negate(A)), -1, -1)
    res = cut_eliminate(cut)
    assert res.steps == 1 and res.status == "done"


def test_tensor_example_within_step_bound():
    entry = corpus_proofs()["tensor_par"]
    res = cut_eliminate(entry["proof"])
    assert res.status == "done" and res.steps <= 8
    assert conclusion(res.proof) == conclusion(entry["proof"])


def test_every_corpus_step_preserves_conclusion():
    for name, entry in corpus_proofs().items():
        proof = entry["proof"]
        target = conclusion(proof)
        res = cut_eliminate(proof, keep_trail=True)
        assert res.status == "done", name
        assert not has_cut(res.proof), name
        for intermediate in res.trail:
            got = check_proof(intermediate)
            assert got.ok, (name, got.error)
            assert got.sequent == target, (name, print_sequent(got.sequent))


def test_corpus_covers_every_step_kind():
    seen = set()
    for entry in corpus_proofs().values():
        res = cut_eliminate(entry["proof"])
        seen |= set(res.kinds)
        missing = entry["expect_kinds"] - set(res.kinds)
        assert not missing, missing
    expected = {
        "axiom-left", "axiom-right", "tensor-par", "par-tensor",
        "with-plus1", "with-plus2", "plus1-with", "plus2-with",
        "prom-weak", "weak-prom", "prom-derel", "derel-prom",
        "prom-contr", "contr-prom", "forall-exists", "exists-forall",
        "exchange-left", "exchange-right", "push-left-weak",
        "push-right-weak",
    }
    assert expected <= seen


def test_cut_step_requires_cut_position():
    with pytest.raises(NotReducible):
        cut_step(PAxiom(A), ())


def test_find_redex_innermost_first():
    inner = PCut(A, PAxiom(A), PAxiom(negate(A)), -1, -1)
    outer = PCut(negate(A), inner, PAxiom(A), -1, -1)
    assert find_redex(outer) == (0,)


def test_json_roundtrip_corpus():
    for entry in corpus_proofs().values():
        j = proof_to_json(entry["proof"])
        assert proof_from_json(j) == entry["proof"]
