import pytest

from procreal.combinators import identity_wire
from procreal.corpus import corpus_proofs
from procreal.equivalence import failures_equiv, perp
from procreal.extraction import (
    ExtractionError,
    extract,
    formula_wire,
    pack_to_nested_binary,
    verify_cut_soundness,
    verify_totality_pipeline,
)
from procreal.logic import (
    FAtom,
    FForall,
    FTensor,
    PAxiom,
    PCut,
    PForallR,
    PParR,
    PTensorR,
    cut_eliminate,
    negate,
)
from procreal.names import REGISTRY
from procreal.parsing import parse_term
from procreal.semantics import ExplorationBudget
from procreal.semtypes import RepPER, SemType
from procreal.terms import rename, well_formed

A = FAtom("a")
B = FAtom("b")
BUD = ExplorationBudget(max_states=6000)


def test_axiom_extracts_to_wire():
    w = extract(PAxiom(A))
    assert w == identity_wire(frozenset([REGISTRY.intern("a")]))


def test_atom_env_alphabet():
    env = {"a": frozenset([REGISTRY.intern("ch1"), REGISTRY.intern("ch2")])}
    w = extract(PAxiom(A), env)
    assert w == identity_wire(env["a"])


def test_extractions_closed_and_well_formed():
    for name, entry in corpus_proofs().items():
        t = extract(entry["proof"], {}, entry["values"])
        assert well_formed(t) == [], name


def test_cut_of_axioms_behaves_as_axiom():
    cut = PCut(A, PAxiom(A), PAxiom(negate(A)), -1, -1)
    res = failures_equiv(extract(cut), extract(PAxiom(negate(A))), BUD)
    assert res.equal


def test_invalid_proof_rejected():
    bad = PCut(A, PAxiom(A), PAxiom(A), -1, -1)
    with pytest.raises(ExtractionError):
        extract(bad)


def test_quantifier_extraction_needs_values():
    with pytest.raises(ExtractionError):
        extract(PForallR("x", PAxiom(A)))


def test_verify_cut_soundness_identical_proofs():
    p = corpus_proofs()["tensor_par"]["proof"]
    assert verify_cut_soundness(p, p, budget=BUD).verdict == "pass"


def test_verify_cut_soundness_axiom_step():
    cut = PCut(A, PAxiom(A), PAxiom(negate(A)), -1, -1)
    res = cut_eliminate(cut, keep_trail=True)
    rep = verify_cut_soundness(res.trail[0], res.trail[1], budget=BUD)
    assert rep.verdict == "pass"


def test_verify_cut_soundness_catches_wrong_reduct():
    before = PCut(A, PAxiom(A), PAxiom(negate(A)), -1, -1)
    wrong = PAxiom(B)  # same shape of sequent, different atom
    rep = verify_cut_soundness(before, wrong, budget=BUD)
    assert rep.verdict == "fail"
    assert rep.witness is not None


def test_tensor_wire_relays_jointly():
    w = formula_wire(FTensor(A, B), {})
    # plugging a tensor of prefixes through the wire reproduces it
    from procreal.combinators import lapp, tensor

    p = tensor(parse_term("{a}.0"), parse_term("{b}.0"))
    assert failures_equiv(lapp(p, w), p, BUD).equal


def test_port_layout_pack_unpack_neutral():
    for name in ("tensor_par", "with_plus1", "prom_derel"):
        entry = corpus_proofs()[name]
        t = extract(entry["proof"], {}, entry["values"])
        from procreal.logic import conclusion

        k = len(conclusion(entry["proof"]))
        pack = pack_to_nested_binary(k)
        packed_unpacked = rename(rename(t, pack), pack.inverse())
        assert failures_equiv(packed_unpacked, t, BUD).equal, name


def _atom_type(ident):
    n = REGISTRY.intern(ident)
    from procreal.names import negative, positive
    from procreal.terms import NIL, Prefix

    pos = Prefix(frozenset([positive(n)]), NIL)
    neg = Prefix(frozenset([negative(n)]), NIL)
    return SemType(RepPER(((pos,),)), RepPER(((neg,),)), frozenset([n]))


def test_totality_axiom_convergent():
    types = {"a": _atom_type("a")}
    assert verify_totality_pipeline(PAxiom(A), types, budget=BUD) == "convergent"


def test_totality_cut_of_axioms_convergent():
    types = {"a": _atom_type("a")}
    cut = PCut(A, PAxiom(A), PAxiom(negate(A)), -1, -1)
    assert verify_totality_pipeline(cut, types, budget=BUD) == "convergent"


def test_totality_negative_control_diverges():
    # a hand-built diverging term spliced against the type's consumers,
    # not a real extraction
    loop = parse_term("rec X. {}.X")
    t = _atom_type("a")
    assert perp(loop, t.neg.classes[0][0], BUD) == "no"
