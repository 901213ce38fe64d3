import random

import pytest

from procreal.generators import random_term
from procreal.names import FiniteRestriction, REGISTRY, negative, positive
from procreal.parsing import ParseError, parse_program, parse_term
from procreal.terms import (
    AllSort,
    FiniteSort,
    InputPrefix,
    NIL,
    OutputPrefix,
    Par,
    Prefix,
    Rec,
    Rename,
    Restrict,
    Sum,
    Var,
    expand_values,
    free_process_vars,
    print_term,
    sort_of,
    substitute_value,
    well_formed,
)

A = REGISTRY.intern("a")
B = REGISTRY.intern("b")


def test_parse_prefix_example():
    t = parse_term("{a}.0")
    assert t == Prefix(frozenset([positive(A)]), NIL)


def test_parse_wire_example():
    t = parse_term("rec X. {a,b}.X")
    assert t == Rec("X", Prefix(frozenset([positive(A), positive(B)]), Var("X")))


def test_tau_guard_in_sum_rejected():
    with pytest.raises(ParseError, match="tau guard"):
        parse_term("{}.0 + {a}.0")


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_term("{a}.0 +\n  | 0")
    assert exc.value.line == 2


def test_bindings_and_main():
    bindings, main = parse_program("w = rec X. {a}.X;\nmain = w | w;\n")
    assert "w" in bindings
    assert isinstance(main, Par)


def test_roundtrip_random_terms():
    rng = random.Random(11)
    for _ in range(300):
        t = random_term(rng, (A, B), rng.randint(1, 12))
        assert parse_term(print_term(t)) == t


def test_roundtrip_value_prefixes():
    t = parse_term("in s(x). out s(x). 0")
    assert parse_term(print_term(t)) == t


def test_well_formed_tau_prefix_guards_recursion():
    t = Rec("X", Prefix(frozenset(), Var("X")))
    assert well_formed(t) == []


def test_well_formed_unguarded_recursion():
    t = Rec("X", Par(Var("X"), Var("X")))
    assert any("unguarded" in d for d in well_formed(t))


def test_well_formed_renaming_domain():
    # the map covers only atom a; the term also performs b
    ren_map = parse_term("({a}.0 | {b}.0) [map{a:a}]")
    diags = well_formed(ren_map)
    assert any("outside domain" in d for d in diags)


def test_sort_examples():
    assert sort_of(NIL) == FiniteSort(frozenset())
    t = parse_term("{a}.0 | {~a}.0")
    assert sort_of(t) == FiniteSort(frozenset([positive(A), negative(A)]))
    r = parse_term("({a}.0) \\ {a}")
    assert sort_of(r) == FiniteSort(frozenset())


def test_sort_symbolic_for_replicating_terms():
    from procreal.combinators import bang

    assert isinstance(sort_of(bang(parse_term("{a}.0"))), AllSort)


def test_sort_sound_for_restriction():
    t = Restrict(parse_term("{a}.{b}.0"), FiniteRestriction([positive(A)]))
    s = sort_of(t)
    assert positive(A) not in s.labels
    assert positive(B) in s.labels


def test_expand_values_input():
    t = parse_term("in s(x). 0")
    e = expand_values(t, (0, 1))
    assert isinstance(e, Sum)
    assert len(e.branches) == 2
    names = sorted(str(next(iter(a))) for a, _ in e.branches)
    assert names == ["s_0", "s_1"]


def test_expand_values_output_single_branch():
    t = parse_term("out s(1). 0")
    e = expand_values(t, (0, 1))
    assert isinstance(e, Prefix)
    assert str(next(iter(e.action))) == "~s_1"


def test_expand_values_binding():
    t = parse_term("in s(x). out s(x). 0")
    e = expand_values(t, (0, 1))
    for (_, branch) in e.branches:
        assert isinstance(branch, Prefix)


def test_expand_values_empty_domain_rejected():
    with pytest.raises(ValueError):
        expand_values(parse_term("in s(x). 0"), ())


def test_expand_values_out_of_domain_rejected():
    with pytest.raises(ValueError, match="outside"):
        expand_values(parse_term("out s(7). 0"), (0, 1))


def test_expand_preserves_well_formedness():
    rng = random.Random(5)
    for _ in range(50):
        t = random_term(rng, (A, B), rng.randint(1, 6))
        wrapped = InputPrefix(REGISTRY.intern("s"), "x", OutputPrefix(REGISTRY.intern("s"), "x", t))
        assert well_formed(expand_values(wrapped, (0, 1, 2))) == []


def test_substitute_value_shadowing():
    inner = InputPrefix(REGISTRY.intern("s"), "x", OutputPrefix(REGISTRY.intern("s"), "x", NIL))
    out = substitute_value(inner, "x", 3)
    assert out == inner  # binder shadows


def test_free_process_vars():
    assert free_process_vars(parse_term("rec X. {a}.X")) == frozenset()
    assert free_process_vars(Var("Y")) == frozenset(["Y"])


def test_rename_constructor_fuses():
    from procreal.terms import rename
    from procreal.names import SWAP

    t = parse_term("{a}.0")
    assert rename(rename(t, SWAP), SWAP) == t


def test_restrict_constructor_fuses():
    from procreal.terms import restrict

    t = parse_term("{a}.0")
    r = restrict(restrict(t, FiniteRestriction([positive(A)])), FiniteRestriction([positive(B)]))
    assert isinstance(r, Restrict)
    assert not isinstance(r.proc, Restrict)
