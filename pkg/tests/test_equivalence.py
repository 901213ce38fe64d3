import random

import pytest

from procreal.equivalence import (
    BudgetExceeded,
    failures_bounded,
    failures_equiv,
    normal_form,
    perp,
    weak_bisim,
)
from procreal.generators import random_term
from procreal.names import REGISTRY
from procreal.parsing import parse_term
from procreal.semantics import ExplorationBudget, build_lts
from procreal.terms import NIL, print_term

A = REGISTRY.intern("a")
B = REGISTRY.intern("b")
BUD = ExplorationBudget(max_states=2000)


def fs_json(t, k):
    return failures_bounded(t, k, BUD).to_json()


def test_failures_prefix_example():
    # brute force over the 2-state graph: initially only {a} accepted,
    # after the step everything refused
    assert fs_json(parse_term("{a}.0"), 1) == [
        {"trace": [], "acceptances": [["{a}"]]},
        {"trace": ["{a}"], "acceptances": [[]]},
    ]


def test_failures_nil_refuses_everything():
    assert fs_json(NIL, 2) == [{"trace": [], "acceptances": [[]]}]


def test_failures_tau_closure():
    lhs = failures_bounded(parse_term("{}.{a}.0"), 1, BUD)
    rhs = failures_bounded(parse_term("{a}.0"), 1, BUD)
    assert lhs == rhs


def test_failures_acceptances_are_antichains():
    rng = random.Random(21)
    for _ in range(50):
        t = random_term(rng, (A, B), rng.randint(1, 8))
        fs = failures_bounded(t, 3, BUD)
        for family in fs.table.values():
            for acc in family:
                assert not any(other < acc for other in family)


def test_failures_budget_reported():
    from procreal.combinators import bang

    with pytest.raises(BudgetExceeded):
        failures_bounded(bang(parse_term("{}.0")), 3, ExplorationBudget(max_states=20))


def test_equiv_reflexive():
    t = parse_term("{a}.{b}.0 + {b}.0")
    assert failures_equiv(t, t, BUD).verdict == "equal"


def test_equiv_distinguishes_choice_point():
    # after {a} only the right side can refuse {b}
    left = parse_term("{a}.({b}.0 + {c}.0)")
    right = parse_term("{a}.{b}.0 + {a}.{c}.0")
    res = failures_equiv(left, right, BUD)
    assert res.verdict == "distinguished"
    assert res.witness["trace"] == ["{a}"]
    assert res.witness["reason"] == "acceptance families differ"


def test_equiv_tau_prefix():
    assert failures_equiv(parse_term("{}.{a}.0"), parse_term("{a}.0"), BUD).equal


def test_equiv_unknown_on_budget():
    from procreal.combinators import bang

    res = failures_equiv(
        bang(parse_term("{a}.0")), bang(parse_term("{a}.0")),
        ExplorationBudget(max_states=30), depth=2,
    )
    assert res.verdict == "unknown"


def test_bounded_fallback_still_distinguishes():
    # state keys of these grow without bound (the coding renaming stacks
    # up), but the depth-1 difference shows up in the bounded comparison
    p = parse_term("rec X. {a}.(X [n1of3])")
    q = parse_term("rec X. {b}.(X [n1of3])")
    lts = build_lts(p, ExplorationBudget(max_states=30))
    assert not lts.complete
    res = failures_equiv(p, q, ExplorationBudget(max_states=30), depth=2)
    assert res.verdict == "distinguished"


def test_normal_form_failures_match_bounded():
    rng = random.Random(33)
    for _ in range(80):
        t = random_term(rng, (A, B), rng.randint(1, 8))
        lts = build_lts(t, BUD)
        if not lts.complete:
            continue
        nf = normal_form(lts)
        assert nf.failures_to_depth(4) == failures_bounded(t, 4, BUD)


def test_weak_bisim_tau_law():
    assert weak_bisim(parse_term("{}.{a}.0"), parse_term("{a}.0"), BUD).equal


def test_weak_bisim_reflexive():
    t = parse_term("{a}.0 | {~b}.0")
    assert weak_bisim(t, t, BUD).equal


def test_weak_bisim_refines_failures():
    rng = random.Random(17)
    pairs = 0
    for _ in range(300):
        p = random_term(rng, (A, B), rng.randint(1, 6))
        q = random_term(rng, (A, B), rng.randint(1, 6))
        wb = weak_bisim(p, q, BUD)
        if wb.equal:
            pairs += 1
            assert failures_equiv(p, q, BUD).equal, (print_term(p), print_term(q))
    assert pairs > 5


def test_failures_equiv_is_equivalence_on_sample():
    rng = random.Random(29)
    sample = [random_term(rng, (A, B), rng.randint(1, 5)) for _ in range(12)]
    verdicts = {}
    for i, p in enumerate(sample):
        for j, q in enumerate(sample):
            verdicts[i, j] = failures_equiv(p, q, BUD).equal
    for i in range(len(sample)):
        assert verdicts[i, i]
        for j in range(len(sample)):
            assert verdicts[i, j] == verdicts[j, i]
            for k in range(len(sample)):
                if verdicts[i, j] and verdicts[j, k]:
                    assert verdicts[i, k]


def test_perp_examples():
    assert perp(NIL, NIL, BUD) == "yes"
    assert perp(parse_term("rec X. {}.X"), NIL, BUD) == "no"
    assert perp(parse_term("{a}.0"), parse_term("{~a}.0"), BUD) == "yes"


def test_divergence_separate_from_failures():
    # the immediately diverging process has no stable state: it refuses
    # nothing, unlike the inert process which refuses everything
    loop = parse_term("rec X. {}.X")
    res = failures_equiv(loop, NIL, BUD)
    assert res.verdict == "distinguished"
