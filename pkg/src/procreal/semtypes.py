"""Semantic types: pairs of finite-representation partial equivalence
relations on processes, identified up to failures equivalence.

The paper-level quantifiers over all processes are replaced by the
finite representative sets each type carries; every connective is a
representative-level construction, and candidate terms are admitted to a
negative side only after passing the defining clause against the finite
positive representatives.  This finite-representation reading is the
toolkit's central approximation: all checks are effective, and the PER
structure shows up as machine-checked extensionality of morphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .combinators import (
    bang,
    identity_wire,
    inj_l,
    inj_r,
    lapp,
    pairing,
    rapp,
    seq,
    swap_halves,
    tensor,
)
from .equivalence import BudgetExceeded, failures_equiv, perp
from .names import ALPHA, BETA, DELTA, Name, OMEGA, SIGMA, negative, positive
from .semantics import ExplorationBudget
from .terms import NIL, Prefix, Term, print_term, value_name
from .logic import (
    FAtom,
    FBang,
    FExists,
    FForall,
    FPar,
    FPlus,
    FQuest,
    FTensor,
    FWith,
    Formula,
    negate,
    subst_value_formula,
)


@dataclass(frozen=True)
class RepPER:
    """Finite partial equivalence relation: a tuple of classes, each a
    nonempty tuple of pairwise failures-equivalent terms, with distinct
    classes pairwise distinguishable."""

    classes: tuple  # tuple[tuple[Term, ...], ...]

    def reps(self):
        return [cls[0] for cls in self.classes]

    def __len__(self):
        return len(self.classes)


@dataclass(frozen=True)
class SemType:
    pos: RepPER
    neg: RepPER
    interface: Optional[frozenset] = None  # Alphabet; None when unbounded

    def dual(self) -> "SemType":
        return SemType(self.neg, self.pos, self.interface)


def dual(t: SemType) -> SemType:
    return t.dual()


@dataclass
class Classification:
    verdict: str  # "class" | "no" | "unknown"
    index: Optional[int] = None
    detail: str = ""


def classify(term: Term, per: RepPER, budget: ExplorationBudget) -> Classification:
    saw_unknown = False
    for idx, cls in enumerate(per.classes):
        res = failures_equiv(term, cls[0], budget)
        if res.verdict == "equal":
            return Classification("class", idx)
        if res.verdict == "unknown":
            saw_unknown = True
    if saw_unknown:
        return Classification("unknown", detail="budget exhausted during classification")
    return Classification("no")


def realizes_pos(term: Term, t: SemType, budget: ExplorationBudget = ExplorationBudget()) -> Classification:
    return classify(term, t.pos, budget)


def realizes_neg(term: Term, t: SemType, budget: ExplorationBudget = ExplorationBudget()) -> Classification:
    return classify(term, t.neg, budget)


def partition(terms, budget: ExplorationBudget) -> RepPER:
    """Groups terms into failures-equivalence classes.  Raises
    BudgetExceeded when an equivalence query cannot be decided."""
    classes: list[list[Term]] = []
    for term in terms:
        placed = False
        for cls in classes:
            res = failures_equiv(term, cls[0], budget)
            if res.verdict == "equal":
                if not any(print_term(term) == print_term(u) for u in cls):
                    cls.append(term)
                placed = True
                break
            if res.verdict == "unknown":
                raise BudgetExceeded("partitioning undecided within budget")
        if not placed:
            classes.append([term])
    return RepPER(tuple(tuple(cls) for cls in classes))


def validate_repper(per: RepPER, budget: ExplorationBudget = ExplorationBudget()) -> list:
    """Intra-class equivalence and inter-class distinguishability."""
    diags = []
    for i, cls in enumerate(per.classes):
        if not cls:
            diags.append(f"class {i} empty")
            continue
        for u in cls[1:]:
            if not failures_equiv(cls[0], u, budget).equal:
                diags.append(f"class {i} members not equivalent")
    for i, ci in enumerate(per.classes):
        for j in range(i + 1, len(per.classes)):
            res = failures_equiv(ci[0], per.classes[j][0], budget)
            if res.verdict != "distinguished":
                diags.append(f"classes {i} and {j} not distinguishable ({res.verdict})")
    return diags


# ---------------------------------------------------------------------------
# Connectives


def unit_type() -> SemType:
    per = RepPER(((NIL,),))
    return SemType(per, per, frozenset())


def _cap_members(cls, cap=2):
    return tuple(cls[:cap])


def tensor_type(
    t: SemType,
    u: SemType,
    budget: ExplorationBudget = ExplorationBudget(),
    extra_neg=(),
) -> SemType:
    pos_classes = []
    for c1 in t.pos.classes:
        for c2 in u.pos.classes:
            members = [tensor(p, q) for p, q in zip(c1, c2)]
            if len(c1) > 1 and len(c2) == 1:
                members.append(tensor(c1[1], c2[0]))
            pos_classes.append(_cap_members(tuple(members)))
    pos = RepPER(tuple(pos_classes))
    candidates = [tensor(n1, n2) for n1 in t.neg.reps() for n2 in u.neg.reps()]
    candidates += list(extra_neg)
    survivors = []
    for cand in candidates:
        if _passes_tensor_neg_clause(cand, t, u, budget):
            survivors.append(cand)
    neg = partition(survivors, budget)
    iface = None
    if t.interface is not None and u.interface is not None:
        iface = frozenset(Name(2 * n.code) for n in t.interface) | frozenset(
            Name(2 * n.code + 1) for n in u.interface
        )
    return SemType(pos, neg, iface)


def _passes_tensor_neg_clause(cand: Term, t: SemType, u: SemType, budget) -> bool:
    """The counter-realizer clause for a tensor: left application of any
    positive of the first component lands in the second's negatives, and
    right application of any positive of the second lands in the first's."""
    for q in t.pos.reps():
        if classify(lapp(q, cand), u.neg, budget).verdict != "class":
            return False
    for r in u.pos.reps():
        if classify(rapp(cand, r), t.neg, budget).verdict != "class":
            return False
    return True


def par_type(
    t: SemType,
    u: SemType,
    budget: ExplorationBudget = ExplorationBudget(),
    extra_pos=(),
) -> SemType:
    return tensor_type(t.dual(), u.dual(), budget, extra_neg=extra_pos).dual()


def lolli_type(
    t: SemType,
    u: SemType,
    budget: ExplorationBudget = ExplorationBudget(),
    extra_pos=(),
) -> SemType:
    return par_type(t.dual(), u, budget, extra_pos=extra_pos)


def with_type(t: SemType, u: SemType, budget: ExplorationBudget = ExplorationBudget()) -> SemType:
    pos_classes = []
    for c1 in t.pos.classes:
        for c2 in u.pos.classes:
            members = [pairing(p, q, port="plain") for p, q in zip(c1, c2)]
            pos_classes.append(_cap_members(tuple(members)))
    neg_classes = [
        _cap_members(tuple(inj_l(n, port="plain") for n in cls)) for cls in t.neg.classes
    ] + [
        _cap_members(tuple(inj_r(n, port="plain") for n in cls)) for cls in u.neg.classes
    ]
    iface = None
    if t.interface is not None and u.interface is not None:
        iface = t.interface | u.interface | frozenset([ALPHA, BETA])
    return SemType(RepPER(tuple(pos_classes)), RepPER(tuple(neg_classes)), iface)


def plus_type(t: SemType, u: SemType, budget: ExplorationBudget = ExplorationBudget()) -> SemType:
    return with_type(t.dual(), u.dual(), budget).dual()


def bang_type(
    t: SemType, fuel: int = 1, budget: ExplorationBudget = ExplorationBudget()
) -> SemType:
    pos_classes = [
        _cap_members(tuple(bang(p) for p in cls)) for cls in t.pos.classes
    ]
    weaken = Prefix(frozenset([positive(OMEGA)]), NIL)
    stage = [weaken]
    stage += [Prefix(frozenset([negative(DELTA)]), n) for n in t.neg.reps()]
    accumulated = list(stage)
    from .names import GAMMA

    for _ in range(fuel):
        fresh = []
        prev = list(accumulated)
        for n1 in prev:
            for n2 in prev:
                body = tensor(n1, n2)
                cand = Prefix(frozenset([negative(GAMMA)]), body)
                if _passes_bang_neg_clause(body, t, accumulated, budget):
                    fresh.append(cand)
        accumulated += fresh
    neg = partition(accumulated, budget)
    return SemType(RepPER(tuple(pos_classes)), neg, None)


def _passes_bang_neg_clause(body: Term, t: SemType, stage_reps, budget) -> bool:
    """After a split request the remaining consumer must still consume a
    replicable resource on either half, checked against the previous
    stage's representatives."""
    for r in t.pos.reps():
        br = bang(r)
        left_ok = any(
            failures_equiv(lapp(br, body), s, budget).equal for s in stage_reps
        )
        if not left_ok:
            return False
        right_ok = any(
            failures_equiv(rapp(body, br), s, budget).equal for s in stage_reps
        )
        if not right_ok:
            return False
    return True


def quest_type(t: SemType, fuel: int = 1, budget: ExplorationBudget = ExplorationBudget()) -> SemType:
    return bang_type(t.dual(), fuel, budget).dual()


def forall_v_type(
    family: dict, budget: ExplorationBudget = ExplorationBudget()
) -> SemType:
    """family maps each value of the finite domain to the instance type."""
    values = sorted(family)
    pos_classes = []
    choices = [range(len(family[v].pos.classes)) for v in values]
    for combo in product(*choices):
        branches = []
        for v, idx in zip(values, combo):
            sv = value_name(SIGMA, v)
            branches.append(
                (frozenset([positive(sv)]), family[v].pos.classes[idx][0])
            )
        pos_classes.append((SumTerm(branches),))
    neg_classes = []
    for v in values:
        for cls in family[v].neg.classes:
            sv = value_name(SIGMA, v)
            neg_classes.append(
                _cap_members(tuple(Prefix(frozenset([negative(sv)]), n) for n in cls))
            )
    return SemType(RepPER(tuple(pos_classes)), RepPER(tuple(neg_classes)), None)


def SumTerm(branches) -> Term:
    from .terms import Sum

    return Sum(tuple(branches))


def exists_v_type(family: dict, budget: ExplorationBudget = ExplorationBudget()) -> SemType:
    return forall_v_type({v: t.dual() for v, t in family.items()}, budget).dual()


def formula_to_type(
    f: Formula,
    atom_types: dict,
    budget: ExplorationBudget = ExplorationBudget(),
    values: tuple = (),
    fuel: int = 1,
) -> SemType:
    if isinstance(f, FAtom):
        base = atom_types[f.ident]
        return base if f.pos else base.dual()
    if isinstance(f, FTensor):
        return tensor_type(
            formula_to_type(f.left, atom_types, budget, values, fuel),
            formula_to_type(f.right, atom_types, budget, values, fuel),
            budget,
        )
    if isinstance(f, FPar):
        return par_type(
            formula_to_type(f.left, atom_types, budget, values, fuel),
            formula_to_type(f.right, atom_types, budget, values, fuel),
            budget,
        )
    if isinstance(f, FWith):
        return with_type(
            formula_to_type(f.left, atom_types, budget, values, fuel),
            formula_to_type(f.right, atom_types, budget, values, fuel),
            budget,
        )
    if isinstance(f, FPlus):
        return plus_type(
            formula_to_type(f.left, atom_types, budget, values, fuel),
            formula_to_type(f.right, atom_types, budget, values, fuel),
            budget,
        )
    if isinstance(f, FBang):
        return bang_type(formula_to_type(f.body, atom_types, budget, values, fuel), fuel, budget)
    if isinstance(f, FQuest):
        return quest_type(formula_to_type(f.body, atom_types, budget, values, fuel), fuel, budget)
    if isinstance(f, FForall):
        family = {
            v: formula_to_type(subst_value_formula(f.body, f.var, v), atom_types, budget, values, fuel)
            for v in values
        }
        if not family:
            raise ValueError("quantified type needs a declared value domain")
        return forall_v_type(family, budget)
    if isinstance(f, FExists):
        return formula_to_type(FForall(f.var, negate(f.body)), atom_types, budget, values, fuel).dual()
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Morphisms and the category laws


@dataclass
class Morphism:
    source: SemType
    target: SemType
    realizer: Term
    f_plus: tuple = ()  # source pos class -> target pos class
    f_minus: tuple = ()  # target neg class -> source neg class


@dataclass
class MorphismResult:
    verdict: str  # "morphism" | "no" | "unknown"
    morphism: Optional[Morphism] = None
    witness: Optional[str] = None


def is_morphism(
    realizer: Term,
    a: SemType,
    b: SemType,
    budget: ExplorationBudget = ExplorationBudget(),
) -> MorphismResult:
    """Checks that the term tracks a pair of class maps: forward on the
    positives of the source, backward on the negatives of the target.
    Every member of a class must land in the same class; that is the
    extensionality the PER structure provides."""
    f_plus = []
    for idx, cls in enumerate(a.pos.classes):
        outcomes = []
        for q in cls:
            c = classify(lapp(q, realizer), b.pos, budget)
            if c.verdict == "unknown":
                return MorphismResult("unknown", witness=f"source class {idx}: {c.detail}")
            if c.verdict == "no":
                return MorphismResult(
                    "no",
                    witness=f"image of source class {idx} not a positive of the target",
                )
            outcomes.append(c.index)
        if len(set(outcomes)) != 1:
            return MorphismResult(
                "no", witness=f"source class {idx} maps to several target classes"
            )
        f_plus.append(outcomes[0])
    f_minus = []
    for idx, cls in enumerate(b.neg.classes):
        outcomes = []
        for t in cls:
            c = classify(rapp(realizer, t), a.neg, budget)
            if c.verdict == "unknown":
                return MorphismResult("unknown", witness=f"target neg class {idx}: {c.detail}")
            if c.verdict == "no":
                return MorphismResult(
                    "no",
                    witness=f"preimage of target neg class {idx} not a negative of the source",
                )
            outcomes.append(c.index)
        if len(set(outcomes)) != 1:
            return MorphismResult(
                "no", witness=f"target neg class {idx} maps to several source classes"
            )
        f_minus.append(outcomes[0])
    return MorphismResult(
        "morphism", Morphism(a, b, realizer, tuple(f_plus), tuple(f_minus))
    )


def identity_morphism(t: SemType, budget: ExplorationBudget = ExplorationBudget()) -> MorphismResult:
    if t.interface is None:
        return MorphismResult("no", witness="type has no finite interface alphabet")
    return is_morphism(identity_wire(t.interface), t, t, budget)


def compose_morphisms(
    f: Morphism, g: Morphism, budget: ExplorationBudget = ExplorationBudget()
) -> MorphismResult:
    """g after f: the composition realizer chains through the hidden middle."""
    return is_morphism(seq(f.realizer, g.realizer), f.source, g.target, budget)


def dual_morphism(f: Morphism, budget: ExplorationBudget = ExplorationBudget()) -> MorphismResult:
    return is_morphism(swap_halves(f.realizer), f.target.dual(), f.source.dual(), budget)


def pairing_morphism(
    f: Morphism, g: Morphism, budget: ExplorationBudget = ExplorationBudget()
) -> MorphismResult:
    """The mediating morphism into a product type built by with_type."""
    target = with_type(f.target, g.target, budget)
    return is_morphism(pairing(f.realizer, g.realizer, port="right"), f.source, target, budget)


def projection_realizer(t: SemType, which: str) -> Term:
    if t.interface is None:
        raise ValueError("projection needs a finite interface alphabet")
    wire = identity_wire(t.interface)
    return inj_l(wire) if which == "left" else inj_r(wire)


# ---------------------------------------------------------------------------
# Totality and inhabitation


@dataclass
class TotalityResult:
    verdict: str  # "yes" | "no" | "unknown"
    witness: Optional[tuple] = None  # (pos rep, neg rep) printed forms


def total(t: SemType, budget: ExplorationBudget = ExplorationBudget()) -> TotalityResult:
    saw_unknown = False
    for p in t.pos.reps():
        for n in t.neg.reps():
            out = perp(p, n, budget)
            if out == "no":
                return TotalityResult("no", (print_term(p), print_term(n)))
            if out == "unknown":
                saw_unknown = True
    return TotalityResult("unknown" if saw_unknown else "yes")


def inhabited(t: SemType) -> bool:
    return len(t.pos) > 0 and len(t.neg) > 0


# ---------------------------------------------------------------------------
# Lists and streams over a component type


def empty_list_realizer() -> Term:
    return Prefix(frozenset([negative(ALPHA)]), NIL)


def cons_realizer(value_realizer: Term, tail_realizer: Term) -> Term:
    return Prefix(frozenset([negative(BETA)]), tensor(value_realizer, tail_realizer))


def list_realizer(value_realizers) -> Term:
    out = empty_list_realizer()
    for p in reversed(list(value_realizers)):
        out = cons_realizer(p, out)
    return out


def list_consumer(q_family) -> Term:
    """q_family[n] consumes an n-fold tensor of the element type; the
    truncated chain ends without the continue branch."""
    qs = list(q_family)
    if not qs:
        raise ValueError("need at least the empty-list consumer")
    out = Prefix(frozenset([positive(ALPHA)]), qs[-1])
    for q in reversed(qs[:-1]):
        from .terms import Sum

        out = Sum(
            (
                (frozenset([positive(ALPHA)]), q),
                (frozenset([positive(BETA)]), out),
            )
        )
    return out


def list_type_example(
    a: SemType, max_len: int, budget: ExplorationBudget = ExplorationBudget()
) -> SemType:
    """Positive realizers of element lists up to the given length; the
    negative side is the truncated consumer chain driven by canonical
    tensor-consumers of the element type."""
    pos_classes = []
    reps = a.pos.reps()
    from itertools import product as iproduct

    for n in range(max_len + 1):
        for combo in iproduct(range(len(reps)), repeat=n):
            pos_classes.append((list_realizer([reps[i] for i in combo]),))
    q_family = []
    for n in range(max_len + 1):
        q_family.append(_tensor_consumer(a, n))
    neg_classes = ((list_consumer(q_family),),)
    return SemType(RepPER(tuple(pos_classes)), RepPER(neg_classes), None)


def _tensor_consumer(a: SemType, n: int) -> Term:
    if n == 0:
        return NIL
    out = a.neg.reps()[0]
    for _ in range(n - 1):
        out = tensor(a.neg.reps()[0], out)
    return out


def stream_realizer(a: SemType, depth: int) -> Term:
    from .terms import Sum

    stop = Prefix(frozenset([positive(ALPHA)]), NIL)
    if depth == 0:
        return stop
    rep = a.pos.reps()[0]
    return Sum(
        (
            (frozenset([positive(ALPHA)]), NIL),
            (frozenset([positive(BETA)]), tensor(rep, stream_realizer(a, depth - 1))),
        )
    )


def stream_consumer(a: SemType, depth: int) -> Term:
    if depth == 0:
        return Prefix(frozenset([negative(ALPHA)]), NIL)
    return Prefix(
        frozenset([negative(BETA)]),
        tensor(a.neg.reps()[0], stream_consumer(a, depth - 1)),
    )


def stream_type_example(
    a: SemType, depth: int, budget: ExplorationBudget = ExplorationBudget()
) -> SemType:
    pos_classes = tuple((stream_realizer(a, d),) for d in range(depth + 1))
    neg_classes = tuple((stream_consumer(a, d),) for d in range(depth + 1))
    return SemType(RepPER(pos_classes), RepPER(neg_classes), None)


# ---------------------------------------------------------------------------
# Category laws on a finite instance


def check_category_laws(
    types: dict,
    morphisms: list,
    budget: ExplorationBudget = ExplorationBudget(),
    product_cases: Optional[list] = None,
) -> dict:
    """types: name -> SemType; morphisms: list of dicts with keys
    name/src/dst/term.  Verifies, on this instance: every supplied term
    tracks a morphism, identity laws, associativity of composition,
    duality as a contravariant involution, and the product property of
    the with-construction for the given (f, g) pairs sharing a source.
    """
    report: dict = {"checks": [], "ok": True}

    def record(name: str, ok: bool, detail: str = ""):
        report["checks"].append({"check": name, "ok": bool(ok), "detail": detail})
        if not ok:
            report["ok"] = False

    verified: dict[str, Morphism] = {}
    for spec in morphisms:
        res = is_morphism(spec["term"], types[spec["src"]], types[spec["dst"]], budget)
        record(f"morphism {spec['name']}", res.verdict == "morphism", res.witness or "")
        if res.verdict == "morphism":
            verified[spec["name"]] = res.morphism

    idents: dict[str, Morphism] = {}
    for tname, t in sorted(types.items()):
        if t.interface is None:
            continue
        res = identity_morphism(t, budget)
        record(f"identity on {tname}", res.verdict == "morphism", res.witness or "")
        if res.verdict == "morphism":
            idents[tname] = res.morphism

    by_name = {spec["name"]: spec for spec in morphisms}
    for name, m in sorted(verified.items()):
        spec = by_name[name]
        if spec["src"] in idents:
            composed = seq(idents[spec["src"]].realizer, m.realizer)
            res = failures_equiv(composed, m.realizer, budget)
            record(f"id;{name} = {name}", res.equal, res.detail)
        if spec["dst"] in idents:
            composed = seq(m.realizer, idents[spec["dst"]].realizer)
            res = failures_equiv(composed, m.realizer, budget)
            record(f"{name};id = {name}", res.equal, res.detail)

    # associativity over composable triples
    names = sorted(verified)
    triples = []
    for n1 in names:
        for n2 in names:
            if by_name[n1]["dst"] != by_name[n2]["src"]:
                continue
            for n3 in names:
                if by_name[n2]["dst"] == by_name[n3]["src"]:
                    triples.append((n1, n2, n3))
    for n1, n2, n3 in triples:
        f, g, h = verified[n1].realizer, verified[n2].realizer, verified[n3].realizer
        res = failures_equiv(seq(seq(f, g), h), seq(f, seq(g, h)), budget)
        record(f"({n1};{n2});{n3} assoc", res.equal, res.detail)

    for name, m in sorted(verified.items()):
        dres = dual_morphism(m, budget)
        record(f"dual of {name} is a morphism", dres.verdict == "morphism", dres.witness or "")
        if dres.verdict == "morphism":
            ddres = dual_morphism(dres.morphism, budget)
            ok = (
                ddres.verdict == "morphism"
                and ddres.morphism.f_plus == m.f_plus
                and ddres.morphism.f_minus == m.f_minus
            )
            record(f"double dual of {name} tracks the same maps", ok)

    for fname, gname in product_cases or []:
        f, g = verified[fname], verified[gname]
        pres = pairing_morphism(f, g, budget)
        record(f"pairing <{fname},{gname}> is a morphism", pres.verdict == "morphism", pres.witness or "")
        if pres.verdict != "morphism":
            continue
        pair_term = pres.morphism.realizer
        proj1 = projection_realizer(f.target, "left")
        proj2 = projection_realizer(g.target, "right")
        r1 = failures_equiv(seq(pair_term, proj1), f.realizer, budget)
        record(f"proj1 . <{fname},{gname}> = {fname}", r1.equal, r1.detail)
        r2 = failures_equiv(seq(pair_term, proj2), g.realizer, budget)
        record(f"proj2 . <{fname},{gname}> = {gname}", r2.equal, r2.detail)
        # uniqueness on this instance: any mediator with the same
        # projections is equal at the realizer level
        again = pairing(f.realizer, g.realizer, port="right")
        r3 = failures_equiv(again, pair_term, budget)
        record(f"mediator uniqueness for <{fname},{gname}>", r3.equal, r3.detail)
    return report
