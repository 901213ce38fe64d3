"""Formulas in de Morgan normal form, sequent proofs, proof checking and
cut-elimination steps.

Conventions: sequents are ordered tuples; every introduction rule places
its principal formula last; a cut node records the positions of the cut
formula in both premises (-1 meaning last).  With those conventions the
permutation bookkeeping of cut elimination stays mechanical: principal
steps fire when both positions are the introduced last formulas,
exchange premises are stripped one layer at a time, and a cut at a
non-principal position pushes through the premise's last rule.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional, Union

ValueExpr = Union[int, str]  # int literal or value variable


# ---------------------------------------------------------------------------
# Formulas


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class FAtom(Formula):
    ident: str
    pos: bool = True
    args: tuple = ()


@dataclass(frozen=True)
class FTensor(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class FPar(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class FWith(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class FPlus(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class FBang(Formula):
    body: Formula


@dataclass(frozen=True)
class FQuest(Formula):
    body: Formula


@dataclass(frozen=True)
class FForall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class FExists(Formula):
    var: str
    body: Formula


def negate(a: Formula) -> Formula:
    if isinstance(a, FAtom):
        return FAtom(a.ident, not a.pos, a.args)
    if isinstance(a, FTensor):
        return FPar(negate(a.left), negate(a.right))
    if isinstance(a, FPar):
        return FTensor(negate(a.left), negate(a.right))
    if isinstance(a, FWith):
        return FPlus(negate(a.left), negate(a.right))
    if isinstance(a, FPlus):
        return FWith(negate(a.left), negate(a.right))
    if isinstance(a, FBang):
        return FQuest(negate(a.body))
    if isinstance(a, FQuest):
        return FBang(negate(a.body))
    if isinstance(a, FForall):
        return FExists(a.var, negate(a.body))
    if isinstance(a, FExists):
        return FForall(a.var, negate(a.body))
    raise TypeError(f"not a formula: {a!r}")


def lolli(a: Formula, b: Formula) -> Formula:
    return FPar(negate(a), b)


def subst_value_formula(a: Formula, var: str, value: int) -> Formula:
    if isinstance(a, FAtom):
        args = tuple(value if arg == var else arg for arg in a.args)
        return FAtom(a.ident, a.pos, args)
    if isinstance(a, (FTensor, FPar, FWith, FPlus)):
        return type(a)(
            subst_value_formula(a.left, var, value),
            subst_value_formula(a.right, var, value),
        )
    if isinstance(a, (FBang, FQuest)):
        return type(a)(subst_value_formula(a.body, var, value))
    if isinstance(a, (FForall, FExists)):
        if a.var == var:
            return a
        return type(a)(a.var, subst_value_formula(a.body, var, value))
    raise TypeError(f"not a formula: {a!r}")


def free_value_vars_formula(a: Formula) -> frozenset:
    if isinstance(a, FAtom):
        return frozenset(arg for arg in a.args if isinstance(arg, str))
    if isinstance(a, (FTensor, FPar, FWith, FPlus)):
        return free_value_vars_formula(a.left) | free_value_vars_formula(a.right)
    if isinstance(a, (FBang, FQuest)):
        return free_value_vars_formula(a.body)
    if isinstance(a, (FForall, FExists)):
        return free_value_vars_formula(a.body) - {a.var}
    raise TypeError(f"not a formula: {a!r}")


def print_formula(a: Formula) -> str:
    def prn(f: Formula, need_parens: bool) -> str:
        if isinstance(f, FAtom):
            base = ("" if f.pos else "~") + f.ident
            if f.args:
                base += "(" + ",".join(str(x) for x in f.args) + ")"
            return base
        if isinstance(f, FBang):
            return "!" + prn(f.body, True)
        if isinstance(f, FQuest):
            return "?" + prn(f.body, True)
        if isinstance(f, (FTensor, FPar, FWith, FPlus)):
            op = {FTensor: "*", FPar: "@", FWith: "&", FPlus: "(+)"}[type(f)]
            s = prn(f.left, True) + op + prn(f.right, True)
            return f"({s})" if need_parens else s
        if isinstance(f, (FForall, FExists)):
            q = "forall" if isinstance(f, FForall) else "exists"
            s = f"{q} {f.var}. " + prn(f.body, False)
            return f"({s})" if need_parens else s
        raise TypeError(f"not a formula: {f!r}")

    return prn(a, False)


_F_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<plus>\(\+\))
      | (?P<int>\d+)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<sym>[~*@&!?().,])
    """,
    re.VERBOSE,
)


class FormulaParseError(Exception):
    pass


def parse_formula(text: str) -> Formula:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _F_TOKEN.match(text, pos)
        if m is None:
            raise FormulaParseError(f"unexpected character {text[pos]!r} at {pos}")
        if m.lastgroup != "ws":
            tokens.append(m.group(0))
        pos = m.end()
    tokens.append("<eof>")
    i = 0

    def peek():
        return tokens[i]

    def take(expected=None):
        nonlocal i
        tok = tokens[i]
        if expected is not None and tok != expected:
            raise FormulaParseError(f"expected {expected!r}, found {tok!r}")
        i += 1
        return tok

    def parse_expr() -> Formula:
        if peek() in ("forall", "exists"):
            q = take()
            var = take()
            take(".")
            body = parse_expr()
            return FForall(var, body) if q == "forall" else FExists(var, body)
        left = parse_unary()
        while peek() in ("*", "@", "&", "(+)"):
            op = take()
            right = parse_unary()
            cls = {"*": FTensor, "@": FPar, "&": FWith, "(+)": FPlus}[op]
            left = cls(left, right)
        return left

    def parse_unary() -> Formula:
        tok = peek()
        if tok == "!":
            take()
            return FBang(parse_unary())
        if tok == "?":
            take()
            return FQuest(parse_unary())
        if tok == "~":
            take()
            inner = parse_unary()
            return negate(inner)
        if tok == "(":
            take()
            inner = parse_expr()
            take(")")
            return inner
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) and tok not in ("forall", "exists"):
            take()
            args: list = []
            if peek() == "(":
                take()
                while True:
                    arg = take()
                    args.append(int(arg) if arg.isdigit() else arg)
                    if peek() != ",":
                        break
                    take(",")
                take(")")
            return FAtom(tok, True, tuple(args))
        raise FormulaParseError(f"unexpected token {tok!r}")

    out = parse_expr()
    if peek() != "<eof>":
        raise FormulaParseError(f"trailing input {peek()!r}")
    return out


# ---------------------------------------------------------------------------
# Proof trees

Sequent = tuple  # tuple[Formula, ...]


def print_sequent(seq: Sequent) -> str:
    return "|- " + ", ".join(print_formula(f) for f in seq)


class Proof:
    __slots__ = ()

    def premises(self) -> tuple:
        out = []
        for name in ("left", "right", "premise"):
            child = getattr(self, name, None)
            if child is not None:
                out.append(child)
        return tuple(out)

    def with_premises(self, premises: tuple) -> "Proof":
        raise NotImplementedError


@dataclass(frozen=True)
class PAxiom(Proof):
    formula: Formula

    def with_premises(self, premises):
        assert not premises
        return self


@dataclass(frozen=True)
class PCut(Proof):
    formula: Formula
    left: Proof
    right: Proof
    pos_left: int = -1
    pos_right: int = -1

    def with_premises(self, premises):
        return PCut(self.formula, premises[0], premises[1], self.pos_left, self.pos_right)


@dataclass(frozen=True)
class PTensorR(Proof):
    left: Proof
    right: Proof

    def with_premises(self, premises):
        return PTensorR(premises[0], premises[1])


@dataclass(frozen=True)
class PParR(Proof):
    premise: Proof

    def with_premises(self, premises):
        return PParR(premises[0])


@dataclass(frozen=True)
class PWithR(Proof):
    left: Proof
    right: Proof

    def with_premises(self, premises):
        return PWithR(premises[0], premises[1])


@dataclass(frozen=True)
class PPlusR1(Proof):
    premise: Proof
    other: Formula  # the absent right disjunct

    def with_premises(self, premises):
        return PPlusR1(premises[0], self.other)


@dataclass(frozen=True)
class PPlusR2(Proof):
    premise: Proof
    other: Formula  # the absent left disjunct

    def with_premises(self, premises):
        return PPlusR2(premises[0], self.other)


@dataclass(frozen=True)
class PExchange(Proof):
    perm: tuple  # conclusion[i] = premise_sequent[perm[i]]
    premise: Proof

    def with_premises(self, premises):
        return PExchange(self.perm, premises[0])


@dataclass(frozen=True)
class PWeak(Proof):
    formula: Formula  # introduces ?formula
    premise: Proof

    def with_premises(self, premises):
        return PWeak(self.formula, premises[0])


@dataclass(frozen=True)
class PDerel(Proof):
    premise: Proof

    def with_premises(self, premises):
        return PDerel(premises[0])


@dataclass(frozen=True)
class PContr(Proof):
    premise: Proof

    def with_premises(self, premises):
        return PContr(premises[0])


@dataclass(frozen=True)
class PProm(Proof):
    premise: Proof

    def with_premises(self, premises):
        return PProm(premises[0])


@dataclass(frozen=True)
class PForallR(Proof):
    var: str
    premise: Proof

    def with_premises(self, premises):
        return PForallR(self.var, premises[0])


@dataclass(frozen=True)
class PExistsR(Proof):
    value: int
    formula: Formula  # the existential conclusion formula
    premise: Proof

    def with_premises(self, premises):
        return PExistsR(self.value, self.formula, premises[0])


# ---------------------------------------------------------------------------
# Proof checking


@dataclass
class CheckResult:
    sequent: Optional[Sequent]
    error: Optional[str] = None
    path: tuple = ()

    @property
    def ok(self) -> bool:
        return self.error is None


def _resolve(pos: int, length: int) -> int:
    return length - 1 if pos == -1 else pos


def check_proof(p: Proof, path: tuple = ()) -> CheckResult:
    def fail(msg: str, at: tuple = path) -> CheckResult:
        return CheckResult(None, msg, at)

    if isinstance(p, PAxiom):
        return CheckResult((negate(p.formula), p.formula))
    if isinstance(p, PCut):
        left = check_proof(p.left, path + (0,))
        if not left.ok:
            return left
        right = check_proof(p.right, path + (1,))
        if not right.ok:
            return right
        ls, rs = left.sequent, right.sequent
        i = _resolve(p.pos_left, len(ls))
        j = _resolve(p.pos_right, len(rs))
        if not (0 <= i < len(ls)) or ls[i] != p.formula:
            return fail(
                f"cut formula {print_formula(p.formula)} not at position {i} of {print_sequent(ls)}"
            )
        if not (0 <= j < len(rs)) or rs[j] != negate(p.formula):
            return fail(
                f"dual cut formula not at position {j} of {print_sequent(rs)}"
            )
        conclusion = ls[:i] + ls[i + 1 :] + rs[:j] + rs[j + 1 :]
        if not conclusion:
            return fail("cut would produce an empty sequent")
        return CheckResult(conclusion)
    if isinstance(p, PTensorR):
        left = check_proof(p.left, path + (0,))
        if not left.ok:
            return left
        right = check_proof(p.right, path + (1,))
        if not right.ok:
            return right
        if not left.sequent or not right.sequent:
            return fail("tensor premises must be nonempty")
        a, b = left.sequent[-1], right.sequent[-1]
        return CheckResult(left.sequent[:-1] + right.sequent[:-1] + (FTensor(a, b),))
    if isinstance(p, PParR):
        sub = check_proof(p.premise, path + (0,))
        if not sub.ok:
            return sub
        if len(sub.sequent) < 2:
            return fail("par needs two formulas to merge")
        a, b = sub.sequent[-2], sub.sequent[-1]
        return CheckResult(sub.sequent[:-2] + (FPar(a, b),))
    if isinstance(p, PWithR):
        left = check_proof(p.left, path + (0,))
        if not left.ok:
            return left
        right = check_proof(p.right, path + (1,))
        if not right.ok:
            return right
        if not left.sequent or not right.sequent:
            return fail("with premises must be nonempty")
        if left.sequent[:-1] != right.sequent[:-1]:
            return fail("with premises must share their context")
        return CheckResult(
            left.sequent[:-1] + (FWith(left.sequent[-1], right.sequent[-1]),)
        )
    if isinstance(p, PPlusR1):
        sub = check_proof(p.premise, path + (0,))
        if not sub.ok:
            return sub
        if not sub.sequent:
            return fail("plus premise must be nonempty")
        return CheckResult(sub.sequent[:-1] + (FPlus(sub.sequent[-1], p.other),))
    if isinstance(p, PPlusR2):
        sub = check_proof(p.premise, path + (0,))
        if not sub.ok:
            return sub
        if not sub.sequent:
            return fail("plus premise must be nonempty")
        return CheckResult(sub.sequent[:-1] + (FPlus(p.other, sub.sequent[-1]),))
    if isinstance(p, PExchange):
        sub = check_proof(p.premise, path + (0,))
        if not sub.ok:
            return sub
        if sorted(p.perm) != list(range(len(sub.sequent))):
            return fail(f"invalid permutation {p.perm} for {print_sequent(sub.sequent)}")
        return CheckResult(tuple(sub.sequent[k] for k in p.perm))
    if isinstance(p, PWeak):
        sub = check_proof(p.premise, path + (0,))
        if not sub.ok:
            return sub
        return CheckResult(sub.sequent + (FQuest(p.formula),))
    if isinstance(p, PDerel):
        sub = check_proof(p.premise, path + (0,))
        if not sub.ok:
            return sub
        if not sub.sequent:
            return fail("dereliction premise must be nonempty")
        return CheckResult(sub.sequent[:-1] + (FQuest(sub.sequent[-1]),))
    if isinstance(p, PContr):
        sub = check_proof(p.premise, path + (0,))
        if not sub.ok:
            return sub
        if len(sub.sequent) < 2 or sub.sequent[-1] != sub.sequent[-2]:
            return fail("contraction needs two equal final formulas")
        if not isinstance(sub.sequent[-1], FQuest):
            return fail("contraction applies to ?-formulas only")
        return CheckResult(sub.sequent[:-1])
    if isinstance(p, PProm):
        sub = check_proof(p.premise, path + (0,))
        if not sub.ok:
            return sub
        if not sub.sequent:
            return fail("promotion premise must be nonempty")
        context = sub.sequent[:-1]
        if not all(isinstance(f, FQuest) for f in context):
            return fail("promotion context must consist of ?-formulas")
        return CheckResult(context + (FBang(sub.sequent[-1]),))
    if isinstance(p, PForallR):
        sub = check_proof(p.premise, path + (0,))
        if not sub.ok:
            return sub
        if not sub.sequent:
            return fail("forall premise must be nonempty")
        context = sub.sequent[:-1]
        for f in context:
            if p.var in free_value_vars_formula(f):
                return fail(f"value variable {p.var} free in the context")
        return CheckResult(context + (FForall(p.var, sub.sequent[-1]),))
    if isinstance(p, PExistsR):
        sub = check_proof(p.premise, path + (0,))
        if not sub.ok:
            return sub
        if not isinstance(p.formula, FExists):
            return fail("exists rule must carry an existential formula")
        if not sub.sequent:
            return fail("exists premise must be nonempty")
        expected = subst_value_formula(p.formula.body, p.formula.var, p.value)
        if sub.sequent[-1] != expected:
            return fail(
                f"premise ends with {print_formula(sub.sequent[-1])}, expected "
                f"{print_formula(expected)}"
            )
        return CheckResult(sub.sequent[:-1] + (p.formula,))
    return fail(f"unknown proof node {p!r}")


def conclusion(p: Proof) -> Sequent:
    res = check_proof(p)
    if not res.ok:
        raise ValueError(f"invalid proof at {res.path}: {res.error}")
    return res.sequent


def subst_value_proof(p: Proof, var: str, value: int) -> Proof:
    sub = lambda f: subst_value_formula(f, var, value)
    if isinstance(p, PAxiom):
        return PAxiom(sub(p.formula))
    if isinstance(p, PCut):
        return PCut(
            sub(p.formula),
            subst_value_proof(p.left, var, value),
            subst_value_proof(p.right, var, value),
            p.pos_left,
            p.pos_right,
        )
    if isinstance(p, PPlusR1):
        return PPlusR1(subst_value_proof(p.premise, var, value), sub(p.other))
    if isinstance(p, PPlusR2):
        return PPlusR2(subst_value_proof(p.premise, var, value), sub(p.other))
    if isinstance(p, PWeak):
        return PWeak(sub(p.formula), subst_value_proof(p.premise, var, value))
    if isinstance(p, PForallR):
        if p.var == var:
            return p
        return PForallR(p.var, subst_value_proof(p.premise, var, value))
    if isinstance(p, PExistsR):
        f = p.formula
        nf = f if f.var == var else FExists(f.var, subst_value_formula(f.body, var, value))
        return PExistsR(p.value, nf, subst_value_proof(p.premise, var, value))
    return p.with_premises(tuple(subst_value_proof(q, var, value) for q in p.premises()))


# ---------------------------------------------------------------------------
# Cut elimination


class NotReducible(Exception):
    pass


def _exchange_to(proof: Proof, length: int, order: list) -> Proof:
    if list(order) == list(range(length)):
        return proof
    return PExchange(tuple(order), proof)


def _intro_arity(p: Proof) -> Optional[int]:
    """Number of trailing premise formulas consumed by the last rule when
    it introduces one formula at the end; None when not of that shape."""
    if isinstance(p, (PParR, PContr)):
        return 2
    if isinstance(p, (PDerel, PForallR, PExistsR, PPlusR1, PPlusR2)):
        return 1
    if isinstance(p, PWeak):
        return 0
    return None


def reduce_cut(cut: PCut) -> Proof:
    return reduce_cut_kinded(cut)[0]


def reduce_cut_kinded(cut: PCut) -> tuple:
    """One standard cut-elimination step at this node, tagged with the
    step kind it performed."""
    ls = conclusion(cut.left)
    rs = conclusion(cut.right)
    i = _resolve(cut.pos_left, len(ls))
    j = _resolve(cut.pos_right, len(rs))
    target = ls[:i] + ls[i + 1 :] + rs[:j] + rs[j + 1 :]
    left, right = cut.left, cut.right

    # axiom cuts
    if isinstance(left, PAxiom):
        # leftover formula of the axiom goes to the front of the result
        order = [j] + [k for k in range(len(rs)) if k != j]
        return _exchange_to(right, len(rs), order), "axiom-left"
    if isinstance(right, PAxiom):
        order = [k for k in range(len(ls)) if k != i] + [i]
        return _exchange_to(left, len(ls), order), "axiom-right"

    # strip exchanges
    if isinstance(left, PExchange):
        inner_seq = conclusion(left.premise)
        i2 = left.perm[i]
        new_cut = PCut(cut.formula, left.premise, right, i2, j)
        # order of the new conclusion: (inner minus i2) ++ (rs minus j)
        inner_rank = {}
        rank = 0
        for m in range(len(inner_seq)):
            if m == i2:
                continue
            inner_rank[m] = rank
            rank += 1
        order = [inner_rank[left.perm[k]] for k in range(len(ls)) if k != i]
        order += [rank + m for m in range(len(rs) - 1)]
        return _exchange_to(new_cut, len(target), order), "exchange-left"
    if isinstance(right, PExchange):
        inner_seq = conclusion(right.premise)
        j2 = right.perm[j]
        new_cut = PCut(cut.formula, left, right.premise, i, j2)
        inner_rank = {}
        rank = 0
        for m in range(len(inner_seq)):
            if m == j2:
                continue
            inner_rank[m] = rank
            rank += 1
        order = list(range(len(ls) - 1))
        order += [len(ls) - 1 + inner_rank[right.perm[k]] for k in range(len(rs)) if k != j]
        return _exchange_to(new_cut, len(target), order), "exchange-right"

    left_principal = i == len(ls) - 1
    right_principal = j == len(rs) - 1

    if left_principal and right_principal:
        step = _principal(cut, left, right)
        if step is not None:
            return step

    if not left_principal:
        step = _push_left(cut, ls, rs, i, j)
        if step is not None:
            return step
    if not right_principal:
        step = _push_right(cut, ls, rs, i, j)
        if step is not None:
            return step
    raise NotReducible(
        f"no reduction for cut on {print_formula(cut.formula)} "
        f"(left {type(left).__name__}, right {type(right).__name__})"
    )


def _principal(cut: PCut, left: Proof, right: Proof) -> Optional[Proof]:
    c = cut.formula

    if isinstance(left, PTensorR) and isinstance(right, PParR):
        # C = A (x) B against A' par B'
        p1, p2, p3 = left.left, left.right, right.premise
        s1, s2, s3 = conclusion(p1), conclusion(p2), conclusion(p3)
        a, b = s1[-1], s2[-1]
        g1, g2, d = len(s1) - 1, len(s2) - 1, len(s3) - 2
        inner = PCut(a, p1, p3, len(s1) - 1, len(s3) - 2)
        outer = PCut(b, p2, inner, len(s2) - 1, -1)
        order = list(range(g2, g2 + g1)) + list(range(g2)) + list(range(g1 + g2, g1 + g2 + d))
        return _exchange_to(outer, g1 + g2 + d, order), "tensor-par"

    if isinstance(left, PParR) and isinstance(right, PTensorR):
        p1, p2, p3 = left.premise, right.left, right.right
        s1, s2, s3 = conclusion(p1), conclusion(p2), conclusion(p3)
        a, b = s1[-2], s1[-1]
        g, d1, d2 = len(s1) - 2, len(s2) - 1, len(s3) - 1
        c1 = PCut(b, p1, p3, len(s1) - 1, len(s3) - 1)
        c2 = PCut(a, c1, p2, g, len(s2) - 1)
        # c2 concludes Γ ++ Δ2 ++ Δ1; target is Γ ++ Δ1 ++ Δ2
        order = list(range(g)) + list(range(g + d2, g + d2 + d1)) + list(range(g, g + d2))
        return _exchange_to(c2, g + d1 + d2, order), "par-tensor"

    if isinstance(left, PWithR) and isinstance(right, PPlusR1):
        return PCut(conclusion(left.left)[-1], left.left, right.premise, -1, -1), "with-plus1"
    if isinstance(left, PWithR) and isinstance(right, PPlusR2):
        return PCut(conclusion(left.right)[-1], left.right, right.premise, -1, -1), "with-plus2"
    if isinstance(left, PPlusR1) and isinstance(right, PWithR):
        return PCut(conclusion(left.premise)[-1], left.premise, right.left, -1, -1), "plus1-with"
    if isinstance(left, PPlusR2) and isinstance(right, PWithR):
        return PCut(conclusion(left.premise)[-1], left.premise, right.right, -1, -1), "plus2-with"

    if isinstance(left, PProm) and isinstance(right, PWeak):
        s1 = conclusion(left.premise)
        context = s1[:-1]  # all ?-formulas
        out = right.premise
        for qf in context:
            out = PWeak(qf.body, out)
        d = len(conclusion(right.premise))
        m = len(context)
        order = list(range(d, d + m)) + list(range(d))
        return _exchange_to(out, d + m, order), "prom-weak"
    if isinstance(left, PWeak) and isinstance(right, PProm):
        s2 = conclusion(right.premise)
        context = s2[:-1]
        out = left.premise
        for qf in context:
            out = PWeak(qf.body, out)
        return out, "weak-prom"
    if isinstance(left, PProm) and isinstance(right, PDerel):
        a = conclusion(left.premise)[-1]
        return PCut(a, left.premise, right.premise, -1, -1), "prom-derel"
    if isinstance(left, PDerel) and isinstance(right, PProm):
        a = conclusion(left.premise)[-1]
        return PCut(a, left.premise, right.premise, -1, -1), "derel-prom"
    if isinstance(left, PProm) and isinstance(right, PContr):
        s1 = conclusion(left.premise)
        m = len(s1) - 1
        c1 = PCut(cut.formula, left, right.premise, -1, -1)
        c2 = PCut(cut.formula, left, c1, -1, -1)
        d = len(conclusion(right.premise)) - 2
        return _contract_pairs(c2, m, d, context_first=True), "prom-contr"
    if isinstance(left, PContr) and isinstance(right, PProm):
        s2 = conclusion(right.premise)
        m = len(s2) - 1
        sl = conclusion(left.premise)
        g = len(sl) - 2
        c1 = PCut(cut.formula, left.premise, right, -1, -1)
        c2 = PCut(cut.formula, c1, right, g, -1)
        return _contract_pairs(c2, m, g, context_first=False), "contr-prom"

    if isinstance(left, PForallR) and isinstance(right, PExistsR):
        v = right.value
        body = conclusion(left.premise)[-1]
        inst = subst_value_formula(body, left.var, v)
        return PCut(inst, subst_value_proof(left.premise, left.var, v), right.premise, -1, -1), "forall-exists"
    if isinstance(left, PExistsR) and isinstance(right, PForallR):
        v = left.value
        body = conclusion(right.premise)[-1]
        inst = conclusion(left.premise)[-1]
        return PCut(inst, left.premise, subst_value_proof(right.premise, right.var, v), -1, -1), "exists-forall"

    return None


def _contract_pairs(proof: Proof, m: int, rest: int, context_first: bool) -> Proof:
    """proof concludes two adjacent copies of an m-formula ?-context
    followed (context_first) or preceded by `rest` other formulas;
    contracts the copies pairwise and restores the context position."""
    if context_first:
        slots = [("a", k) for k in range(m)] + [("b", k) for k in range(m)] + [
            ("d", k) for k in range(rest)
        ]
    else:
        slots = [("d", k) for k in range(rest)] + [("a", k) for k in range(m)] + [
            ("b", k) for k in range(m)
        ]
    out = proof
    for k in range(m):
        p1 = slots.index(("a", k))
        p2 = slots.index(("b", k))
        order = [x for x in range(len(slots)) if x not in (p1, p2)] + [p1, p2]
        out = _exchange_to(out, len(slots), order)
        slots = [slots[x] for x in order]
        out = PContr(out)
        slots = slots[:-2] + [("a", k)]
    # now: d's in order followed by contracted context
    if context_first:
        order = list(range(rest, rest + m)) + list(range(rest))
    else:
        order = list(range(len(slots)))
    return _exchange_to(out, len(slots), order)


def _reapply_tail(rule: Proof, new_premise: Proof):
    """Rebuilds a tail-introducing rule over a replacement premise."""
    if isinstance(rule, PParR):
        return PParR(new_premise)
    if isinstance(rule, PDerel):
        return PDerel(new_premise)
    if isinstance(rule, PContr):
        return PContr(new_premise)
    if isinstance(rule, PWeak):
        return PWeak(rule.formula, new_premise)
    if isinstance(rule, PForallR):
        return PForallR(rule.var, new_premise)
    if isinstance(rule, PExistsR):
        return PExistsR(rule.value, rule.formula, new_premise)
    if isinstance(rule, PPlusR1):
        return PPlusR1(new_premise, rule.other)
    if isinstance(rule, PPlusR2):
        return PPlusR2(new_premise, rule.other)
    raise NotReducible(f"cannot push a cut through {type(rule).__name__}")


def _push_left(cut: PCut, ls, rs, i: int, j: int) -> Optional[Proof]:
    left, right = cut.left, cut.right
    dlen = len(rs) - 1
    arity = _intro_arity(left)
    if arity is not None:
        gg = len(ls) - 1
        premise = left.premise
        inner = PCut(cut.formula, premise, right, i, j)
        # inner: (Γ minus i) ++ tail ++ Δ'; move the tail to the end
        order = (
            list(range(gg - 1))
            + list(range(gg - 1 + arity, gg - 1 + arity + dlen))
            + list(range(gg - 1, gg - 1 + arity))
        )
        moved = _exchange_to(inner, gg - 1 + arity + dlen, order)
        reapplied = _reapply_tail(left, moved)
        # reapplied: (Γ minus i) ++ Δ' ++ intro; target wants intro before Δ'
        order2 = list(range(gg - 1)) + [gg - 1 + dlen] + list(range(gg - 1, gg - 1 + dlen))
        return _exchange_to(reapplied, gg + dlen, order2), f"push-left-{type(left).__name__[1:].lower()}"
    if isinstance(left, PWithR):
        gg = len(ls) - 1
        outs = []
        for prem in (left.left, left.right):
            inner = PCut(cut.formula, prem, right, i, j)
            order = (
                list(range(gg - 1))
                + list(range(gg, gg + dlen))
                + [gg - 1]
            )
            outs.append(_exchange_to(inner, gg + dlen, order))
        reapplied = PWithR(outs[0], outs[1])
        order2 = list(range(gg - 1)) + [gg - 1 + dlen] + list(range(gg - 1, gg - 1 + dlen))
        return _exchange_to(reapplied, gg + dlen, order2), "push-left-withr"
    if isinstance(left, PTensorR):
        s1 = conclusion(left.left)
        s2 = conclusion(left.right)
        g1, g2 = len(s1) - 1, len(s2) - 1
        if i < g1:
            inner = PCut(cut.formula, left.left, right, i, j)
            # (Γ1 minus i) ++ [A] ++ Δ'; move A to the end
            order = list(range(g1 - 1)) + list(range(g1, g1 + dlen)) + [g1 - 1]
            moved = _exchange_to(inner, g1 + dlen, order)
            reapplied = PTensorR(moved, left.right)
            # (Γ1-i) ++ Δ' ++ Γ2 ++ [AxB]; target (Γ1-i) ++ Γ2 ++ [AxB] ++ Δ'
            n = g1 - 1 + dlen + g2 + 1
            order2 = (
                list(range(g1 - 1))
                + list(range(g1 - 1 + dlen, g1 - 1 + dlen + g2 + 1))
                + list(range(g1 - 1, g1 - 1 + dlen))
            )
            return _exchange_to(reapplied, n, order2), "push-left-tensorr"
        if g1 <= i < g1 + g2:
            i2 = i - g1
            inner = PCut(cut.formula, left.right, right, i2, j)
            order = list(range(g2 - 1)) + list(range(g2, g2 + dlen)) + [g2 - 1]
            moved = _exchange_to(inner, g2 + dlen, order)
            reapplied = PTensorR(left.left, moved)
            # Γ1 ++ (Γ2-i) ++ Δ' ++ [AxB]; target Γ1 ++ (Γ2-i) ++ [AxB] ++ Δ'
            n = g1 + g2 - 1 + dlen + 1
            order2 = (
                list(range(g1 + g2 - 1))
                + [n - 1]
                + list(range(g1 + g2 - 1, n - 1))
            )
            return _exchange_to(reapplied, n, order2), "push-left-tensorr"
    return None


def _push_right(cut: PCut, ls, rs, i: int, j: int) -> Optional[Proof]:
    left, right = cut.left, cut.right
    glen = len(ls) - 1
    arity = _intro_arity(right)
    if arity is not None:
        premise = right.premise
        inner = PCut(cut.formula, left, premise, i, j)
        # inner: Γ' ++ (Θ minus j) ++ tail, tail already last
        return _reapply_tail(right, inner), f"push-right-{type(right).__name__[1:].lower()}"
    if isinstance(right, PWithR):
        outs = []
        for prem in (right.left, right.right):
            outs.append(PCut(cut.formula, left, prem, i, j))
        return PWithR(outs[0], outs[1]), "push-right-withr"
    if isinstance(right, PTensorR):
        s2 = conclusion(right.left)
        s3 = conclusion(right.right)
        d1, d2 = len(s2) - 1, len(s3) - 1
        if j < d1:
            inner = PCut(cut.formula, left, right.left, i, j)
            return PTensorR(inner, right.right), "push-right-tensorr"
        if d1 <= j < d1 + d2:
            inner = PCut(cut.formula, left, right.right, i, j - d1)
            reapplied = PTensorR(right.left, inner)
            # Δ1 ++ Γ' ++ (Δ2-j) ++ [AxB]; target Γ' ++ Δ1 ++ (Δ2-j) ++ [AxB]
            n = d1 + glen + d2 - 1 + 1
            order = (
                list(range(d1, d1 + glen))
                + list(range(d1))
                + list(range(d1 + glen, n))
            )
            return _exchange_to(reapplied, n, order), "push-right-tensorr"
    return None


# ---------------------------------------------------------------------------
# Driving cut elimination


def has_cut(p: Proof) -> bool:
    if isinstance(p, PCut):
        return True
    return any(has_cut(q) for q in p.premises())


def find_redex(p: Proof, path: tuple = ()) -> Optional[tuple]:
    """Leftmost-innermost reducible cut: premises first, then this node."""
    for k, q in enumerate(p.premises()):
        found = find_redex(q, path + (k,))
        if found is not None:
            return found
    if isinstance(p, PCut):
        try:
            reduce_cut(p)
            return path
        except NotReducible:
            return None
    return None


def proof_at(p: Proof, path: tuple) -> Proof:
    for k in path:
        p = p.premises()[k]
    return p


def replace_at(p: Proof, path: tuple, repl: Proof) -> Proof:
    if not path:
        return repl
    k = path[0]
    premises = list(p.premises())
    premises[k] = replace_at(premises[k], path[1:], repl)
    return p.with_premises(tuple(premises))


def cut_step(p: Proof, path: tuple) -> Proof:
    node = proof_at(p, path)
    if not isinstance(node, PCut):
        raise NotReducible(f"no cut at path {path}")
    return replace_at(p, path, reduce_cut(node))


def cut_step_kinded(p: Proof, path: tuple) -> tuple:
    node = proof_at(p, path)
    if not isinstance(node, PCut):
        raise NotReducible(f"no cut at path {path}")
    reduced, kind = reduce_cut_kinded(node)
    return replace_at(p, path, reduced), kind


@dataclass
class ElimResult:
    proof: Proof
    steps: int
    status: str  # "done" | "bound" | "stuck"
    trail: list = field(default_factory=list)  # intermediate proofs
    kinds: list = field(default_factory=list)  # step kind per transition


def cut_eliminate(p: Proof, step_bound: int = 200, keep_trail: bool = False) -> ElimResult:
    steps = 0
    trail = [p] if keep_trail else []
    kinds: list = []
    current = p
    while has_cut(current):
        if steps >= step_bound:
            return ElimResult(current, steps, "bound", trail, kinds)
        path = find_redex(current)
        if path is None:
            return ElimResult(current, steps, "stuck", trail, kinds)
        current, kind = cut_step_kinded(current, path)
        steps += 1
        kinds.append(kind)
        if keep_trail:
            trail.append(current)
    return ElimResult(current, steps, "done", trail, kinds)


# ---------------------------------------------------------------------------
# JSON serialization


def proof_to_json(p: Proof) -> dict:
    if isinstance(p, PAxiom):
        return {"rule": "axiom", "formula": print_formula(p.formula)}
    if isinstance(p, PCut):
        return {
            "rule": "cut",
            "formula": print_formula(p.formula),
            "pos_left": p.pos_left,
            "pos_right": p.pos_right,
            "premises": [proof_to_json(p.left), proof_to_json(p.right)],
        }
    if isinstance(p, PTensorR):
        return {"rule": "tensor", "premises": [proof_to_json(p.left), proof_to_json(p.right)]}
    if isinstance(p, PParR):
        return {"rule": "par", "premises": [proof_to_json(p.premise)]}
    if isinstance(p, PWithR):
        return {"rule": "with", "premises": [proof_to_json(p.left), proof_to_json(p.right)]}
    if isinstance(p, PPlusR1):
        return {
            "rule": "plus1",
            "other": print_formula(p.other),
            "premises": [proof_to_json(p.premise)],
        }
    if isinstance(p, PPlusR2):
        return {
            "rule": "plus2",
            "other": print_formula(p.other),
            "premises": [proof_to_json(p.premise)],
        }
    if isinstance(p, PExchange):
        return {
            "rule": "exchange",
            "perm": list(p.perm),
            "premises": [proof_to_json(p.premise)],
        }
    if isinstance(p, PWeak):
        return {
            "rule": "weakening",
            "formula": print_formula(p.formula),
            "premises": [proof_to_json(p.premise)],
        }
    if isinstance(p, PDerel):
        return {"rule": "dereliction", "premises": [proof_to_json(p.premise)]}
    if isinstance(p, PContr):
        return {"rule": "contraction", "premises": [proof_to_json(p.premise)]}
    if isinstance(p, PProm):
        return {"rule": "promotion", "premises": [proof_to_json(p.premise)]}
    if isinstance(p, PForallR):
        return {"rule": "forall", "var": p.var, "premises": [proof_to_json(p.premise)]}
    if isinstance(p, PExistsR):
        return {
            "rule": "exists",
            "value": p.value,
            "formula": print_formula(p.formula),
            "premises": [proof_to_json(p.premise)],
        }
    raise TypeError(f"not a proof: {p!r}")


def proof_from_json(data: dict) -> Proof:
    rule = data.get("rule")
    prems = [proof_from_json(q) for q in data.get("premises", [])]
    if rule == "axiom":
        return PAxiom(parse_formula(data["formula"]))
    if rule == "cut":
        return PCut(
            parse_formula(data["formula"]),
            prems[0],
            prems[1],
            data.get("pos_left", -1),
            data.get("pos_right", -1),
        )
    if rule == "tensor":
        return PTensorR(prems[0], prems[1])
    if rule == "par":
        return PParR(prems[0])
    if rule == "with":
        return PWithR(prems[0], prems[1])
    if rule == "plus1":
        return PPlusR1(prems[0], parse_formula(data["other"]))
    if rule == "plus2":
        return PPlusR2(prems[0], parse_formula(data["other"]))
    if rule == "exchange":
        return PExchange(tuple(data["perm"]), prems[0])
    if rule == "weakening":
        return PWeak(parse_formula(data["formula"]), prems[0])
    if rule == "dereliction":
        return PDerel(prems[0])
    if rule == "contraction":
        return PContr(prems[0])
    if rule == "promotion":
        return PProm(prems[0])
    if rule == "forall":
        return PForallR(data["var"], prems[0])
    if rule == "exists":
        return PExistsR(data["value"], parse_formula(data["formula"]), prems[0])
    raise ValueError(f"unknown proof rule {rule!r}")


def load_proof(path: str) -> Proof:
    with open(path, "r", encoding="utf-8") as fh:
        return proof_from_json(json.load(fh))
