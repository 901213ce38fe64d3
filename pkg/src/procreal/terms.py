"""Guarded process terms: AST, canonical printing, substitution,
well-formedness, syntactic sorts and value-passing expansion.

Terms are immutable.  Canonical printed form doubles as the state key in
the transition engine, so printing must be deterministic: actions print
their labels sorted, sums print their branches in construction order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .names import (
    Action,
    Label,
    Name,
    REGISTRY,
    Renaming,
    RestrictionSet,
    TAU,
    action_key,
    print_action,
    print_name,
    positive,
)


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Prefix(Term):
    action: Action
    cont: Term


@dataclass(frozen=True)
class Sum(Term):
    branches: tuple  # tuple[tuple[Action, Term], ...]


@dataclass(frozen=True)
class Par(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Restrict(Term):
    proc: Term
    labels: RestrictionSet


@dataclass(frozen=True)
class Rename(Term):
    proc: Term
    ren: Renaming


@dataclass(frozen=True)
class Var(Term):
    ident: str


@dataclass(frozen=True)
class Rec(Term):
    var: str
    body: Term


# Value expressions inside value-passing prefixes: either a bound
# variable (str) or an integer literal.
ValueExpr = Union[int, str]


@dataclass(frozen=True)
class InputPrefix(Term):
    chan: Name
    var: str
    body: Term


@dataclass(frozen=True)
class OutputPrefix(Term):
    chan: Name
    value: ValueExpr
    body: Term


NIL: Term = Sum(())


def rename(proc: Term, ren: Renaming) -> Term:
    """Renaming constructor that fuses nested renamings and drops
    identities, keeping unfolded state keys canonical."""
    from .names import IdentityRenaming, compose_renamings

    if isinstance(proc, Rename):
        return rename(proc.proc, compose_renamings(ren, proc.ren))
    if isinstance(ren, IdentityRenaming):
        return proc
    return Rename(proc, ren)


def restrict(proc: Term, labels: RestrictionSet) -> Term:
    """Restriction constructor that fuses nested restrictions into one
    canonical union, keeping unfolded state keys canonical."""
    from .names import union_restriction

    if isinstance(proc, Restrict):
        return Restrict(proc.proc, union_restriction(labels, proc.labels))
    return Restrict(proc, labels)


# ---------------------------------------------------------------------------
# Printing


def _print(t: Term, prec: int) -> str:
    # precedence: 0 sum, 1 par, 2 prefix, 3 postfix/atom
    if isinstance(t, Sum):
        if not t.branches:
            return "0"
        s = " + ".join(print_action(a) + "." + _print(p, 2) for a, p in t.branches)
        return f"({s})" if prec > 0 else s
    if isinstance(t, Par):
        # parallel parses left-associative; parenthesize a nested right
        s = _print(t.left, 1) + " | " + _print(t.right, 2)
        return f"({s})" if prec > 1 else s
    if isinstance(t, Prefix):
        s = print_action(t.action) + "." + _print(t.cont, 2)
        return f"({s})" if prec > 2 else s
    if isinstance(t, InputPrefix):
        s = f"in {print_name(t.chan)}({t.var}). " + _print(t.body, 2)
        return f"({s})" if prec > 2 else s
    if isinstance(t, OutputPrefix):
        s = f"out {print_name(t.chan)}({t.value}). " + _print(t.body, 2)
        return f"({s})" if prec > 2 else s
    if isinstance(t, Restrict):
        return _print(t.proc, 3) + " \\ " + t.labels.describe()
    if isinstance(t, Rename):
        return _print(t.proc, 3) + " [" + t.ren.describe() + "]"
    if isinstance(t, Var):
        return t.ident
    if isinstance(t, Rec):
        s = f"rec {t.var}. " + _print(t.body, 2)
        return f"({s})" if prec > 2 else s
    raise TypeError(f"not a term: {t!r}")


def print_term(t: Term) -> str:
    return _print(t, 0)


def term_key(t: Term) -> str:
    return print_term(t)


def term_depth(t: Term) -> int:
    """Maximum constructor nesting, computed iteratively.  Exploration
    engines cap this: unfoldings that stack wrappers without bound (for
    example a restriction under a partial renaming under recursion) have
    no finite state space, and beyond the cap they are reported as
    budget exhaustion instead of overflowing the interpreter."""
    best = 0
    stack = [(t, 1)]
    while stack:
        node, d = stack.pop()
        if d > best:
            best = d
        if isinstance(node, Prefix):
            stack.append((node.cont, d + 1))
        elif isinstance(node, Sum):
            stack.extend((p, d + 1) for _, p in node.branches)
        elif isinstance(node, Par):
            stack.append((node.left, d + 1))
            stack.append((node.right, d + 1))
        elif isinstance(node, (Restrict, Rename)):
            stack.append((node.proc, d + 1))
        elif isinstance(node, Rec):
            stack.append((node.body, d + 1))
        elif isinstance(node, (InputPrefix, OutputPrefix)):
            stack.append((node.body, d + 1))
    return best


# ---------------------------------------------------------------------------
# Substitution


def substitute_var(t: Term, ident: str, repl: Term) -> Term:
    if isinstance(t, Var):
        return repl if t.ident == ident else t
    if isinstance(t, Rec):
        if t.var == ident:
            return t
        return Rec(t.var, substitute_var(t.body, ident, repl))
    if isinstance(t, Prefix):
        return Prefix(t.action, substitute_var(t.cont, ident, repl))
    if isinstance(t, Sum):
        return Sum(tuple((a, substitute_var(p, ident, repl)) for a, p in t.branches))
    if isinstance(t, Par):
        return Par(substitute_var(t.left, ident, repl), substitute_var(t.right, ident, repl))
    if isinstance(t, Restrict):
        return Restrict(substitute_var(t.proc, ident, repl), t.labels)
    if isinstance(t, Rename):
        return Rename(substitute_var(t.proc, ident, repl), t.ren)
    if isinstance(t, InputPrefix):
        return InputPrefix(t.chan, t.var, substitute_var(t.body, ident, repl))
    if isinstance(t, OutputPrefix):
        return OutputPrefix(t.chan, t.value, substitute_var(t.body, ident, repl))
    raise TypeError(f"not a term: {t!r}")


def substitute_value(t: Term, var: str, value: int) -> Term:
    if isinstance(t, InputPrefix):
        if t.var == var:
            return t
        return InputPrefix(t.chan, t.var, substitute_value(t.body, var, value))
    if isinstance(t, OutputPrefix):
        v = value if t.value == var else t.value
        return OutputPrefix(t.chan, v, substitute_value(t.body, var, value))
    if isinstance(t, Prefix):
        return Prefix(t.action, substitute_value(t.cont, var, value))
    if isinstance(t, Sum):
        return Sum(tuple((a, substitute_value(p, var, value)) for a, p in t.branches))
    if isinstance(t, Par):
        return Par(substitute_value(t.left, var, value), substitute_value(t.right, var, value))
    if isinstance(t, Restrict):
        return Restrict(substitute_value(t.proc, var, value), t.labels)
    if isinstance(t, Rename):
        return Rename(substitute_value(t.proc, var, value), t.ren)
    if isinstance(t, Rec):
        return Rec(t.var, substitute_value(t.body, var, value))
    if isinstance(t, Var):
        return t
    raise TypeError(f"not a term: {t!r}")


def free_process_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset([t.ident])
    if isinstance(t, Rec):
        return free_process_vars(t.body) - {t.var}
    if isinstance(t, Prefix):
        return free_process_vars(t.cont)
    if isinstance(t, Sum):
        out = frozenset()
        for _, p in t.branches:
            out |= free_process_vars(p)
        return out
    if isinstance(t, Par):
        return free_process_vars(t.left) | free_process_vars(t.right)
    if isinstance(t, (Restrict, Rename)):
        return free_process_vars(t.proc)
    if isinstance(t, (InputPrefix, OutputPrefix)):
        return free_process_vars(t.body)
    raise TypeError(f"not a term: {t!r}")


def free_value_vars(t: Term) -> frozenset:
    if isinstance(t, InputPrefix):
        return free_value_vars(t.body) - {t.var}
    if isinstance(t, OutputPrefix):
        own = frozenset([t.value]) if isinstance(t.value, str) else frozenset()
        return own | free_value_vars(t.body)
    if isinstance(t, Prefix):
        return free_value_vars(t.cont)
    if isinstance(t, Sum):
        out = frozenset()
        for _, p in t.branches:
            out |= free_value_vars(p)
        return out
    if isinstance(t, Par):
        return free_value_vars(t.left) | free_value_vars(t.right)
    if isinstance(t, (Restrict, Rename)):
        return free_value_vars(t.proc)
    if isinstance(t, Rec):
        return free_value_vars(t.body)
    if isinstance(t, Var):
        return frozenset()
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Sorts: sound over-approximation of the labels a term can ever perform.


class SortInfo:
    pass


@dataclass(frozen=True)
class FiniteSort(SortInfo):
    labels: frozenset

    def __str__(self):
        return "{" + ",".join(str(l) for l in sorted(self.labels, key=lambda x: (x.code, x.neg))) + "}"


@dataclass(frozen=True)
class AllSort(SortInfo):
    """Symbolic bound: the sort may touch the whole label space.

    Produced when a renaming sits over a recursion variable (iterated
    relabelling) or for unexpanded value-passing prefixes.
    """

    def __str__(self):
        return "all"


ALL_SORT = AllSort()


def _sort(t: Term) -> tuple[SortInfo, bool]:
    """Returns (sort, touches_free_var)."""
    if isinstance(t, Sum):
        labs: set = set()
        touched = False
        for a, p in t.branches:
            labs |= a
            sub, tv = _sort(p)
            touched = touched or tv
            if isinstance(sub, AllSort):
                return ALL_SORT, touched
            labs |= sub.labels
        return FiniteSort(frozenset(labs)), touched
    if isinstance(t, Prefix):
        sub, tv = _sort(t.cont)
        if isinstance(sub, AllSort):
            return ALL_SORT, tv
        return FiniteSort(frozenset(t.action) | sub.labels), tv
    if isinstance(t, Par):
        sl, tl = _sort(t.left)
        sr, tr = _sort(t.right)
        if isinstance(sl, AllSort) or isinstance(sr, AllSort):
            return ALL_SORT, tl or tr
        return FiniteSort(sl.labels | sr.labels), tl or tr
    if isinstance(t, Restrict):
        sub, tv = _sort(t.proc)
        if isinstance(sub, AllSort):
            return ALL_SORT, tv
        kept = frozenset(
            l for l in sub.labels
            if not (t.labels.contains_label(l) or t.labels.contains_label(l.dual()))
        )
        return FiniteSort(kept), tv
    if isinstance(t, Rename):
        sub, tv = _sort(t.proc)
        if tv or isinstance(sub, AllSort):
            # iterated relabelling under recursion: no finite bound
            return ALL_SORT, tv
        out = []
        for l in sub.labels:
            img = t.ren.apply_label(l)
            if img is None:
                return ALL_SORT, tv
            out.append(img)
        return FiniteSort(frozenset(out)), tv
    if isinstance(t, Var):
        return FiniteSort(frozenset()), True
    if isinstance(t, Rec):
        sub, _ = _sort(t.body)
        return sub, False
    if isinstance(t, (InputPrefix, OutputPrefix)):
        return ALL_SORT, False
    raise TypeError(f"not a term: {t!r}")


def sort_of(t: Term) -> SortInfo:
    return _sort(t)[0]


def sort_labels(t: Term) -> Optional[frozenset]:
    """Finite sort label set, or None when only the symbolic bound exists."""
    s = sort_of(t)
    return s.labels if isinstance(s, FiniteSort) else None


# ---------------------------------------------------------------------------
# Well-formedness


def _guarded(t: Term, var: str) -> bool:
    """Every free occurrence of `var` lies beneath a prefix or guard."""
    if isinstance(t, Var):
        return t.ident != var
    if isinstance(t, (Prefix, Sum, InputPrefix, OutputPrefix)):
        return True
    if isinstance(t, Par):
        return _guarded(t.left, var) and _guarded(t.right, var)
    if isinstance(t, (Restrict, Rename)):
        return _guarded(t.proc, var)
    if isinstance(t, Rec):
        if t.var == var:
            return True
        return _guarded(t.body, var)
    raise TypeError(f"not a term: {t!r}")


def well_formed(t: Term, allow_free: frozenset = frozenset()) -> list[str]:
    """Diagnostics list; empty means well-formed."""
    diags: list[str] = []

    def walk(u: Term, bound: frozenset, vbound: frozenset):
        if isinstance(u, Sum):
            for a, p in u.branches:
                if a == TAU:
                    diags.append(f"tau guard inside a sum: {print_term(u)}")
                walk(p, bound, vbound)
        elif isinstance(u, Prefix):
            walk(u.cont, bound, vbound)
        elif isinstance(u, Par):
            walk(u.left, bound, vbound)
            walk(u.right, bound, vbound)
        elif isinstance(u, Restrict):
            walk(u.proc, bound, vbound)
        elif isinstance(u, Rename):
            sub = sort_of(u.proc)
            if not isinstance(sub, AllSort):
                for lab in sub.labels:
                    if u.ren.apply_label(lab) is None:
                        diags.append(
                            f"label {lab} of sort outside domain of renaming {u.ren}"
                        )
            # symbolic sort bound: coverage cannot be decided here; the
            # engine raises a domain error if a step actually escapes
            walk(u.proc, bound, vbound)
        elif isinstance(u, Var):
            if u.ident not in bound and u.ident not in allow_free:
                diags.append(f"unbound process variable {u.ident}")
        elif isinstance(u, Rec):
            if not _guarded(u.body, u.var):
                diags.append(f"unguarded recursion on {u.var} in {print_term(u)}")
            walk(u.body, bound | {u.var}, vbound)
        elif isinstance(u, InputPrefix):
            walk(u.body, bound, vbound | {u.var})
        elif isinstance(u, OutputPrefix):
            if isinstance(u.value, str) and u.value not in vbound:
                diags.append(f"unbound value variable {u.value}")
            walk(u.body, bound, vbound)
        else:
            diags.append(f"unknown term node {u!r}")

    walk(t, frozenset(), frozenset())
    return diags


# ---------------------------------------------------------------------------
# Value-passing expansion


def value_name(chan: Name, v: int) -> Name:
    base = REGISTRY.ident_of(chan.code) or print_name(chan)
    return REGISTRY.intern(f"{base}_{v}")


def expand_values(t: Term, values: tuple) -> Term:
    """Compiles value-passing prefixes into finite sums over the domain."""
    if not values:
        raise ValueError("empty value domain")
    vals = tuple(values)

    def go(u: Term) -> Term:
        if isinstance(u, InputPrefix):
            branches = tuple(
                (
                    frozenset([positive(value_name(u.chan, v))]),
                    go(substitute_value(u.body, u.var, v)),
                )
                for v in vals
            )
            return Sum(branches)
        if isinstance(u, OutputPrefix):
            if isinstance(u.value, str):
                raise ValueError(f"unresolved value variable {u.value}")
            if u.value not in vals:
                raise ValueError(f"value {u.value} outside the declared domain")
            lab = Label(value_name(u.chan, u.value).code, True)
            return Prefix(frozenset([lab]), go(u.body))
        if isinstance(u, Prefix):
            return Prefix(u.action, go(u.cont))
        if isinstance(u, Sum):
            return Sum(tuple((a, go(p)) for a, p in u.branches))
        if isinstance(u, Par):
            return Par(go(u.left), go(u.right))
        if isinstance(u, Restrict):
            return Restrict(go(u.proc), u.labels)
        if isinstance(u, Rename):
            return Rename(go(u.proc), u.ren)
        if isinstance(u, Rec):
            return Rec(u.var, go(u.body))
        if isinstance(u, Var):
            return u
        raise TypeError(f"not a term: {u!r}")

    return go(t)
