"""Command-line front end.

Exit codes: 0 success/equal/pass, 1 distinguished/fail/no, 2
unknown/budget exhausted, 3 usage or parse errors.  Output is
deterministic for fixed inputs and seed: collections print sorted and
reports are dumped with stable key order.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .equivalence import BudgetExceeded, failures_bounded, failures_equiv, perp, weak_bisim
from .exercises import run_exercises
from .extraction import extract, verify_cut_soundness
from .logic import (
    check_proof,
    cut_eliminate,
    cut_step_kinded,
    find_redex,
    has_cut,
    load_proof,
    parse_formula,
    print_sequent,
)
from .names import REGISTRY
from .parsing import ParseError, parse_program
from .semantics import ExplorationBudget, build_lts
from .semtypes import SemType, formula_to_type, partition, realizes_pos
from .terms import InputPrefix, OutputPrefix, Term, expand_values, print_term, well_formed

EXIT_OK = 0
EXIT_DISTINGUISHED = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3


class CliError(Exception):
    pass


def _has_value_prefixes(t) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, (InputPrefix, OutputPrefix)):
            return True
        for name in ("cont", "body", "proc", "left", "right"):
            child = getattr(u, name, None)
            if child is not None:
                stack.append(child)
        if hasattr(u, "branches"):
            stack.extend(p for _, p in u.branches)
    return False


def load_term(path: str, values: tuple) -> Term:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    try:
        bindings, main = parse_program(text)
    except ParseError as exc:
        raise CliError(f"{path}: {exc}")
    if main is None:
        raise CliError(f"{path}: no term (bind `main = ...;` or end with a bare term)")
    if _has_value_prefixes(main):
        if not values:
            raise CliError(f"{path}: value-passing prefixes need --values")
        main = expand_values(main, values)
    diags = well_formed(main)
    if diags:
        raise CliError(f"{path}: " + "; ".join(diags))
    return main


def _budget(args) -> ExplorationBudget:
    return ExplorationBudget(max_states=args.max_states)


def _emit(data, args) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        _emit_text(data)


def _emit_text(data, indent: int = 0) -> None:
    pad = "  " * indent
    if isinstance(data, dict):
        for key in data:
            value = data[key]
            if isinstance(value, (dict, list)):
                print(f"{pad}{key}:")
                _emit_text(value, indent + 1)
            else:
                print(f"{pad}{key}: {value}")
    elif isinstance(data, list):
        for item in data:
            if isinstance(item, (dict, list)):
                _emit_text(item, indent)
                print()
            else:
                print(f"{pad}{item}")
    else:
        print(f"{pad}{data}")


def cmd_lts(args) -> int:
    term = load_term(args.term, args.values)
    lts = build_lts(term, _budget(args))
    if args.format == "dot":
        print(lts.to_dot())
    else:
        print(json.dumps(lts.to_json(), indent=2, sort_keys=True))
    if not lts.complete:
        print("state budget exhausted; graph is partial", file=sys.stderr)
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_failures(args) -> int:
    term = load_term(args.term, args.values)
    try:
        fs = failures_bounded(term, args.depth, _budget(args))
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    print(json.dumps(fs.to_json(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_equiv(args) -> int:
    t1 = load_term(args.left, args.values)
    t2 = load_term(args.right, args.values)
    if args.mode == "weak-bisim":
        res = weak_bisim(t1, t2, _budget(args))
    else:
        res = failures_equiv(t1, t2, _budget(args), args.depth)
    out = {"verdict": res.verdict}
    if res.witness:
        out["witness"] = res.witness
    if res.detail:
        out["detail"] = res.detail
    _emit(out, args)
    return {"equal": EXIT_OK, "distinguished": EXIT_DISTINGUISHED}.get(res.verdict, EXIT_UNKNOWN)


def cmd_perp(args) -> int:
    t1 = load_term(args.left, args.values)
    t2 = load_term(args.right, args.values)
    verdict = perp(t1, t2, _budget(args))
    _emit({"perp": verdict}, args)
    return {"yes": EXIT_OK, "no": EXIT_DISTINGUISHED}.get(verdict, EXIT_UNKNOWN)


def _load_atom_env(path: Optional[str]) -> dict:
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    return {
        ident: frozenset(REGISTRY.intern(n) for n in names)
        for ident, names in raw.items()
    }


def cmd_extract(args) -> int:
    proof = load_proof(args.proof)
    res = check_proof(proof)
    if not res.ok:
        print(f"invalid proof at {res.path}: {res.error}", file=sys.stderr)
        return EXIT_USAGE
    env = _load_atom_env(args.atoms)
    term = extract(proof, env, args.values)
    text = print_term(term)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(f"conclusion: {print_sequent(res.sequent)}", file=sys.stderr)
    return EXIT_OK


def cmd_verify_cut(args) -> int:
    proof = load_proof(args.proof)
    res = check_proof(proof)
    if not res.ok:
        print(f"invalid proof at {res.path}: {res.error}", file=sys.stderr)
        return EXIT_USAGE
    env = _load_atom_env(args.atoms)
    budget = _budget(args)
    steps = []
    current = proof
    overall = "pass"
    count = 0
    while has_cut(current) and count < args.step_bound:
        path = find_redex(current)
        if path is None:
            steps.append({"step": count, "kind": "stuck", "verdict": "unknown"})
            overall = "unknown" if overall == "pass" else overall
            break
        after, kind = cut_step_kinded(current, path)
        report = verify_cut_soundness(current, after, env, args.values, budget, args.depth)
        entry = {"step": count, "kind": kind, "verdict": report.verdict}
        if report.witness:
            entry["witness"] = report.witness
        if report.detail:
            entry["detail"] = report.detail
        steps.append(entry)
        if report.verdict == "fail":
            overall = "fail"
        elif report.verdict == "unknown" and overall == "pass":
            overall = "unknown"
        current = after
        count += 1
    out = {
        "conclusion": print_sequent(res.sequent),
        "steps": steps,
        "cut_free": not has_cut(current),
        "overall": overall,
    }
    _emit(out, args)
    if args.format != "json":
        for entry in steps:
            print(f"step {entry['step']:3d} {entry['kind']:<22} {entry['verdict']}")
    return {"pass": EXIT_OK, "fail": EXIT_DISTINGUISHED}.get(overall, EXIT_UNKNOWN)


def _load_type_env(path: str, budget: ExplorationBudget):
    from .parsing import parse_term

    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    atom_types = {}
    for ident, spec in raw.get("atoms", {}).items():
        alphabet = frozenset(REGISTRY.intern(n) for n in spec.get("alphabet", [ident]))
        pos = partition([parse_term(s) for s in spec["pos"]], budget)
        neg = partition([parse_term(s) for s in spec["neg"]], budget)
        atom_types[ident] = SemType(pos, neg, alphabet)
    values = tuple(raw.get("values", ()))
    return atom_types, values


def cmd_check_type(args) -> int:
    term = load_term(args.term, args.values)
    budget = _budget(args)
    atom_types, env_values = _load_type_env(args.type_env, budget)
    values = args.values or env_values
    formula = parse_formula(args.type)
    ty = formula_to_type(formula, atom_types, budget, values, fuel=args.fuel)
    cls = realizes_pos(term, ty, budget)
    out = {"verdict": cls.verdict}
    if cls.index is not None:
        out["class"] = cls.index
    _emit(out, args)
    return {"class": EXIT_OK, "no": EXIT_DISTINGUISHED}.get(cls.verdict, EXIT_UNKNOWN)


def cmd_exercises(args) -> int:
    report = run_exercises(args.seed, _budget(args), trials=args.trials)
    for suite in report["suites"]:
        status = "pass" if suite["ok"] else "FAIL"
        print(f"suite {suite['suite']:<12} {status}")
        if not suite["ok"]:
            for check in suite["checks"]:
                if not check["ok"]:
                    print(f"  {check['law'] if 'law' in check else check['check']}: {check.get('detail','')}")
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK if report["ok"] else EXIT_DISTINGUISHED


def _parse_values(text: Optional[str]) -> tuple:
    if not text:
        return ()
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise CliError(f"invalid value domain {text!r}; expected comma-separated integers")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-states", type=int, default=5000, metavar="N")
    common.add_argument("--depth", type=int, default=6, metavar="K")
    common.add_argument("--seed", type=int, default=0, metavar="S")
    common.add_argument("--format", choices=["json", "text", "dot"], default="text")
    common.add_argument("--values", type=str, default="", metavar="V1,V2,...")

    ap = argparse.ArgumentParser(
        prog="procreal",
        description="Process calculus with simultaneous actions, failures "
        "equivalence, and proof-to-process extraction.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lts", parents=[common], help="explore a term's transition graph")
    p.add_argument("term")
    p.set_defaults(func=cmd_lts)

    p = sub.add_parser("failures", parents=[common], help="bounded failures of a term")
    p.add_argument("term")
    p.set_defaults(func=cmd_failures)

    p = sub.add_parser("equiv", parents=[common], help="decide equivalence of two terms")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--mode", choices=["failures", "weak-bisim"], default="failures")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("perp", parents=[common], help="orthogonality of two terms")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_perp)

    p = sub.add_parser("extract", parents=[common], help="extract a process from a proof")
    p.add_argument("proof")
    p.add_argument("--atoms", default=None, help="atom alphabet JSON")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser(
        "verify-cut", parents=[common], help="stepwise cut elimination with equivalence checks"
    )
    p.add_argument("proof")
    p.add_argument("--atoms", default=None)
    p.add_argument("--step-bound", type=int, default=200)
    p.set_defaults(func=cmd_verify_cut)

    p = sub.add_parser(
        "check-type", parents=[common], help="classify a term against a semantic type"
    )
    p.add_argument("term")
    p.add_argument("type_env", help="type environment JSON")
    p.add_argument("type", help="type expression, e.g. 'a*b'")
    p.add_argument("--fuel", type=int, default=1)
    p.set_defaults(func=cmd_check_type)

    p = sub.add_parser("exercises", parents=[common], help="run the named verification suites")
    p.add_argument("--trials", type=int, default=25)
    p.set_defaults(func=cmd_exercises)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        args.values = _parse_values(args.values)
        return args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, json.JSONDecodeError, ValueError, OSError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
