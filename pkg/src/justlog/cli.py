"""Batch command-line front end.

One invocation processes one command and exits: 0 on
success/accepted/found, 1 on rejected/none, 2 on usage or format
errors.  Diagnostics go to standard error; artifacts (proof files,
model files, reports) go to standard out.  Every subcommand accepts
--json to emit one structured record instead of the human rendering.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .axioms import ConstantSpec, SystemId, parse_cs_file
from .derive import (
    DeriveError,
    derive_interconsistency,
    derive_interconsistency_jnoc,
    derive_jd_in_jnoc,
    derive_jd_in_jnocplus,
    derive_noc_in_jd,
    internalize,
)
from .model import (
    ModelClass,
    UniverseError,
    check_well_formed,
    eval_formula,
    format_model,
    parse_model_file,
)
from .proof import check_proof, format_proof, parse_proof_file
from .search import (
    SearchBounds,
    count_models,
    find_countermodel,
    find_witness,
)
from .syntax import (
    Atom,
    ParseError,
    formula_terms,
    parse_formula,
    parse_term,
    subformula_closure,
    subterm_closure,
)

_CLASSES = {c.value: c for c in ModelClass}
_SYSTEMS = {s.value: s for s in SystemId}

_LEMMAS = {
    "interconsistency": SystemId.JD,
    "noc-in-jd": SystemId.JD,
    "interconsistency-jnoc": SystemId.JNOC,
    "jd-in-jnoc": SystemId.JNOC,
    "jd-in-jnocplus": SystemId.JNOC_PLUS,
}


def _read_input(name: str) -> tuple[str, Optional[Path]]:
    if name == "-":
        return sys.stdin.read(), None
    path = Path(name)
    return path.read_text(), path.parent


def _load_cs(ref: str, system: SystemId) -> ConstantSpec:
    if ref == "total":
        return ConstantSpec.total(system)
    if ref == "empty":
        return ConstantSpec.empty(system)
    return parse_cs_file(Path(ref).read_text(), system)


def _emit(args, record: dict, human: str) -> None:
    if args.json:
        print(json.dumps(record))
    elif human:
        print(human)


# ------------------------------------------------------------- commands

def cmd_check(args) -> int:
    text, base = _read_input(args.proof)
    proof = parse_proof_file(text, base)
    verdict = check_proof(proof)
    record = {
        "command": "check",
        "accepted": verdict.accepted,
        "step": verdict.step,
        "reason": verdict.reason,
    }
    if verdict.accepted:
        _emit(args, record, "accepted")
        return 0
    _emit(args, record, "rejected")
    print(f"rejected at step {verdict.step}: {verdict.reason}", file=sys.stderr)
    return 1


def cmd_derive(args) -> int:
    lemma = args.lemma
    system = _SYSTEMS[args.system] if args.system else _LEMMAS[lemma]
    cs = _load_cs(args.cs, system)
    terms = [parse_term(t) for t in args.term or []]
    formula = parse_formula(args.formula) if args.formula else None

    def need(n_terms: int, needs_formula: bool, needs_atom: bool = False):
        if len(terms) != n_terms:
            raise ValueError(f"{lemma} needs exactly {n_terms} --term argument(s)")
        if needs_formula and formula is None:
            raise ValueError(f"{lemma} needs --formula")
        if needs_atom and args.atom is None:
            raise ValueError(f"{lemma} needs --atom")

    if lemma == "interconsistency":
        need(2, True)
        proof = derive_interconsistency(terms[0], terms[1], formula, cs)
    elif lemma == "noc-in-jd":
        need(1, True)
        proof = derive_noc_in_jd(terms[0], formula, cs)
    elif lemma == "interconsistency-jnoc":
        need(2, True)
        proof = derive_interconsistency_jnoc(terms[0], terms[1], formula, cs)
    elif lemma == "jd-in-jnoc":
        need(1, False, True)
        atom = parse_formula(args.atom)
        if not isinstance(atom, Atom):
            raise ValueError("--atom must be an atomic proposition like P1")
        proof = derive_jd_in_jnoc(terms[0], atom, cs)
    else:
        need(1, False)
        proof = derive_jd_in_jnocplus(terms[0], cs)

    text = format_proof(proof, cs_ref=args.cs)
    _emit(args, {"command": "derive", "lemma": lemma, "proof": text}, text.rstrip("\n"))
    return 0


def cmd_internalize(args) -> int:
    text, base = _read_input(args.proof)
    proof = parse_proof_file(text, base)
    _, lifted = internalize(proof)
    out = format_proof(lifted)
    _emit(args, {"command": "internalize", "proof": out}, out.rstrip("\n"))
    return 0


def cmd_model_check(args) -> int:
    text, _ = _read_input(args.model)
    m = parse_model_file(text)
    system = _SYSTEMS[args.system]
    report = check_well_formed(m, _CLASSES[args.cls], _load_cs(args.cs, system), system)
    record = {
        "command": "model-check",
        "ok": report.ok,
        "violations": [
            {"condition": v.condition, "world": v.world, "detail": v.detail}
            for v in report.violations
        ],
    }
    _emit(args, record, "well-formed" if report.ok else "")
    if report.ok:
        return 0
    if not args.json:
        for v in report.violations:
            print(str(v))
    return 1


def cmd_model_eval(args) -> int:
    text, _ = _read_input(args.model)
    m = parse_model_file(text)
    value = eval_formula(m, args.at, parse_formula(args.formula))
    _emit(
        args,
        {"command": "model-eval", "world": args.at, "formula": args.formula, "value": value},
        str(value),
    )
    return 0


def _bounds_from_args(args, seed_formulas) -> SearchBounds:
    seeds = list(seed_formulas)
    if args.phi_file:
        for line in Path(args.phi_file).read_text().splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                seeds.append(parse_formula(line))
    phi = subformula_closure(seeds)
    terms = {u for f in phi for u in formula_terms(f)}
    for t in args.term or []:
        terms.add(parse_term(t))
    return SearchBounds(
        max_worlds=args.max_worlds,
        max_normal=args.max_normal or args.max_worlds,
        phi=phi,
        terms=subterm_closure(terms),
    )


def _run_search(args, goals, counter: bool) -> int:
    system = _SYSTEMS[args.system]
    cs = _load_cs(args.cs, system)
    cls = _CLASSES[args.cls]
    b = _bounds_from_args(args, goals)
    if counter:
        m = find_countermodel(goals[0], cls, system, cs, b)
    else:
        m = find_witness(goals, cls, system, cs, b)
    name = "search-counter" if counter else "search-witness"
    if m is None:
        searched = count_models(b)
        _emit(
            args,
            {"command": name, "found": False, "model": None, "searched": searched},
            f"NONE\nsearched {searched} models",
        )
        return 1
    text = format_model(m)
    _emit(args, {"command": name, "found": True, "model": text}, text.rstrip("\n"))
    return 0


def cmd_search_counter(args) -> int:
    return _run_search(args, [parse_formula(args.formula)], counter=True)


def cmd_search_witness(args) -> int:
    goals = [parse_formula(g) for g in args.goal or []]
    return _run_search(args, goals, counter=False)


# --------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="justlog",
        description="check, derive and search explicit-evidence deontic logics",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", action="store_true", help="emit one JSON record")

    p = sub.add_parser("check", help="check a proof file ('-' for stdin)")
    p.add_argument("proof")
    add_json(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("derive", help="emit a derivation as a checkable proof file")
    p.add_argument("lemma", choices=sorted(_LEMMAS))
    p.add_argument("--term", action="append", help="justification term (repeatable)")
    p.add_argument("--formula", help="formula parameter")
    p.add_argument("--atom", help="atomic proposition parameter")
    p.add_argument("--cs", default="empty", help="total | empty | <file>")
    p.add_argument("--system", choices=sorted(_SYSTEMS), help="override the lemma's system")
    add_json(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("internalize", help="lift an accepted proof of A to one of t:A")
    p.add_argument("proof")
    add_json(p)
    p.set_defaults(func=cmd_internalize)

    p = sub.add_parser("model", help="audit or evaluate a model file")
    msub = p.add_subparsers(dest="model_command", required=True)

    q = msub.add_parser("check", help="audit well-formedness")
    q.add_argument("model")
    q.add_argument("--class", dest="cls", choices=sorted(_CLASSES), required=True)
    q.add_argument("--cs", default="empty", help="total | empty | <file>")
    q.add_argument("--system", choices=sorted(_SYSTEMS), required=True)
    add_json(q)
    q.set_defaults(func=cmd_model_check)

    q = msub.add_parser("eval", help="evaluate a formula at a world")
    q.add_argument("model")
    q.add_argument("formula")
    q.add_argument("--at", required=True, help="world name")
    add_json(q)
    q.set_defaults(func=cmd_model_eval)

    p = sub.add_parser("search", help="bounded countermodel / witness search")
    ssub = p.add_subparsers(dest="search_command", required=True)

    def add_search_args(q):
        q.add_argument("--class", dest="cls", choices=sorted(_CLASSES), required=True)
        q.add_argument("--system", choices=sorted(_SYSTEMS), required=True)
        q.add_argument("--cs", default="empty", help="total | empty | <file>")
        q.add_argument("--max-worlds", type=int, default=2)
        q.add_argument("--max-normal", type=int, default=None)
        q.add_argument("--phi-file", help="extra universe formulas, one per line")
        q.add_argument("--term", action="append", help="extra universe term (repeatable)")
        add_json(q)

    q = ssub.add_parser("counter", help="search for a countermodel")
    q.add_argument("--formula", required=True)
    add_search_args(q)
    q.set_defaults(func=cmd_search_counter)

    q = ssub.add_parser("witness", help="search for a satisfying model")
    q.add_argument("--goal", action="append", required=True, help="goal formula (repeatable)")
    add_search_args(q)
    q.set_defaults(func=cmd_search_witness)

    return top


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DeriveError as e:
        print(f"error ({e.code}): {e}", file=sys.stderr)
        return 1
    except (ParseError, UniverseError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
