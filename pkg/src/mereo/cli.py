"""Command-line front end.

Exit codes: 0 everything holds, 1 some axiom fails (witnesses in the
report), 2 input error, 3 capacity exceeded.  Reports go to stdout as
JSON, progress and errors to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import lab
from .algebra import CompleteHomomorphism, adjoint_apply, eval_element
from .docs import parse, serialize, to_document
from .equivalence import kappa, roundtrip_report, tau
from .errors import CapacityExceeded, KindMismatch, MereoError
from .morphisms import MeetFunctionTable, classify, compose_dhlc, compose_mvdhlc
from .structures import ContactStructure, LocalContactStructure, MvdStructure
from .topology import (
    FiniteSpace,
    SpaceMap,
    map_properties,
    regular_closed_algebra,
    space_connected,
    standard_lca,
    standard_mvd,
)

OK, FAILED, INPUT_ERROR, CAPACITY = 0, 1, 2, 3

DEFAULT_SUITE = {
    ContactStructure: "contact",
    LocalContactStructure: "lca",
    MvdStructure: "mvd",
    CompleteHomomorphism: "galois",
    FiniteSpace: "connected",
}


class InputError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, ensure_ascii=False) + "\n")


def load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse(text)
    except MereoError as exc:
        if isinstance(exc, CapacityExceeded):
            raise
        raise type(exc)(f"{path}: {exc}", witness=exc.witness) from None


def _kind(item) -> str | None:
    return "mvd" if isinstance(item, MvdStructure) else "preorder_space" if isinstance(item, FiniteSpace) else None


def cmd_check(args) -> int:
    item = load(args.file)
    suite = args.axioms or DEFAULT_SUITE.get(type(item))
    if suite is None:
        raise InputError(f"{args.file}: give --axioms for a {to_document(item)['type']} document")
    ids = lab.expand_ids([suite], _kind(item))
    report = lab.evaluate(item, ids)
    _emit(report.to_json())
    return OK if report.holds else FAILED


def cmd_convert(args) -> int:
    item = load(args.file)
    if args.dir == "kappa":
        if not isinstance(item, LocalContactStructure):
            raise KindMismatch("--dir kappa needs an lca document")
        out = kappa(item)
    else:
        if not isinstance(item, MvdStructure):
            raise KindMismatch("--dir tau needs an mvd document")
        out = tau(item)
    text = serialize(out)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    report = roundtrip_report(item)
    (_emit if args.out else lambda r: print(json.dumps(r), file=sys.stderr))(report.to_json())
    return FAILED if report.guaranteed and not report.ok else OK


def cmd_classify(args) -> int:
    src, dst, f = load(args.src), load(args.dst), load(args.map)
    _emit(classify(f, src, dst).to_json())
    return OK


def cmd_compose(args) -> int:
    first, second, src = load(args.first), load(args.second), load(args.src)
    if not isinstance(first, MeetFunctionTable) or not isinstance(second, MeetFunctionTable):
        raise KindMismatch("compose needs two meetmap documents")
    if isinstance(src, LocalContactStructure):
        out = compose_dhlc(second, first, src)
    elif isinstance(src, MvdStructure):
        out = compose_mvdhlc(second, first, src)
    else:
        raise KindMismatch("--src must be an lca or mvd document")
    sys.stdout.write(serialize(out))
    return OK


def cmd_space(args) -> int:
    item = load(args.file)
    if isinstance(item, SpaceMap):
        _emit(map_properties(item).to_json())
        return OK
    if not isinstance(item, FiniteSpace):
        raise KindMismatch("space needs a space or map document")
    if args.lca:
        _emit(to_document(standard_lca(item)))
    elif args.mvd:
        _emit(to_document(standard_mvd(item)))
    elif args.connected:
        con = lab.evaluate(item, ["CON"])
        _emit({"connected": space_connected(item), "CON": con.holds})
    else:
        rca = regular_closed_algebra(item)
        alg = rca.algebra
        _emit({
            "atoms": list(alg.atom_labels),
            "atom_sets": {a: item.labels(rca.point_set(a)) for a in alg.atom_labels},
            "embedding": {alg.format_bits(e): item.labels(m) for e, m in enumerate(rca.embedding)},
        })
    return OK


def _spec(args, filters=()) -> lab.EnumerationSpec:
    return lab.EnumerationSpec(
        args.kind, args.n, tuple(filters), seed=args.seed, budget=args.budget,
        m=args.m, include_non_ideals=args.include_non_ideals,
    )


def cmd_enumerate(args) -> int:
    result = lab.enumerate_structures(_spec(args, args.filters or ()))
    for line in result.json_lines():
        sys.stdout.write(line + "\n")
    return OK


def cmd_search(args) -> int:
    outcome = lab.search_implication(args.hyp, args.concl, _spec(args))
    print(f"search: {outcome.status} after {outcome.candidates_tried} candidates", file=sys.stderr)
    sys.stdout.write(json.dumps(outcome.to_json(), ensure_ascii=False, separators=(",", ":")) + "\n")
    return FAILED if outcome.status == "counterexample" else OK


def cmd_adjoint(args) -> int:
    phi = load(args.map)
    if not isinstance(phi, CompleteHomomorphism):
        raise KindMismatch("--map must be a hom document")
    b = eval_element(phi.codomain, args.element)
    _emit({"element": str(b), "adjoint": str(adjoint_apply(phi, b))})
    return OK


def cmd_suite(args) -> int:
    if args.name == "correspondence":
        report = lab.correspondence_suite(args.n, tables_seed=args.seed)
    else:
        report = lab.composition_suite(args.n, seed=args.seed)
    _emit(report.to_json())
    return OK if report.passed else FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mereo", description="Finite contact-algebra workbench.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check axioms of a structure, map or space")
    c.add_argument("file")
    c.add_argument("--axioms", help="contact, nca, lca, mvd, connected, galois or a comma list of ids")
    c.set_defaults(fn=cmd_check)

    c = sub.add_parser("convert", help="translate between local contact and MVD structures")
    c.add_argument("file")
    c.add_argument("--dir", choices=("kappa", "tau"), required=True)
    c.add_argument("--out")
    c.set_defaults(fn=cmd_convert)

    c = sub.add_parser("classify", help="category flags of a morphism")
    c.add_argument("--src", required=True)
    c.add_argument("--dst", required=True)
    c.add_argument("--map", required=True)
    c.set_defaults(fn=cmd_classify)

    c = sub.add_parser("compose", help="compose two function tables (second after first)")
    c.add_argument("--first", required=True)
    c.add_argument("--second", required=True)
    c.add_argument("--src", required=True, help="domain structure of the first table")
    c.set_defaults(fn=cmd_compose)

    c = sub.add_parser("space", help="regular closed algebra and standard structures of a space")
    c.add_argument("file")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--rc", action="store_true")
    g.add_argument("--lca", action="store_true")
    g.add_argument("--mvd", action="store_true")
    g.add_argument("--connected", action="store_true")
    c.set_defaults(fn=cmd_space)

    for name, fn in (("enumerate", cmd_enumerate), ("search", cmd_search)):
        c = sub.add_parser(name)
        c.add_argument("--kind", required=True, choices=lab.KINDS)
        c.add_argument("--n", type=int, required=True)
        c.add_argument("--m", type=int)
        c.add_argument("--seed", type=int, default=0)
        c.add_argument("--budget", type=int)
        c.add_argument("--include-non-ideals", action="store_true")
        if name == "enumerate":
            c.add_argument("--filters", action="append")
        else:
            c.add_argument("--hyp", action="append", default=[])
            c.add_argument("--concl", action="append", required=True)
        c.set_defaults(fn=fn)

    c = sub.add_parser("adjoint", help="lower adjoint of a homomorphism at an element")
    c.add_argument("--map", required=True)
    c.add_argument("--element", required=True)
    c.set_defaults(fn=cmd_adjoint)

    c = sub.add_parser("suite", help="run the correspondence or composition suite")
    c.add_argument("name", choices=("correspondence", "composition"))
    c.add_argument("--n", type=int, default=3)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_suite)
    return p


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CapacityExceeded as exc:
        return _fail(CAPACITY, type(exc).__name__, str(exc))
    except InputError as exc:
        return _fail(INPUT_ERROR, "InputError", str(exc))
    except (MereoError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        return _fail(INPUT_ERROR, type(exc).__name__, str(msg))


if __name__ == "__main__":
    sys.exit(main())
