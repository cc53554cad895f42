"""Command line front end.

Exit status: 0 when everything checked passes, 1 on a verification
failure, 2 on bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dsl
from .abelian import abelian_invariants, relation_matrix
from .catalog import load_catalog, render_catalog
from .engine import (
    BoundsExceeded,
    SearchBounds,
    check_certificate,
    find_derivation,
    load_certificate,
)
from .morphism import EvidenceMissing, check_morphism, load_morphism
from .presentations import Presentation, load_presentation
from .replay import replay_paper
from .schemas import THEOREMS, generators_of, presentation_for, store_for
from .words import McgError, MissingImage, Word

OK, FAIL, INPUT = 0, 1, 2


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _context(ctx: str, catalog: str | None) -> str:
    """Swap the catalog part of a context when --catalog is given."""
    if catalog is None:
        return ctx
    theorem, at, _ = ctx.partition("@")
    return f"{theorem}@{catalog}" if at else catalog


def cmd_catalog(args) -> int:
    facts = load_catalog(args.name)
    counts = {
        "bounding": len(facts.bounding_facts), "chain": len(facts.chain_facts),
        "lantern": len(facts.lantern_facts), "action": len(facts.action_facts),
        "compatible": len(facts.compatibility_facts), "delta": len(facts.delta_facts),
        "intersect": len(facts.intersection_facts),
    }
    payload = {"catalog": facts.name, "surface": str(facts.surface),
               "curves": {n: s.value for n, s in facts.curves},
               "pairs": [list(p) for p in facts.pairs], "facts": counts}
    text = render_catalog(facts) if args.render else (
        f"catalog {facts.name} on {facts.surface}: {len(facts.curves)} curves, "
        + ", ".join(f"{v} {k}" for k, v in counts.items()))
    _emit(args, payload, text)
    return OK


def cmd_instantiate(args) -> int:
    facts = load_catalog(args.catalog)
    instances = presentation_for(args.theorem, facts, include_derived=args.derived)
    payload = {"context": f"{args.theorem}@{facts.name}",
               "instances": [{"id": i.id, "schema": i.schema.name, "lhs": str(i.lhs),
                              "rhs": str(i.rhs), "provenance": i.provenance} for i in instances]}
    _emit(args, payload, "\n".join(i.render() for i in instances))
    return OK


def cmd_check(args) -> int:
    files = list(args.cert or []) + list(args.files or [])
    if not files:
        raise McgError("no certificate given")
    status = OK
    reports = []
    texts = []
    for f in files:
        cert = load_certificate(f)
        _, store = store_for(_context(cert.context, args.catalog))
        report = check_certificate(cert, store)
        reports.append(report.as_dict())
        texts.append(report.text())
        if not report.passed:
            status = FAIL
    _emit(args, {"reports": reports}, "\n".join(texts))
    return status


def cmd_search(args) -> int:
    ctx = _context(args.context, args.catalog)
    _, store = store_for(ctx)
    bounds = SearchBounds(args.max_steps, args.max_len, args.max_states)
    src, dst = Word.parse(args.source), Word.parse(args.target)
    try:
        cert = find_derivation(src, dst, store, bounds, name=args.name, context=ctx)
    except BoundsExceeded as exc:
        _emit(args, {"found": False, "reason": f"BoundsExceeded: {exc}"},
              f"no certificate: bounds exceeded ({exc})")
        return FAIL
    if cert is None:
        _emit(args, {"found": False, "reason": "exhausted"},
              "no certificate: every word within the length bound was explored")
        return FAIL
    _emit(args, {"found": True, "certificate": cert.render()}, cert.render().rstrip())
    return OK


def cmd_check_morphism(args) -> int:
    try:
        result = check_morphism(load_morphism(args.file))
    except EvidenceMissing as exc:
        _emit(args, {"verdict": "FAIL", "reason": str(exc)}, f"FAIL: {exc}")
        return FAIL
    _emit(args, result.as_dict(), result.text())
    return OK if result.passed else FAIL


def cmd_abelianize(args) -> int:
    if args.pres:
        pres = load_presentation(args.pres)
    elif args.context:
        _, store = store_for(_context(args.context, args.catalog), include_derived=False)
        rels = list(store.values())
        pres = Presentation(args.context, generators_of(rels), rels)
    else:
        raise McgError("give --pres FILE or --context CTX")
    inv = abelian_invariants(pres.relations, pres.generators)
    payload = {"presentation": pres.name, "free_rank": inv.free_rank,
               "torsion": list(inv.torsion), "invariants": str(inv)}
    if args.matrix:
        payload["generators"] = [s.render() for s in pres.generators]
        payload["matrix"] = relation_matrix(pres.relations, pres.generators)
    _emit(args, payload, str(inv))
    return OK


def cmd_replay(args) -> int:
    result = replay_paper()
    _emit(args, result.as_dict(), result.table())
    return OK if result.passed else FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS so a flag given before the subcommand is not reset by the subparser
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--catalog", default=argparse.SUPPRESS,
                        help="catalog name or path, replacing the one in a context")

    p = argparse.ArgumentParser(prog="mcgcert", parents=[common],
                                description="Check presentations of mapping class groups of "
                                            "non-orientable surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("catalog", parents=[common], help="validate and summarise a catalog")
    s.add_argument("name", nargs="?", default="figure4")
    s.add_argument("--render", action="store_true", help="print the canonical text")
    s.set_defaults(fn=cmd_catalog)

    s = sub.add_parser("instantiate", parents=[common], help="list relation instances")
    s.add_argument("--theorem", choices=THEOREMS, default="Thm2")
    s.add_argument("--derived", action="store_true", help="include braid, commute and chain forms")
    s.set_defaults(fn=cmd_instantiate)

    s = sub.add_parser("check", parents=[common], help="replay derivation certificates")
    s.add_argument("files", nargs="*")
    s.add_argument("--cert", action="append")
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("search", parents=[common], help="bounded breadth-first search")
    s.add_argument("--context", default="Thm2@figure4")
    s.add_argument("--from", dest="source", required=True)
    s.add_argument("--to", dest="target", required=True)
    s.add_argument("--name", default="found")
    s.add_argument("--max-steps", type=int, default=3)
    s.add_argument("--max-len", type=int, default=12)
    s.add_argument("--max-states", type=int, default=50000)
    s.set_defaults(fn=cmd_search)

    s = sub.add_parser("check-morphism", parents=[common], help="check a morphism file")
    s.add_argument("file")
    s.set_defaults(fn=cmd_check_morphism)

    s = sub.add_parser("abelianize", parents=[common], help="abelian invariants")
    s.add_argument("--pres")
    s.add_argument("--context")
    s.add_argument("--matrix", action="store_true", help="include the exponent-sum matrix")
    s.set_defaults(fn=cmd_abelianize)

    s = sub.add_parser("replay-paper", parents=[common], help="check the whole bundle")
    s.set_defaults(fn=cmd_replay)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = getattr(args, "json", False)
    args.catalog = getattr(args, "catalog", None)
    if args.command == "instantiate" and args.catalog is None:
        args.catalog = "figure4"
    if args.command == "catalog" and args.catalog:
        args.name = args.catalog
    try:
        return args.fn(args)
    except (dsl.ParseError, MissingImage, McgError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT


if __name__ == "__main__":
    sys.exit(main())
