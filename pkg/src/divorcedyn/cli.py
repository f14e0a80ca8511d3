"""Command-line surface.

Exit codes: 0 success / stable / reachable; 1 not stable, not reachable, or
rejected certificate; 2 parse or I/O error; 3 search inconclusive (budget);
4 semantic validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .model import (
    GuardExceeded,
    ParseError,
    ValidationError,
    parse_instance,
    parse_matching,
    serialize_instance,
    serialize_matching,
)
from .dynamics import (
    Rejected,
    blocking_pairs,
    parse_certificate,
    serialize_certificate,
    verify_sequence,
)
from .explorer import (
    Budget,
    VerdictKind,
    build_divorce_graph,
    condensation,
    export_dot,
    reachable_search,
    sinks,
    verdict_to_json,
)
from .reduction import (
    build_certificate,
    parse_source_graph,
    reduce_graph,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_PARSE = 2
EXIT_INCONCLUSIVE = 3
EXIT_SEMANTIC = 4


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _load_instance(path: str):
    return parse_instance(_read(path))


def _fmt_pairs(pairs) -> str:
    return ",".join(f"{{{p.left.name},{p.right.name}}}" for p in pairs)


def _matching_summary(m) -> str:
    return " ".join(f"{l.name}-{r.name}" for l, r in m.sorted_pairs()) or "(empty)"


def cmd_check(args) -> int:
    instance = _load_instance(args.instance)
    m = parse_matching(_read(args.matching), instance)
    bps = blocking_pairs(instance, m)
    if not bps:
        print("stable")
        return EXIT_OK
    print(f"not stable; blocking: {_fmt_pairs(bps)}")
    return EXIT_NEGATIVE


def cmd_reach(args) -> int:
    instance = _load_instance(args.instance)
    m0 = parse_matching(_read(args.matching), instance)
    verdict = reachable_search(
        instance,
        m0,
        Budget(max_nodes=args.max_nodes, max_millis=args.max_millis),
        workers=args.parallel,
        require_both_matched=args.strict_binter,
    )
    if args.json:
        print(json.dumps(verdict_to_json(verdict)))
    else:
        print(f"verdict: {verdict.kind.value}")
        if verdict.witness is not None:
            body = "; ".join(f"{p.left.name} {p.right.name}" for p in verdict.witness)
            print(f"witness ({len(verdict.witness)} steps): {body or '(empty)'}")
        print(f"explored: {verdict.explored}  frontier_peak: {verdict.frontier_peak}")
    if args.dot:
        g = build_divorce_graph(instance, roots=[m0], max_matchings=args.max_nodes)
        Path(args.dot).write_text(export_dot(g, root=m0, witness=verdict.witness))
    return {
        VerdictKind.REACHABLE_STABLE: EXIT_OK,
        VerdictKind.NOT_REACHABLE: EXIT_NEGATIVE,
        VerdictKind.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    }[verdict.kind]


def cmd_reduce(args) -> int:
    g = parse_source_graph(_read(args.graph))
    art = reduce_graph(g)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "instance.txt").write_text(serialize_instance(art.instance))
    (out / "m0.txt").write_text(serialize_matching(art.m0))
    (out / "meta.json").write_text(art.meta_json())
    print(f"{4 * g.m + 2 * g.n} agents per side")
    print(f"wrote {out / 'instance.txt'}, {out / 'm0.txt'}, {out / 'meta.json'}")
    return EXIT_OK


def cmd_certify(args) -> int:
    g = parse_source_graph(_read(args.graph))
    art = reduce_graph(g)
    cert = build_certificate(art, args.vertices)
    result = verify_sequence(art.instance, art.m0, cert)
    if args.out:
        Path(args.out).write_text(serialize_certificate(cert))
    if isinstance(result, Rejected):
        # build_certificate guarantees acceptance; reaching here is a bug.
        print(f"REJECTED at step {result.index}: {result.reason.value}")
        return EXIT_NEGATIVE
    status = "stable" if result.final_stable else "NOT stable"
    print(f"VERIFIED {status} ({len(cert)} steps)")
    return EXIT_OK if result.final_stable else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    instance = _load_instance(args.instance)
    m0 = parse_matching(_read(args.matching), instance)
    cert = parse_certificate(_read(args.certificate), instance)
    result = verify_sequence(
        instance, m0, cert, require_both_matched=args.strict_binter
    )
    if isinstance(result, Rejected):
        print(f"REJECTED at step {result.index}: {result.reason.value}")
        return EXIT_NEGATIVE
    for i, step in enumerate(result.steps):
        print(f"step {i}: {step.pair.left.name} {step.pair.right.name}")
    print(f"final: {_matching_summary(result.final)}")
    print(f"final_stable: {result.final_stable}")
    return EXIT_OK if result.final_stable else EXIT_NEGATIVE


def cmd_atlas(args) -> int:
    instance = _load_instance(args.instance)
    roots = None
    if args.root:
        roots = [parse_matching(_read(args.root), instance)]
    g = build_divorce_graph(instance, roots=roots, max_matchings=args.max_matchings)
    cond = condensation(g)
    sink_keys = sinks(g)
    stable_count = len(g.stable)
    doomed_nodes = sum(
        len(cond.components[ci]) for ci in cond.no_stable_path
    )
    print(f"nodes: {g.node_count()}")
    print(f"arcs: {g.arc_count()}")
    print(f"stable nodes: {stable_count}")
    print(f"sinks: {len(sink_keys)} ({sum(1 for k in sink_keys if k not in g.stable)} not stable)")
    print(f"sccs: {len(cond.components)}")
    print(f"nodes with path to stable: {g.node_count() - doomed_nodes}")
    print(f"nodes without path to stable: {doomed_nodes}")
    if args.dot:
        Path(args.dot).write_text(export_dot(g, root=roots[0] if roots else None))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divorcedyn",
        description="Stable-marriage divorce dynamics: stability checks, "
        "divorce-graph reachability, and the Independent Set reduction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a matching and report stability")
    p.add_argument("instance")
    p.add_argument("matching")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reach", help="search for a reachable stable matching")
    p.add_argument("instance")
    p.add_argument("matching")
    p.add_argument("--max-nodes", type=int, default=1_000_000)
    p.add_argument("--max-millis", type=float, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--dot", metavar="PATH", default=None,
                   help="write the explored sub-graph as DOT")
    p.add_argument("--parallel", type=int, default=1, metavar="N")
    p.add_argument("--strict-binter", action="store_true",
                   help="only allow b-interchanges where both pair members are matched")
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("reduce", help="reduce an Independent Set instance")
    p.add_argument("graph")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("certify", help="build and verify a certificate from an independent set")
    p.add_argument("graph")
    p.add_argument("vertices", nargs="+", help="vertex names, e.g. v_1 v_3")
    p.add_argument("--out", metavar="PATH", default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="replay a certificate file")
    p.add_argument("instance")
    p.add_argument("matching")
    p.add_argument("certificate")
    p.add_argument("--strict-binter", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("atlas", help="divorce-graph analytics")
    p.add_argument("instance")
    p.add_argument("--root", metavar="MATCHING_FILE", default=None)
    p.add_argument("--dot", metavar="PATH", default=None)
    p.add_argument("--stats", action="store_true",
                   help="accepted for compatibility; stats always print")
    p.add_argument("--max-matchings", type=int, default=1_000_000)
    p.set_defaults(func=cmd_atlas)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, GuardExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
