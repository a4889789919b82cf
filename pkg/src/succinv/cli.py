"""Command line front end.

Exit codes: 0 holds / pass, 1 fails, 2 error, 3 the decomposition does not
meet the structural guarantee for the given ``c``. Every command ends its
standard output with one ``RESULT`` line; timings go to standard error and
only with ``-v``.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

from succinv.errors import ClassificationError, SuccinvError
from succinv.formula import Formula, parse_formula
from succinv.graph import Graph, read_graph
from succinv.invariance import MAX_SUCC_EXHAUSTIVE, check_successor_invariance
from succinv.kwalk import format_edge_log, format_walk, read_walk, validate_kwalk
from succinv.pipeline import build_walk, decomposition_for, model_check
from succinv.poset import poset_model_check, read_poset, validate_poset, width_certificate
from succinv.structure import Structure, gaifman_graph, read_structure
from succinv.successor import SEMANTIC, STRATEGIES
from succinv.treedecomp import MAX_MINOR_HOST, adhesion, format_td, read_td, validate

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_ERROR = 2
EXIT_UNCLASSIFIED = 3


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _formula(args: argparse.Namespace, a: Structure | None = None) -> Formula:
    if args.formula_text is not None:
        text = args.formula_text
    elif args.formula is not None:
        text = Path(args.formula).read_text(encoding="utf-8")
    else:
        raise SuccinvError("give --formula PATH or --formula-text TEXT")
    return parse_formula(text.strip(), a.vocabulary if a is not None else None)


def _host(args: argparse.Namespace) -> Graph:
    if getattr(args, "graph", None):
        return read_graph(args.graph)
    if getattr(args, "structure", None):
        return gaifman_graph(read_structure(args.structure))
    raise SuccinvError("give --graph PATH or --structure PATH")


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _timings(args: argparse.Namespace, timings: dict[str, float]) -> None:
    if args.verbose:
        for stage, seconds in timings.items():
            print(f"time {stage} {seconds:.4f}s", file=sys.stderr)


def cmd_mc(args: argparse.Namespace) -> int:
    a = read_structure(args.structure)
    phi = _formula(args, a)
    if args.check_invariance:
        n = len(a.universe)
        mode = "exhaustive" if n <= args.max_exhaustive else "sampled"
        verdict = check_successor_invariance(a, phi, mode=mode, seed=args.seed, max_exhaustive=args.max_exhaustive)
        print(f"invariance {verdict.status} checked={verdict.checked}")
        if not verdict.invariant:
            print(f"witness {list(verdict.witness[0])} -> {verdict.values[0]}, "
                  f"{list(verdict.witness[1])} -> {verdict.values[1]}")
            print("RESULT error not-successor-invariant")
            return EXIT_ERROR
    report = model_check(a, phi, args.c, source=args.td, strategy=args.strategy, max_minor_host=args.max_minor_host)
    if report.build is not None:
        conn = report.build.connection
        print(f"strategy {report.strategy}")
        print(f"walk length {len(conn.walk)} max visits {conn.certificate.realized}")
        print(f"k {conn.k} M {conn.M} d {conn.d} k' {conn.k_prime}")
        print(f"edges torso {len(report.build.torso_edges)} walk {len(conn.edge_log)}")
        _write(args.walk_out, format_walk(conn.walk, conn.k_prime))
        _write(args.edges_out, format_edge_log(report.build.edge_log))
    _timings(args, dict(report.timings))
    print(report.summary())
    return EXIT_HOLDS if report.verdict else EXIT_FAILS


def cmd_kwalk(args: argparse.Namespace) -> int:
    g = _host(args)
    if not g.vertices:
        raise SuccinvError("the host graph is empty")
    td = decomposition_for(g, args.td)
    build = build_walk(td, args.c, max_minor_host=args.max_minor_host)
    conn = build.connection
    walk_text = format_walk(conn.walk, conn.k_prime)
    log_text = format_edge_log(build.edge_log)
    if args.walk_out:
        _write(args.walk_out, walk_text)
    else:
        sys.stdout.write(walk_text)
    if args.edges_out:
        _write(args.edges_out, log_text)
    else:
        sys.stdout.write(log_text)
    print(f"RESULT kwalk k'={conn.k_prime} M={conn.M} edges_added={build.edges_added}")
    return EXIT_HOLDS


def cmd_decompose(args: argparse.Namespace) -> int:
    g = _host(args)
    td = decomposition_for(g, args.td)
    text = format_td(td)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    print(f"RESULT decomposed bags={len(td.nodes())} width={td.width()} adhesion={adhesion(td)}")
    return EXIT_HOLDS


def cmd_check_walk(args: argparse.Namespace) -> int:
    g = _host(args)
    w, k_file = read_walk(args.walk)
    k = args.k if args.k is not None else k_file
    report = validate_kwalk(g, w, k)
    print(report.describe())
    print(f"RESULT {'pass' if report.ok else 'fail'} k={k}")
    return EXIT_HOLDS if report.ok else EXIT_FAILS


def cmd_check_td(args: argparse.Namespace) -> int:
    g = _host(args)
    path = args.td[len("file="):] if args.td.startswith("file=") else args.td
    report = validate(read_td(path, g))
    print(report.describe())
    print(f"RESULT {'pass' if report.ok else 'fail'}")
    return EXIT_HOLDS if report.ok else EXIT_FAILS


def cmd_check_succ_inv(args: argparse.Namespace) -> int:
    a = read_structure(args.structure)
    phi = _formula(args, a)
    verdict = check_successor_invariance(
        a, phi, mode=args.mode, seed=args.seed, samples=args.samples, max_exhaustive=args.max_exhaustive
    )
    print(f"checked {verdict.checked} successor relations")
    if verdict.witness is not None:
        print(f"witness {list(verdict.witness[0])} -> {verdict.values[0]}, "
              f"{list(verdict.witness[1])} -> {verdict.values[1]}")
    print(f"RESULT {verdict.status}")
    return EXIT_FAILS if not verdict.invariant else EXIT_HOLDS


def cmd_poset_mc(args: argparse.Namespace) -> int:
    p = read_poset(args.poset)
    phi = _formula(args, p.to_structure())
    cert = width_certificate(p)
    verdict = poset_model_check(p, phi, verify_invariance=args.check_invariance)
    print(f"width {cert.width}")
    print(f"RESULT {'holds' if verdict else 'fails'} width={cert.width}")
    return EXIT_HOLDS if verdict else EXIT_FAILS


def cmd_poset_width(args: argparse.Namespace) -> int:
    p = read_poset(args.poset)
    report = validate_poset(p)
    if not report.ok:
        raise SuccinvError(report.describe())
    cert = width_certificate(p)
    print(cert.width)
    for j, chain in enumerate(cert.cover.chains, 1):
        print(f"chain {j}: {' '.join(map(str, chain))}")
    print(f"antichain: {' '.join(map(str, cert.antichain))}")
    print(f"RESULT width={cert.width}")
    return EXIT_HOLDS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="succinv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("-v", "--verbose", action="store_true", help="print timings to stderr")
        p.add_argument("--seed", type=int, default=0)

    def host(p: argparse.ArgumentParser) -> None:
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--graph", help="graph file")
        group.add_argument("--structure", help="structure file; its Gaifman graph is used")

    def formula(p: argparse.ArgumentParser) -> None:
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--formula", help="file holding one formula")
        group.add_argument("--formula-text", help="formula given inline")

    def walk_options(p: argparse.ArgumentParser) -> None:
        p.add_argument("--td", default="heuristic=min-fill",
                       help="file=PATH, heuristic=min-fill, heuristic=min-degree or single-bag")
        p.add_argument("-c", type=_positive, required=True, help="class parameter")
        p.add_argument("--max-minor-host", type=_positive, default=MAX_MINOR_HOST,
                       help="largest torso handed to the minor oracle")
        p.add_argument("--walk-out", help="write the walk file here")
        p.add_argument("--edges-out", help="write the edge log here")

    p = sub.add_parser("mc", help="model check a successor-invariant formula")
    common(p)
    p.add_argument("--structure", required=True)
    formula(p)
    walk_options(p)
    p.add_argument("--strategy", choices=STRATEGIES, default=SEMANTIC)
    p.add_argument("--check-invariance", action="store_true",
                   help="check successor-invariance first (sampled above --max-exhaustive)")
    p.add_argument("--max-exhaustive", type=_positive, default=MAX_SUCC_EXHAUSTIVE)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("kwalk", help="build a k-walk and its edge log")
    common(p)
    host(p)
    walk_options(p)
    p.set_defaults(func=cmd_kwalk)

    p = sub.add_parser("decompose", help="write a tree decomposition")
    common(p)
    host(p)
    p.add_argument("--td", default="heuristic=min-fill")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("check-walk", help="validate a walk file")
    common(p)
    host(p)
    p.add_argument("--walk", required=True)
    p.add_argument("-k", type=_positive, help="visit bound (default: from the walk file)")
    p.set_defaults(func=cmd_check_walk)

    p = sub.add_parser("check-td", help="validate a decomposition file")
    common(p)
    host(p)
    p.add_argument("--td", required=True, help="PATH or file=PATH")
    p.set_defaults(func=cmd_check_td)

    p = sub.add_parser("check-succ-inv", help="test successor-invariance on one structure")
    common(p)
    p.add_argument("--structure", required=True)
    formula(p)
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=_positive, default=200)
    p.add_argument("--max-exhaustive", type=_positive, default=MAX_SUCC_EXHAUSTIVE)
    p.set_defaults(func=cmd_check_succ_inv)

    p = sub.add_parser("poset-mc", help="model check an order-invariant formula on a poset")
    common(p)
    p.add_argument("--poset", required=True)
    formula(p)
    p.add_argument("--check-invariance", action="store_true", help="verify order-invariance exhaustively first")
    p.set_defaults(func=cmd_poset_mc)

    p = sub.add_parser("poset-width", help="print width and a minimum chain cover")
    common(p)
    p.add_argument("--poset", required=True)
    p.set_defaults(func=cmd_poset_width)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ClassificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("RESULT unclassified")
        return EXIT_UNCLASSIFIED
    except (SuccinvError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("RESULT error")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
