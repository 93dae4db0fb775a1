"""Command-line interface.

Exit codes: 0 when copies were found (or a check passed), 1 when the
answer is a hitting set or "none" (or a check failed), 2 for bad input or
a size limit, 3 when a search budget ran out.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import __version__
from .corpus import bench_csv, read_suite, run_suite
from .digraph import PatternDigraph
from .embed import KINDS, BudgetExhausted, find_model
from .formats import (FormatError, dumps_document, format_tournament, loads_document,
                      outcome_document, packing_document, read_pattern, read_tournament,
                      verify_document)
from .generators import generate
from .hit import DIRECT_BUDGET, erdos_posa
from .layouts import CapExceeded, best_ordering, cutwidth_exact, cutwidth_heuristic, pathwidth_search
from .oracle import OracleCapExceeded
from .pack import DISJOINTNESS, pack_direct
from .patterns import by_name

EXIT_PACKING = 0
EXIT_HITTING = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _pattern(arg: str) -> PatternDigraph:
    """A pattern file, or a built-in name when no such file exists."""
    if os.path.exists(arg):
        return read_pattern(arg)
    try:
        return by_name(arg)
    except KeyError:
        raise FormatError("no such file, and not a built-in pattern name", source=arg) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args: argparse.Namespace) -> int:
    _emit(format_tournament(generate(args.n, args.seed, args.model)), args.out)
    return 0


def cmd_ctw(args: argparse.Namespace) -> int:
    t = read_tournament(args.file)
    if args.heuristic:
        sigma, width = cutwidth_heuristic(t, args.seed)
        exact = False
    elif args.exact:
        sigma, width = cutwidth_exact(t)
        exact = True
    else:
        sigma, width, exact = best_ordering(t, args.seed)
    print(f"width {width}")
    print(f"exact {str(exact).lower()}")
    print("ordering " + " ".join(map(str, sigma.order)))
    return 0


def cmd_pw(args: argparse.Namespace) -> int:
    t = read_tournament(args.file)
    dec, width, exact = pathwidth_search(t)
    print(f"width {width}")
    print(f"exact {str(exact).lower()}")
    for v in sorted(dec.intervals):
        a, b = dec[v]
        print(f"{v} {a} {b}")
    return 0


def cmd_embed(args: argparse.Namespace) -> int:
    host = read_tournament(args.host)
    pattern = _pattern(args.pattern)
    model = find_model(host, pattern, args.mode)
    if model is None:
        print("none")
        return EXIT_HITTING
    print(json.dumps(model.to_dict(), sort_keys=True))
    return EXIT_PACKING


def cmd_pack(args: argparse.Namespace) -> int:
    host = read_tournament(args.host)
    pattern = _pattern(args.pattern)
    disjoint = args.disjoint or ("arc" if args.mode == "immersion" else "vertex")
    cert = pack_direct(host, pattern, args.k, args.mode, disjoint, args.budget)
    if cert is None:
        print("none")
        return EXIT_HITTING
    _emit(dumps_document(packing_document(host, cert, args.k)), args.out)
    return EXIT_PACKING


def cmd_hit(args: argparse.Namespace) -> int:
    host = read_tournament(args.host)
    pattern = _pattern(args.pattern)
    outcome = erdos_posa(host, pattern, args.k, args.mode, seed=args.seed,
                         node_budget=args.budget)
    doc = outcome_document(host, pattern, outcome, args.k, args.mode, args.seed)
    _emit(dumps_document(doc), args.out)
    return EXIT_PACKING if outcome.packing is not None else EXIT_HITTING


def cmd_verify(args: argparse.Namespace) -> int:
    host = read_tournament(args.host)
    with open(args.cert, encoding="utf-8") as fh:
        doc = loads_document(fh.read(), args.cert)
    problems = verify_document(host, doc, deep=args.deep)
    if problems:
        for p in problems:
            print(p)
        return 1
    print("ok")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    with open(args.suite, encoding="utf-8") as fh:
        suite = read_suite(fh.read(), args.suite)
    results = list(run_suite(suite))
    bad = [r for r in results if r.problems]
    _emit(bench_csv(results), args.out)
    for r in bad:
        print(f"row {r.instance.row()}: {'; '.join(r.problems)}", file=sys.stderr)
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epdual",
        description="Disjoint pattern copies or small hitting sets in tournaments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded tournament")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", default="uniform",
                   help="uniform, transitive, blocks:B or low-cutwidth:W")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("ctw", help="cutwidth and an ordering attaining it")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--heuristic", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ctw)

    p = sub.add_parser("pw", help="interval decomposition of small width")
    p.add_argument("file")
    p.set_defaults(func=cmd_pw)

    p = sub.add_parser("embed", help="find one copy of a pattern")
    p.add_argument("--host", required=True)
    p.add_argument("--pattern", required=True, help="pattern file or built-in name")
    p.add_argument("--mode", choices=KINDS, required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("pack", help="search for k disjoint copies")
    p.add_argument("--host", required=True)
    p.add_argument("--pattern", required=True, help="pattern file or built-in name")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--mode", choices=KINDS, required=True)
    p.add_argument("--disjoint", choices=DISJOINTNESS)
    p.add_argument("--budget", type=int, default=None, help="search node limit")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("hit", help="k disjoint copies or a certified hitting set")
    p.add_argument("--host", required=True)
    p.add_argument("--pattern", required=True, help="pattern file or built-in name")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--mode", choices=KINDS, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DIRECT_BUDGET,
                   help="node limit of the initial direct packing search")
    p.add_argument("--out")
    p.set_defaults(func=cmd_hit)

    p = sub.add_parser("verify", help="re-check a certificate")
    p.add_argument("--host", required=True)
    p.add_argument("--cert", required=True)
    p.add_argument("--deep", action="store_true", help="also run brute-force checks on small inputs")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run a suite and write a CSV summary")
    p.add_argument("--suite", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "k", 1) is not None and getattr(args, "k", 1) < 1:
        print("error: -k must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except BudgetExhausted as exc:
        print(f"error: search budget exhausted after {exc.nodes} nodes", file=sys.stderr)
        return EXIT_BUDGET
    except (FormatError, CapExceeded, OracleCapExceeded, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
