"""Command line interface.

Exit codes: 0 success or affirmative decision, 1 negative decision, 2 error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import List, Optional

from . import fnspace, rewriter, smp, termlang, verify
from .fnspace import FunctionTable, ResourceLimitError

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


@dataclass
class RunConfig:
    max_arity: Optional[int] = None
    rng_seed: int = 0
    sample_count: Optional[int] = None
    output: str = "plain"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _assignment(text: str) -> List[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"bad assignment {text!r}; expected comma-separated integers") from None
    return [v % 12 for v in vals]


def cmd_eval(args) -> int:
    term = termlang.parse(args.term)
    print(termlang.evaluate(term, _assignment(args.assignment)))
    return EXIT_OK


def cmd_table(args) -> int:
    term = termlang.parse(args.term)
    k = args.k or max(termlang.max_var(term), 1)
    sys.stdout.write(termlang.table(term, k).to_text())
    return EXIT_OK


def cmd_normalize(args) -> int:
    term = termlang.parse(args.term)
    k = args.arity or args.k or max(termlang.max_var(term), 1)
    nf = rewriter.normalize(term, k)
    sys.stdout.write(nf.to_text())
    if args.reconstruct:
        print(termlang.to_text(rewriter.reconstruct(nf)))
    return EXIT_OK


def cmd_eq(args) -> int:
    t1, t2 = termlang.parse(args.left), termlang.parse(args.right)
    k = args.k or max(termlang.max_var(t1), termlang.max_var(t2), 1)
    equal = rewriter.terms_equal(t1, t2, k)
    print("equal" if equal else "unequal")
    return EXIT_OK if equal else EXIT_NO


def cmd_clone_member(args) -> int:
    h = FunctionTable.from_text(_read(args.file))
    nf = fnspace.decompose(h)
    if nf is None:
        print("not a member")
        return EXIT_NO
    sys.stdout.write(nf.to_text())
    return EXIT_OK


def cmd_smp(args) -> int:
    inst = smp.SmpInstance.from_text(_read(args.file))
    res = smp.smp_decide(inst)
    print("member" if res.member else "non-member")
    if res.member and args.witness:
        print(termlang.to_text(smp.witness_term(inst, res)))
    return EXIT_OK if res.member else EXIT_NO


def cmd_verify(args) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    if any(n not in verify.SUITES for n in names):
        print(f"unknown suite {args.suite!r}; choose from: all, {', '.join(verify.SUITES)}", file=sys.stderr)
        return EXIT_ERROR
    cfg = RunConfig(args.k, args.seed, args.samples, args.format)
    ok = True
    for name in names:
        checks = verify.run_suite(name, k=cfg.max_arity, seed=cfg.rng_seed, samples=cfg.sample_count)
        for c in checks:
            print(c.line(cfg.output))
        ok &= all(c.passed for c in checks)
    return EXIT_OK if ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vlloop", description="Term functions and equations of the 12-element loop L.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a term at a point")
    p.add_argument("term")
    p.add_argument("assignment", help="comma-separated values for x1, x2, ...")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table", help="print the value table of a term")
    p.add_argument("term")
    p.add_argument("--k", type=int, help="arity (default: largest variable index)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("normalize", help="print the normal form of a term")
    p.add_argument("term")
    p.add_argument("arity", type=int, nargs="?")
    p.add_argument("--k", type=int)
    p.add_argument("--reconstruct", action="store_true", help="also print the canonical term")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("eq", help="decide whether two terms induce the same function")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("clone-member", help="decide whether a table file is a term function")
    p.add_argument("file", help="table file or '-' for stdin")
    p.set_defaults(func=cmd_clone_member)

    p = sub.add_parser("smp", help="decide a subpower membership instance")
    p.add_argument("file", help="instance file or '-' for stdin")
    p.add_argument("--witness", action="store_true", help="print a term producing the target")
    p.set_defaults(func=cmd_smp)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", help=f"one of: all, {', '.join(verify.SUITES)}")
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int)
    p.add_argument("--format", choices=("plain", "lines"), default="plain")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
