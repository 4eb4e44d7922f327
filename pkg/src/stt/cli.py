"""Command-line front end: ``stt check | tope | normalize | pushout-product | corpus run``.

Exit codes: 0 success, 1 type error, 2 parse error, 3 usage error,
4 corpus mismatch or solver/oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO, Tuple

from . import corpus
from .checker import CheckError, Checker, Diagnostic
from .kernel import Context
from .syntax import LexError, ParseError, parse_expr, parse_tope, print_expr, print_tope
from .topes import ShapeInclusion, TopeSolver, countermodel, oracle, pushout_product

OK, TYPE_ERROR, PARSE_ERROR, USAGE, MISMATCH = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 by default, which means parse error here
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _status(diags: Sequence[Diagnostic]) -> int:
    errors = [d for d in diags if d.severity == "ERROR"]
    if not errors:
        return OK
    return PARSE_ERROR if any(d.category == corpus.PARSE_ERROR for d in errors) else TYPE_ERROR


def cmd_check(args, out: TextIO, err: TextIO) -> int:
    status = OK
    for name in args.files:
        path = Path(name)
        if not path.is_file():
            raise UsageError(f"no such file: {name}")
        diags, _ = corpus.check_file(path, args.distinct_endpoints, display=name)
        for d in diags:
            if args.json:
                if d.severity == "ERROR":
                    out.write(json.dumps(d.as_dict(), sort_keys=True) + "\n")
            elif d.severity == "ERROR":
                err.write(d.format() + "\n")
            else:
                out.write(d.format() + "\n")
        status = max(status, _status(diags))
    return status


def _split_vars(text: str) -> List[str]:
    names = [v.strip() for v in text.split(",") if v.strip()]
    for v in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", v):
            raise UsageError(f"bad cube variable name {v!r}")
    if len(set(names)) != len(names):
        raise UsageError("cube variable names must be distinct")
    return names


def cmd_tope(args, out: TextIO, err: TextIO) -> int:
    names = _split_vars(args.vars)
    hyp = parse_tope(args.hyp, names)
    goal = parse_tope(args.goal, names)
    valid = TopeSolver(args.distinct_endpoints).entails(hyp, goal)
    out.write(("VALID" if valid else "INVALID") + "\n")
    if args.oracle is None:
        return OK
    if args.oracle < len(names) + 2:
        raise UsageError(f"--oracle needs chains of at least {len(names) + 2} points")
    expected = oracle(names, hyp, goal, args.oracle, args.distinct_endpoints)
    if expected == valid:
        line = f"AGREE (chains up to {args.oracle} points)"
        if not valid:
            top, values = countermodel(names, hyp, goal, args.oracle, args.distinct_endpoints)
            shown = ", ".join(f"{n}={v}/{top}" for n, v in zip(names, values))
            line += f"; countermodel {shown}"
        out.write(line + "\n")
        return OK
    out.write(f"DISAGREE (oracle says {'VALID' if expected else 'INVALID'})\n")
    return MISMATCH


def cmd_normalize(args, out: TextIO, err: TextIO) -> int:
    path = Path(args.file)
    if not path.is_file():
        raise UsageError(f"no such file: {args.file}")
    diags, env = corpus.check_file(path, args.distinct_endpoints, display=args.file)
    status = _status(diags)
    if status != OK:
        for d in diags:
            if d.severity == "ERROR":
                err.write(d.format() + "\n")
        return status
    expr = parse_expr(args.expr)
    checker = Checker(env, args.distinct_endpoints)
    ctx = Context()
    checker.infer(ctx, expr)
    out.write(print_expr(checker.whnf(ctx, expr)) + "\n")
    return OK


_INCLUSION = re.compile(r"^([^|]*)\|(.*)\|-(.*)$", re.S)


def parse_inclusion(text: str, taken: Sequence[str] = (),
                    distinct_endpoints: bool = True) -> ShapeInclusion:
    """Read ``"t, s | sub |- sup"``; names clashing with ``taken`` get primes."""
    m = _INCLUSION.match(text)
    if not m:
        raise UsageError(f"expected 'VARS | SUB |- SUP', got {text!r}")
    names = _split_vars(m.group(1))
    if not names:
        raise UsageError("an inclusion needs at least one cube variable")
    sub, sup = parse_tope(m.group(2), names), parse_tope(m.group(3), names)
    fresh = []
    for n in names:
        while n in taken or n in fresh:
            n += "'"
        fresh.append(n)
    try:
        return ShapeInclusion(tuple(fresh), sub, sup, distinct_endpoints)
    except ValueError:
        raise UsageError(f"{text!r} is not an inclusion: the sub-tope does not entail the ambient")


def format_inclusion(j: ShapeInclusion) -> str:
    names = list(j.names)
    return f"<{', '.join(names)}> | {print_tope(j.sub, names)} |- {print_tope(j.sup, names)}"


def cmd_pushout(args, out: TextIO, err: TextIO) -> int:
    j = parse_inclusion(args.j, (), args.distinct_endpoints)
    k = parse_inclusion(args.k, j.names, args.distinct_endpoints)
    out.write(format_inclusion(pushout_product(j, k)) + "\n")
    return OK


def cmd_corpus(args, out: TextIO, err: TextIO) -> int:
    manifest = Path(args.manifest) if args.manifest else None
    if manifest is not None and not manifest.is_file():
        raise UsageError(f"no such manifest: {args.manifest}")
    report = corpus.run_corpus(manifest, args.distinct_endpoints)
    out.write(report.render())
    return MISMATCH if report.mismatches else OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-distinct-endpoints", dest="distinct_endpoints",
                        action="store_false", default=argparse.SUPPRESS,
                        help="allow models of the interval where 0 = 1")
    parser = _Parser(prog="stt", description="Checker for simplicial type theory files.",
                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", parents=[common], help="type-check .stt files")
    p.add_argument("files", nargs="+")
    p.add_argument("--json", action="store_true", help="one JSON object per error diagnostic")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("tope", parents=[common], help="decide a tope sequent")
    p.add_argument("--vars", required=True, help="comma-separated cube variables")
    p.add_argument("--hyp", required=True)
    p.add_argument("--goal", required=True)
    p.add_argument("--oracle", type=int, metavar="N",
                   help="cross-check on all chains with at most N points")
    p.set_defaults(run=cmd_tope)

    p = sub.add_parser("normalize", parents=[common],
                       help="print the weak head normal form of an expression")
    p.add_argument("file")
    p.add_argument("expr")
    p.set_defaults(run=cmd_normalize)

    p = sub.add_parser("pushout-product", parents=[common],
                       help="pushout product of two inclusions 'VARS | SUB |- SUP'")
    p.add_argument("j")
    p.add_argument("k")
    p.set_defaults(run=cmd_pushout)

    p = sub.add_parser("corpus", parents=[common], help="corpus operations")
    csub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    r = csub.add_parser("run", parents=[common], help="check every manifest entry")
    r.add_argument("manifest", nargs="?")
    r.set_defaults(run=cmd_corpus)
    return parser


def main(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    if not hasattr(args, "distinct_endpoints"):
        args.distinct_endpoints = True
    try:
        return args.run(args, out, err)
    except UsageError as exc:
        err.write(f"stt: error: {exc}\n")
        return USAGE
    except (LexError, ParseError) as exc:
        err.write(f"ERROR <input>:{exc.line}:{exc.col} ParseError: {exc.message}\n")
        return PARSE_ERROR
    except CheckError as exc:
        err.write(f"ERROR <input> {exc}\n")
        return TYPE_ERROR
    except (corpus.PreludeError, corpus.ManifestError, FileNotFoundError) as exc:
        err.write(f"stt: error: {exc}\n")
        return USAGE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
