"""Acceptance criteria 1-7, one pass/fail line each.

Run with pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import io
import itertools
import os
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import pytest

from conftest import ACCEPTANCE_LINES, CORPUS, all_decls, checked, definitions, sequent_grid
from stt import corpus
from stt.checker import Checker, Environment
from stt.cli import main as cli_main
from stt.kernel import BOT, TOP, Const, Context
from stt.syntax import Span, parse_module, parse_tope, print_decl
from stt.topes import ShapeInclusion, TopeSolver, entails, oracle, pushout_product


def report(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    print(ACCEPTANCE_LINES[-1])


def test_criterion_1_solver_matches_oracle():
    start = time.perf_counter()
    grid = sequent_grid()
    solver = TopeSolver()
    disagreements = [(h, g) for h, g in grid
                     if solver.entails(h, g) != oracle(("t", "s"), h, g, 4)]
    elapsed = time.perf_counter() - start
    ok = not disagreements and elapsed < 60
    report(1, ok, f"{len(grid) - len(disagreements)}/{len(grid)} sequents agree "
                  f"with the 4-point oracle in {elapsed:.1f}s")
    assert ok


def test_criterion_2_named_shape_battery():
    checker = Checker(corpus.prelude_env())
    shape = checker.shape_of

    def included(sub, sup):
        a, b = shape(Const(sub)), shape(Const(sup))
        got = entails(b.names, a.tope, b.tope)
        assert got == oracle(b.names, a.tope, b.tope, b.arity + 3), (sub, sup)
        return got

    valid = [("BdDelta1", "Delta1"), ("Lambda02", "Delta2"), ("Lambda12", "Delta2"),
             ("Lambda22", "Delta2"), ("BdDelta2", "Delta2"), ("Span", "Square"),
             ("Cospan", "Square")]
    invalid = [("Delta2", "Lambda12"), ("Square", "Span")]
    results = [included(a, b) for a, b in valid] + [not included(a, b) for a, b in invalid]
    # horn tope as written in the shape definitions
    horn = shape(Const("Lambda12")).tope
    literal = parse_tope("s === 0 \\/ t === 1", ["t", "s"])
    ok = all(results) and horn == literal
    report(2, ok, f"{sum(results)}/{len(results)} shape verdicts correct and oracle-confirmed")
    assert ok


def test_criterion_3_pushout_product():
    bd_t = ShapeInclusion(("t",), parse_tope("t === 0 \\/ t === 1", ["t"]), TOP)
    bd_s = ShapeInclusion(("s",), parse_tope("s === 0 \\/ s === 1", ["s"]), TOP)
    out = pushout_product(bd_t, bd_s)
    square_bd = parse_tope("t === 0 \\/ t === 1 \\/ s === 0 \\/ s === 1", ["t", "s"])
    formula = parse_tope("(t === 0 \\/ t === 1) /\\ TOP \\/ TOP /\\ (s === 0 \\/ s === 1)",
                         ["t", "s"])
    solver = TopeSolver()
    ok = solver.equivalent(out.sub, square_bd) and out.sub == formula and out.sup == parse_tope(
        "TOP /\\ TOP", ["t", "s"])
    report(3, ok, "boundary x boundary is equivalent to the square boundary; formula exact")
    assert ok


def test_criterion_4_corpus():
    start = time.perf_counter()
    rep = corpus.run_corpus()
    elapsed = time.perf_counter() - start
    checks = [r for r in rep.results if r.entry.expect == "CHECKS"]
    fails = [r for r in rep.results if r.entry.expect != "CHECKS"]
    defs = sum(r.definitions for r in checks)
    ok = (rep.mismatches == 0 and len(checks) >= 17 and len(fails) >= 8 and defs >= 30
          and elapsed < 10)
    report(4, ok, f"{len(checks)} CHECKS ({defs} definitions), {len(fails)} FAILS, "
                  f"{rep.mismatches} mismatches, {elapsed:.2f}s")
    assert ok, rep.render()


def test_criterion_5_golden_computation():
    out, err = io.StringIO(), io.StringIO()
    old = os.getcwd()
    os.chdir(CORPUS)
    try:
        code = cli_main(["check", "golden/compute.stt"], out, err)
    finally:
        os.chdir(old)
    expected = (CORPUS / "golden" / "compute.expected").read_text()
    lines = out.getvalue().splitlines()
    ok = (code == 0 and err.getvalue() == "" and out.getvalue() == expected
          and any(l.endswith("normalize: f 0 ~> x") for l in lines)
          and any(l.endswith("check: \\<t> -> b : ext (t : Delta1) -> B "
                             "[ t === 0 \\/ t === 1 |-> recBD t b b ]") for l in lines))
    report(5, ok, "golden output matches byte for byte")
    assert ok


def _strip(d):
    from dataclasses import replace
    return replace(d, span=Span(0, 0))


def test_criterion_6_checker_properties():
    # subject reduction at weak head normal form
    failures = []
    defs = definitions()
    for path, decl in defs:
        checker = Checker(checked(path)[1])
        try:
            checker.check(Context(), checker.whnf(Context(), decl.value), decl.type)
        except Exception as exc:  # noqa: BLE001 - recorded as a failure
            failures.append((decl.name, exc))
    # round trip
    decls = all_decls()
    trips = sum(_strip(parse_module(print_decl(d)).decls[0]) == _strip(d) for _, d in decls)
    # convertibility under an empty tope context
    by_type = {}
    for path, decl in defs:
        by_type.setdefault(decl.type, []).append((path, decl))
    rng = random.Random(7)
    pairs = [p for group in by_type.values() if len(group) > 1
             for p in itertools.combinations(group, 2)]
    rng.shuffle(pairs)
    pairs = pairs[:200]
    bottom_ok = 0
    for (p1, d1), (p2, d2) in pairs:
        env = Environment({**checked(p1)[1].entries, **checked(p2)[1].entries})
        ctx = Context().bind_cube(("t",), TOP).assume(BOT)
        bottom_ok += Checker(env).convertible(ctx, Const(d1.name), Const(d2.name), d1.type)
    ok = not failures and trips == len(decls) and bottom_ok == len(pairs) and pairs
    report(6, bool(ok), f"subject reduction {len(defs) - len(failures)}/{len(defs)}, "
                        f"round trip {trips}/{len(decls)}, bottom conversion "
                        f"{bottom_ok}/{len(pairs)}")
    assert ok, failures[:3]


def test_criterion_7_determinism():
    runs = []
    for _ in range(2):
        out, err = io.StringIO(), io.StringIO()
        code = cli_main(["corpus", "run"], out, err)
        runs.append((code, out.getvalue(), err.getvalue()))
    ok = runs[0] == runs[1] and runs[0][0] == 0
    report(7, ok, "two corpus runs produce identical reports")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
