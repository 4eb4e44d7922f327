"""Type checking, conversion and evaluation."""

from __future__ import annotations

import itertools
import random

import pytest

from stt import corpus
from stt.checker import CATEGORIES, CheckError, Checker, Environment
from stt.kernel import (
    BOT, ONE, TOP, ZERO, App, Const, Context, CubeRef, ExtLam, ExtType, Lam, Pi, Universe,
    Var, instantiate_cube, instantiate_cube_tope,
)
from stt.syntax import parse_expr, print_expr
from stt.topes import holds

from conftest import checked, checking_files, definitions

HEADER = """import prelude
postulate B : U
postulate x : B
postulate y : B
postulate f : hom B x y
"""


def run(body: str, distinct_endpoints: bool = True):
    diags, env = corpus.check_source(HEADER + body, "t.stt", distinct_endpoints)
    return [d for d in diags if d.severity == "ERROR"], [d for d in diags if d.severity == "INFO"], env


def error_category(body: str, **kw):
    errors, _, _ = run(body, **kw)
    assert len(errors) == 1, errors
    return errors[0].category


def ok(body: str):
    errors, infos, _ = run(body)
    assert errors == [], errors[0].format()
    return [i.message for i in infos]


# ---------------------------------------------------------------------------
# strict computation

def test_arrow_endpoints_compute():
    assert ok("#normalize f 0 ~> x\n#normalize f 1 ~> y") == ["f 0 ~> x", "f 1 ~> y"]


def test_constant_arrow_is_identity():
    ok("def i : hom B x x := \\<t> -> x\n#normalize i 1 ~> x")


def test_wrong_endpoint_is_a_boundary_violation():
    assert error_category("def bad : hom B x y := \\<t> -> x") == "BoundaryViolation"


def test_normalize_mismatch_is_reported():
    assert error_category("#normalize f 0 ~> y") == "Mismatch"


def test_beta_and_projections():
    ok("#normalize (\\z -> z) x ~> x\n"
       "#normalize fst (x, y) ~> x\n"
       "#normalize snd (x, y) ~> y")


def test_j_computes_on_refl():
    ok("#normalize J B x (\\z p -> B) y x (refl x) ~> y")


def test_eta_for_functions_and_arrows():
    ok("def e1 : Id (B -> B) (\\z -> z) (\\w -> (\\v -> v) w) := refl (\\z -> z)\n"
       "def e2 : Id (hom B x y) f (\\<t> -> f t) := refl f")


def test_unit_elements_are_equal():
    ok("postulate u : Unit\ndef e : Id Unit u tt := refl u")


def test_rec_or_reduces_in_a_branch():
    ok("def g : ext (<t, s> : Square) -> B [ t === 0 |-> f s ] := \\<t, s> -> f s\n"
       "#normalize g <0, 1> ~> y")


def test_sigma_types_and_pairs():
    ok("def p : (b : B) * hom B b y := (x, f)\n#normalize fst p ~> x")


# ---------------------------------------------------------------------------
# error categories

@pytest.mark.parametrize("body,category", [
    ("postulate k : ext (<t, s> : Lambda12) -> B\ndef bad : B := k <0, 1>", "TopeFalse"),
    ("def Bad : U := ext (t : Delta1Edge) -> B [ t === 1 |-> x ]\n"
     "def Delta1Edge : U := U", "UnboundName"),
    ("def Bad : U := ext (t : {t : I | t === 0}) -> B [ t === 1 |-> x ]", "TopeFalse"),
    ("def bad : ext (t : Delta1) -> B := \\<t> -> recOR (t <= 0 |-> x | 0 <= t |-> y)",
     "BoundaryViolation"),
    ("def bad : ext (t : Delta1) -> B := \\<t> -> recOR (t === 0 |-> x | t === 1 |-> x)",
     "TopeFalse"),
    ("def bad : U := nowhere", "UnboundName"),
    ("def bad : U := x -> B", "UniverseError"),
    ("def bad : B := x y", "NotAFunction"),
    ("postulate B : U", "Mismatch"),
    ("def bad : B := f", "Mismatch"),
    ("#entails Delta2 |- Lambda12", "TopeFalse"),
    ("#entails <t> | TOP |- t === 0", "TopeFalse"),
    ("def bad : B := f <0, 0>", "Mismatch"),
])
def test_error_categories(body, category):
    assert category in CATEGORIES
    assert error_category(body) == category


def test_first_error_stops_the_file():
    errors, infos, env = run("def a : U := nope\n#normalize f 0 ~> x")
    assert len(errors) == 1 and infos == []
    assert "a" not in env


def test_overlap_needs_distinct_endpoints():
    body = "def c : ext (t : BdDelta1) -> B := \\<t> -> recBD t x y"
    assert run(body)[0] == []
    # without 0 =/= 1 the hom prelude itself no longer checks
    assert error_category(body, distinct_endpoints=False) == "PreludeError"


def test_vacuous_context_accepts_anything():
    checker = Checker(corpus.prelude_env())
    ctx = Context().bind_cube(("t",), TOP).assume(parse_tope_ctx("t === 0 /\\ t === 1"))
    checker.check(ctx, Universe(), Const("hom"))
    assert checker.convertible(ctx, Const("isSegal"), Universe(), Universe())


def parse_tope_ctx(text):
    from stt.syntax import parse_tope
    return parse_tope(text, ["t"])


# ---------------------------------------------------------------------------
# properties over the corpus

def _env_for(path):
    return checked(path)[1]


@pytest.mark.parametrize("path,decl", definitions())
def test_subject_reduction_at_whnf(path, decl):
    checker = Checker(_env_for(path))
    ctx = Context()
    checker.check(ctx, checker.whnf(ctx, decl.value), decl.type)


def test_modes_agree():
    agreed = 0
    for path, decl in definitions():
        checker = Checker(_env_for(path))
        ctx = Context()
        try:
            inferred = checker.infer(ctx, decl.value)
        except CheckError:
            continue  # lambdas need their annotation
        assert checker.conv_type(ctx, inferred, decl.type), decl.name
        checker.check(ctx, decl.value, inferred)
        agreed += 1
    assert agreed >= 10


def _same_type_pairs(seed=0, per_type=40):
    groups = {}
    for path, decl in definitions():
        groups.setdefault(print_expr(decl.type), []).append((path, decl))
    rng = random.Random(seed)
    pairs = []
    for key in sorted(groups):
        members = groups[key]
        if len(members) < 2:
            continue
        combos = list(itertools.combinations(members, 2))
        rng.shuffle(combos)
        pairs.extend(combos[:per_type])
    return pairs


@pytest.mark.parametrize("left,right", _same_type_pairs())
def test_everything_is_convertible_under_bottom(left, right):
    env = Environment({**_env_for(left[0]).entries, **_env_for(right[0]).entries})
    checker = Checker(env)
    ctx = Context().bind_cube(("t",), TOP).assume(BOT)
    assert checker.convertible(ctx, Const(left[1].name), Const(right[1].name), left[1].type)


def test_distinct_definitions_differ_outside_bottom():
    checker = Checker(corpus.prelude_env())
    assert not checker.convertible(Context(), Const("isContr"), Const("isEquiv"),
                                   checker.env["isContr"].type)


def _boundary_instances():
    """(path, context, ext lambda, ext type) reached by peeling matching binders."""
    out = []
    for path, decl in definitions():
        checker = Checker(_env_for(path))
        ctx, ty, val = Context(), decl.type, decl.value
        for _ in range(12):
            ty = checker.whnf(ctx, ty)
            val = checker.whnf(ctx, val)
            if isinstance(ty, Pi) and isinstance(val, Lam):
                ctx, ty, val = ctx.bind(val.name, ty.dom), ty.cod, val.body
                continue
            break
        if isinstance(ty, ExtType) and isinstance(val, ExtLam) and ty.partial is not None:
            out.append((path, decl.name, ctx, val, ty))
    return out


BOUNDARY = _boundary_instances()


def test_boundary_instances_exist():
    assert len(BOUNDARY) >= 5


@pytest.mark.parametrize("path,name,ctx,lam,ty", BOUNDARY, ids=[b[1] for b in BOUNDARY])
def test_boundary_coherence(path, name, ctx, lam, ty):
    checker = Checker(_env_for(path))
    psi = checker.shape_of(ty.shape)
    # points of the cube with coordinates in {0, 1}
    for point in itertools.product((ZERO, ONE), repeat=psi.arity):
        if not checker.solver.entails(TOP, instantiate_cube_tope(psi.tope, point)):
            continue
        if not checker.solver.entails(TOP, instantiate_cube_tope(ty.boundary, point)):
            continue
        lhs = App(lam, CubeRef(point))
        rhs = instantiate_cube(ty.partial, point)
        assert checker.convertible(ctx, lhs, rhs, instantiate_cube(ty.family, point)), point
