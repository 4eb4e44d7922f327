"""The entailment procedure against the finite-chain oracle and structural laws."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from stt.kernel import BOT, ONE, TOP, ZERO, And, CVar, Eq, Leq, Or, Shape, conj, disj
from stt.syntax import parse_tope
from stt.topes import (
    ShapeInclusion, TopeSolver, countermodel, dnf, entails, from_conjunct, holds, oracle,
    pushout_product, saturate, shape_included,
)

T, S, R = CVar(2), CVar(1), CVar(0)
NAMES = ("t", "s", "r")
cube_term = st.sampled_from([ZERO, ONE, T, S, R])
atom = st.builds(Eq, cube_term, cube_term) | st.builds(Leq, cube_term, cube_term)
topes = st.recursive(atom | st.sampled_from([TOP, BOT]),
                     lambda inner: st.builds(And, inner, inner) | st.builds(Or, inner, inner),
                     max_leaves=5)
solver = TopeSolver()


@settings(max_examples=400, deadline=None)
@given(hyp=topes, goal=topes, de=st.booleans())
def test_agrees_with_oracle_on_three_variables(hyp, goal, de):
    assert entails(NAMES, hyp, goal, de) == oracle(NAMES, hyp, goal, 5, de)


@settings(max_examples=300, deadline=None)
@given(phi=topes, top=st.integers(1, 4), data=st.data())
def test_dnf_preserves_meaning(phi, top, data):
    values = data.draw(st.tuples(*[st.integers(0, top)] * 3))
    via_dnf = any(all(holds(a, values, top) for a in c) for c in dnf(phi))
    assert via_dnf == holds(phi, values, top)


@settings(max_examples=200, deadline=None)
@given(phi=topes)
def test_reflexive(phi):
    assert solver.entails(phi, phi)


@settings(max_examples=200, deadline=None)
@given(a=topes, b=topes, c=topes)
def test_cut(a, b, c):
    if solver.entails(a, b) and solver.entails(b, c):
        assert solver.entails(a, c)


@settings(max_examples=200, deadline=None)
@given(a=topes, b=topes)
def test_conjunction_and_disjunction_rules(a, b):
    assert solver.entails(And(a, b), a)
    assert solver.entails(b, Or(a, b))


@settings(max_examples=200, deadline=None)
@given(hyp=topes, goal=topes)
def test_countermodel_exists_exactly_when_invalid(hyp, goal):
    cm = countermodel(NAMES, hyp, goal, 5)
    assert (cm is None) == solver.entails(hyp, goal)
    if cm is not None:
        top, values = cm
        assert holds(hyp, values, top) and not holds(goal, values, top)


def test_grid_sample_matches_oracle():
    from conftest import sequent_grid
    grid = sequent_grid()
    for hyp, goal in grid[::37]:
        assert entails(("t", "s"), hyp, goal) == oracle(("t", "s"), hyp, goal, 4)


@pytest.mark.parametrize("hyp,goal,valid", [
    ("TOP", "s <= t \\/ t <= s", True),
    ("s <= t /\\ t <= s", "s === t", True),
    ("s <= t", "t <= s", False),
    ("t === 0 /\\ t === 1", "BOT", True),
    ("s === 0 \\/ t === 1", "s <= t", True),
    ("s <= t", "s === 0 \\/ t === 1", False),
    ("BOT", "t === s", True),
    ("t <= s /\\ s === 0", "t === 0", True),
    ("TOP", "0 <= t /\\ t <= 1", True),
])
def test_named_sequents(hyp, goal, valid):
    names = ["t", "s"]
    h, g = parse_tope(hyp, names), parse_tope(goal, names)
    assert entails(names, h, g) is valid
    assert oracle(names, h, g, 4) is valid


def test_endpoint_flag():
    eq01 = Eq(ZERO, ONE)
    assert TopeSolver(True).entails(eq01, BOT)
    assert not TopeSolver(False).entails(eq01, BOT)
    # without the axiom a one-point interval is a model
    assert TopeSolver(False).entails(Eq(CVar(0), ZERO), Leq(CVar(0), ONE))
    assert oracle(("t",), eq01, BOT, 3, distinct_endpoints=False) is False


def test_saturate_detects_cycle_through_endpoints():
    x = CVar(0)
    assert saturate([Leq(ONE, x), Leq(x, ZERO)], distinct_endpoints=True).inconsistent
    leaf = saturate([Leq(ONE, x), Leq(x, ZERO)], distinct_endpoints=False)
    assert not leaf.inconsistent and leaf.eq(ZERO, ONE)


def test_saturate_is_transitive():
    leaf = saturate([Leq(T, S), Leq(S, R)])
    assert leaf.leq(T, R) and not leaf.leq(R, T)
    assert Leq(T, R) in leaf.facts()


def test_dnf_shapes():
    assert dnf(TOP) == [()]
    assert dnf(BOT) == []
    a, b, c = Eq(T, ZERO), Eq(S, ONE), Leq(T, S)
    assert dnf(And(Or(a, b), c)) == [(a, c), (b, c)]
    assert from_conjunct(()) == TOP


def test_memo_is_insensitive_to_unused_variable_numbering():
    s = TopeSolver()
    assert s.entails(Eq(CVar(3), ZERO), Leq(CVar(3), ONE))
    assert s.entails(Eq(CVar(0), ZERO), Leq(CVar(0), ONE))


def test_oracle_needs_enough_points():
    with pytest.raises(ValueError):
        oracle(("t", "s"), TOP, TOP, 3)


# ---------------------------------------------------------------------------
# shapes and the pushout product

def inclusion(names, sub, sup):
    return ShapeInclusion(tuple(names), parse_tope(sub, names), parse_tope(sup, names))


BD1 = inclusion(["t"], "t === 0 \\/ t === 1", "TOP")


def test_pushout_product_formula_instance():
    k = inclusion(["s"], "s === 0 \\/ s === 1", "TOP")
    out = pushout_product(BD1, k)
    phi, psi = Or(Eq(CVar(1), ZERO), Eq(CVar(1), ONE)), TOP
    chi, zeta = Or(Eq(CVar(0), ZERO), Eq(CVar(0), ONE)), TOP
    assert out.names == ("t", "s")
    assert out.sub == Or(And(phi, zeta), And(psi, chi))
    assert out.sup == And(psi, zeta)


def test_pushout_product_of_boundaries_is_square_boundary():
    out = pushout_product(BD1, inclusion(["s"], "s === 0 \\/ s === 1", "TOP"))
    square_bd = parse_tope("t === 0 \\/ t === 1 \\/ s === 0 \\/ s === 1", ["t", "s"])
    assert solver.equivalent(out.sub, square_bd)
    assert solver.equivalent(out.sup, TOP)


def test_pushout_product_with_identity_inclusion_is_everything():
    ident = inclusion(["s"], "TOP", "TOP")
    out = pushout_product(BD1, ident)
    assert solver.equivalent(out.sub, out.sup)


def test_pushout_product_with_empty_inclusion():
    empty = inclusion(["s"], "BOT", "TOP")
    out = pushout_product(BD1, empty)
    assert solver.equivalent(out.sub, parse_tope("t === 0 \\/ t === 1", ["t", "s"]))


def test_not_an_inclusion_is_rejected():
    with pytest.raises(ValueError):
        inclusion(["t"], "TOP", "t === 0")


def test_shape_included():
    delta2 = Shape.of(("t", "s"), parse_tope("s <= t", ["t", "s"]))
    horn = Shape.of(("t", "s"), parse_tope("s === 0 \\/ t === 1", ["t", "s"]))
    assert shape_included(horn, delta2)
    assert not shape_included(delta2, horn)
