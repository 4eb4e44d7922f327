"""Decision procedure for tope sequents over the strict interval.

A sequent ``cube | hyp |- goal`` is valid when every assignment of the cube
variables into a bounded total order (bottom 0, top 1) that satisfies
``hyp`` also satisfies ``goal``.  With ``distinct_endpoints`` on, models
must have ``0 != 1``.

The hypothesis is split into disjunctive normal form; each conjunct is
saturated into a reachability table over its terms and then case-split on
totality until every pair of mentioned terms is ordered.  A fully ordered
leaf is a linear preorder, so it decides each goal atom.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .kernel import (
    BOT, ONE, ZERO, And, Bot, CVar, CubeTerm, Eq, Leq, One, Or, Shape, Top,
    Tope, Zero, conj, free_cube_vars_tope, map_tope, shift_tope,
)

Atom = Tope  # Eq | Leq | Bot
Conjunct = Tuple[Atom, ...]


class ContextMismatch(Exception):
    """Two shapes were compared over cube contexts of different length."""


def dnf(phi: Tope) -> List[Conjunct]:
    """Disjunctive normal form: a list of conjuncts of atoms.

    ``TOP`` gives one empty conjunct and ``BOT`` none.
    """
    if isinstance(phi, Top):
        return [()]
    if isinstance(phi, Bot):
        return []
    if isinstance(phi, (Eq, Leq)):
        return [(phi,)]
    if isinstance(phi, Or):
        return dnf(phi.left) + dnf(phi.right)
    if isinstance(phi, And):
        return [l + r for l in dnf(phi.left) for r in dnf(phi.right)]
    raise TypeError(f"not a tope: {phi!r}")


def from_conjunct(atoms: Iterable[Atom]) -> Tope:
    return conj(*atoms)


def _terms_of(phi: Tope, out: set) -> None:
    if isinstance(phi, (Eq, Leq)):
        out.add(phi.left)
        out.add(phi.right)
    elif isinstance(phi, (And, Or)):
        _terms_of(phi.left, out)
        _terms_of(phi.right, out)


def _order_key(t: CubeTerm):
    if isinstance(t, Zero):
        return (0, 0)
    if isinstance(t, One):
        return (2, 0)
    return (1, t.index)


@dataclass(frozen=True)
class Leaf:
    """A saturated set of ``<=`` facts, or the inconsistency marker.

    ``terms`` always contains 0 and 1; ``le[i][j]`` means
    ``terms[i] <= terms[j]`` is derivable.
    """

    terms: Tuple[CubeTerm, ...]
    le: Tuple[Tuple[bool, ...], ...]
    inconsistent: bool = False

    def leq(self, a: CubeTerm, b: CubeTerm) -> bool:
        i, j = self.terms.index(a), self.terms.index(b)
        return self.le[i][j]

    def eq(self, a: CubeTerm, b: CubeTerm) -> bool:
        return self.leq(a, b) and self.leq(b, a)

    def facts(self) -> List[Tope]:
        """Derived atoms: ``Eq`` for mutually related pairs, ``Leq`` otherwise."""
        out: List[Tope] = []
        n = len(self.terms)
        for i in range(n):
            for j in range(n):
                if i == j or not self.le[i][j]:
                    continue
                if self.le[j][i]:
                    if i < j:
                        out.append(Eq(self.terms[i], self.terms[j]))
                else:
                    out.append(Leq(self.terms[i], self.terms[j]))
        return out

    def undecided(self, among: Optional[Iterable[CubeTerm]] = None) -> Optional[Tuple[int, int]]:
        """A pair of terms ordered neither way, restricted to ``among`` if given."""
        if among is None:
            idx = range(len(self.terms))
        else:
            wanted = set(among)
            idx = [i for i, t in enumerate(self.terms) if t in wanted]
        for a, i in enumerate(idx):
            for j in list(idx)[a + 1:]:
                if not self.le[i][j] and not self.le[j][i]:
                    return i, j
        return None


def _closure(terms: Sequence[CubeTerm], pairs: Iterable[Tuple[int, int]],
             distinct_endpoints: bool) -> Leaf:
    n = len(terms)
    le = [[i == j for j in range(n)] for i in range(n)]
    zero, one = terms.index(ZERO), terms.index(ONE)
    for i in range(n):
        le[zero][i] = True
        le[i][one] = True
    for i, j in pairs:
        le[i][j] = True
    for m in range(n):
        row_m = le[m]
        for i in range(n):
            if le[i][m]:
                row_i = le[i]
                for j in range(n):
                    if row_m[j]:
                        row_i[j] = True
    inconsistent = distinct_endpoints and le[one][zero]
    return Leaf(tuple(terms), tuple(tuple(r) for r in le), inconsistent)


def saturate(atoms: Sequence[Atom], extra_terms: Iterable[CubeTerm] = (),
             distinct_endpoints: bool = True) -> Leaf:
    """Close a conjunct under reflexivity, transitivity and the bound axioms.

    Equalities are recorded as ``<=`` both ways, which also gives congruence:
    anything related to one side is related to the other.  Antisymmetric pairs
    read back as equalities through :meth:`Leaf.eq`.
    """
    found: set = {ZERO, ONE}
    found.update(extra_terms)
    for a in atoms:
        _terms_of(a, found)
    terms = tuple(sorted(found, key=_order_key))
    if any(isinstance(a, Bot) for a in atoms):
        return Leaf(terms, _closure(terms, (), distinct_endpoints).le, True)
    pos = {t: i for i, t in enumerate(terms)}
    pairs: List[Tuple[int, int]] = []
    for a in atoms:
        if isinstance(a, Leq):
            pairs.append((pos[a.left], pos[a.right]))
        elif isinstance(a, Eq):
            pairs.append((pos[a.left], pos[a.right]))
            pairs.append((pos[a.right], pos[a.left]))
        elif isinstance(a, Top):
            continue
        else:
            raise TypeError(f"not an atom: {a!r}")
    return _closure(terms, pairs, distinct_endpoints)


def _evaluate(leaf: Leaf, goal: Tope) -> bool:
    if isinstance(goal, Top):
        return True
    if isinstance(goal, Bot):
        return False
    if isinstance(goal, Eq):
        return leaf.eq(goal.left, goal.right)
    if isinstance(goal, Leq):
        return leaf.leq(goal.left, goal.right)
    if isinstance(goal, And):
        return _evaluate(leaf, goal.left) and _evaluate(leaf, goal.right)
    if isinstance(goal, Or):
        return _evaluate(leaf, goal.left) or _evaluate(leaf, goal.right)
    raise TypeError(f"not a tope: {goal!r}")


def _linear_leaves(leaf: Leaf, distinct_endpoints: bool, among=None):
    """Every consistent refinement of ``leaf`` that is linear on ``among``.

    A consistent preorder always has a linear extension keeping its strict
    pairs, so being linear on the goal's terms is enough to decide the goal.
    """
    if leaf.inconsistent:
        return
    gap = leaf.undecided(among)
    if gap is None:
        yield leaf
        return
    i, j = gap
    base = [(a, b) for a in range(len(leaf.terms)) for b in range(len(leaf.terms))
            if leaf.le[a][b]]
    for extra in ((i, j), (j, i)):
        yield from _linear_leaves(_closure(leaf.terms, base + [extra], distinct_endpoints),
                                  distinct_endpoints, among)


def _decide(hyp: Tope, goal: Tope, distinct_endpoints: bool) -> bool:
    goal_terms: set = {ZERO, ONE}
    _terms_of(goal, goal_terms)
    for conjunct in dnf(hyp):
        leaf = saturate(conjunct, goal_terms, distinct_endpoints)
        for total in _linear_leaves(leaf, distinct_endpoints, goal_terms):
            if not _evaluate(total, goal):
                return False
    return True


def _canonical_vars(hyp: Tope, goal: Tope) -> Tuple[Tope, Tope]:
    """Rename mentioned cube variables to ``0..m-1`` so memo keys are shared."""
    used = sorted(free_cube_vars_tope(hyp) | free_cube_vars_tope(goal))
    if used == list(range(len(used))):
        return hyp, goal
    rename = {old: new for new, old in enumerate(used)}

    def on_cube(i, c, k):
        return CVar(rename[i])

    return map_tope(hyp, on_cube), map_tope(goal, on_cube)


class TopeSolver:
    """Entailment with a shared memo table.

    The memo is guarded by a lock so one solver can serve concurrent
    checking tasks.
    """

    def __init__(self, distinct_endpoints: bool = True):
        self.distinct_endpoints = distinct_endpoints
        self._memo: Dict[Tuple[Tope, Tope], bool] = {}
        self._lock = threading.Lock()

    def entails(self, hyp: Tope, goal: Tope) -> bool:
        key = _canonical_vars(hyp, goal)
        with self._lock:
            hit = self._memo.get(key)
        if hit is not None:
            return hit
        result = _decide(key[0], key[1], self.distinct_endpoints)
        with self._lock:
            self._memo[key] = result
        return result

    def equivalent(self, a: Tope, b: Tope) -> bool:
        return self.entails(a, b) and self.entails(b, a)

    def satisfiable(self, phi: Tope) -> bool:
        return not self.entails(phi, BOT)


_default_solvers = {True: TopeSolver(True), False: TopeSolver(False)}


def entails(cube_vars: Sequence[str], hyp: Tope, goal: Tope,
            distinct_endpoints: bool = True) -> bool:
    """Decide ``cube_vars | hyp |- goal``.  ``cube_vars`` only fixes the scope."""
    _check_scope(len(cube_vars), hyp)
    _check_scope(len(cube_vars), goal)
    return _default_solvers[distinct_endpoints].entails(hyp, goal)


def _check_scope(n: int, phi: Tope) -> None:
    bad = [i for i in free_cube_vars_tope(phi) if i >= n]
    if bad:
        raise ValueError(f"tope mentions cube variable {bad[0]} outside a context of {n}")


# ---------------------------------------------------------------------------
# shapes


@dataclass(frozen=True)
class ShapeInclusion:
    """``{names | sub} ⊆ {names | sup}``; validity is checked on construction."""

    names: Tuple[str, ...]
    sub: Tope
    sup: Tope
    distinct_endpoints: bool = True

    def __post_init__(self):
        if not entails(self.names, self.sub, self.sup, self.distinct_endpoints):
            raise ValueError("sub-tope does not entail the ambient tope")

    @classmethod
    def of(cls, sub: Shape, sup: Shape, distinct_endpoints: bool = True) -> "ShapeInclusion":
        if sub.arity != sup.arity:
            raise ContextMismatch(f"cube contexts of length {sub.arity} and {sup.arity}")
        return cls(tuple(sup.names), sub.tope, sup.tope, distinct_endpoints)


def shape_included(sub: Shape, sup: Shape, distinct_endpoints: bool = True) -> bool:
    if sub.arity != sup.arity:
        raise ContextMismatch(f"cube contexts of length {sub.arity} and {sup.arity}")
    return entails(sup.names, sub.tope, sup.tope, distinct_endpoints)


def pushout_product(j: ShapeInclusion, k: ShapeInclusion) -> ShapeInclusion:
    """Leibniz tensor of two shape inclusions.

    For ``j = (phi ⊆ psi)`` over ``I`` and ``k = (chi ⊆ zeta)`` over ``J`` the
    result lives over ``I ++ J`` with sub-tope ``(phi ∧ zeta) ∨ (psi ∧ chi)``
    and ambient ``psi ∧ zeta``.
    """
    m = len(k.names)
    phi, psi = shift_tope(j.sub, m), shift_tope(j.sup, m)
    chi, zeta = k.sub, k.sup
    sub = Or(And(phi, zeta), And(psi, chi))
    sup = And(psi, zeta)
    return ShapeInclusion(tuple(j.names) + tuple(k.names), sub, sup, j.distinct_endpoints)


# ---------------------------------------------------------------------------
# brute-force semantics


def _value(t: CubeTerm, assignment: Sequence[int], top: int, n: int) -> int:
    if isinstance(t, Zero):
        return 0
    if isinstance(t, One):
        return top
    return assignment[n - 1 - t.index]


def holds(phi: Tope, assignment: Sequence[int], top: int) -> bool:
    """Evaluate ``phi`` in the chain ``0..top``; ``assignment`` is in name order."""
    n = len(assignment)
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Eq):
        return _value(phi.left, assignment, top, n) == _value(phi.right, assignment, top, n)
    if isinstance(phi, Leq):
        return _value(phi.left, assignment, top, n) <= _value(phi.right, assignment, top, n)
    if isinstance(phi, And):
        return holds(phi.left, assignment, top) and holds(phi.right, assignment, top)
    if isinstance(phi, Or):
        return holds(phi.left, assignment, top) or holds(phi.right, assignment, top)
    raise TypeError(f"not a tope: {phi!r}")


def oracle(cube_vars: Sequence[str], hyp: Tope, goal: Tope, max_chain: int,
           distinct_endpoints: bool = True) -> bool:
    """Check a sequent by enumerating all finite chains up to ``max_chain`` points.

    Chains with ``len(cube_vars) + 2`` points already realise every linear
    preorder of the variables together with the endpoints.
    """
    n = len(cube_vars)
    if max_chain < n + 2:
        raise ValueError(f"max_chain must be at least {n + 2}")
    smallest = 2 if distinct_endpoints else 1
    for size in range(smallest, max_chain + 1):
        top = size - 1
        for assignment in itertools.product(range(size), repeat=n):
            if holds(hyp, assignment, top) and not holds(goal, assignment, top):
                return False
    return True


def countermodel(cube_vars: Sequence[str], hyp: Tope, goal: Tope, max_chain: int,
                 distinct_endpoints: bool = True) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """A ``(chain_top, assignment)`` refuting the sequent, if one exists."""
    n = len(cube_vars)
    smallest = 2 if distinct_endpoints else 1
    for size in range(smallest, max_chain + 1):
        for assignment in itertools.product(range(size), repeat=n):
            if holds(hyp, assignment, size - 1) and not holds(goal, assignment, size - 1):
                return size - 1, assignment
    return None
