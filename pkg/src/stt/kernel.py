"""Core syntax for simplicial type theory.

Three layers share this module: cube terms, topes over cube terms, and the
expression language (terms and types are one syntactic category).

Binding is positional.  Term variables and cube variables live in two
separate de Bruijn index spaces: ``Var(i)`` counts enclosing term binders
(Pi, Lam, Sigma), ``CVar(i)`` counts enclosing cube binders (ExtType,
ExtLam).  Binder names are kept only for printing and never take part in
equality, so ``==`` on nodes is alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Tuple, Union

# ---------------------------------------------------------------------------
# cube layer


@dataclass(frozen=True, slots=True)
class CVar:
    index: int


@dataclass(frozen=True, slots=True)
class Zero:
    pass


@dataclass(frozen=True, slots=True)
class One:
    pass


CubeTerm = Union[CVar, Zero, One]

ZERO = Zero()
ONE = One()

# ---------------------------------------------------------------------------
# tope layer (no negation)


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Bot:
    pass


@dataclass(frozen=True, slots=True)
class And:
    left: "Tope"
    right: "Tope"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Tope"
    right: "Tope"


@dataclass(frozen=True, slots=True)
class Eq:
    left: CubeTerm
    right: CubeTerm


@dataclass(frozen=True, slots=True)
class Leq:
    left: CubeTerm
    right: CubeTerm


Tope = Union[Top, Bot, And, Or, Eq, Leq]

TOP = Top()
BOT = Bot()


def conj(*topes: Tope) -> Tope:
    """Right-nested conjunction, dropping ``TOP`` units."""
    parts = [t for t in topes if t != TOP]
    if not parts:
        return TOP
    out = parts[-1]
    for t in reversed(parts[:-1]):
        out = And(t, out)
    return out


def disj(*topes: Tope) -> Tope:
    parts = [t for t in topes if t != BOT]
    if not parts:
        return BOT
    out = parts[-1]
    for t in reversed(parts[:-1]):
        out = Or(t, out)
    return out


@dataclass(frozen=True, slots=True)
class Shape:
    """A cube context together with a tope; ``CVar(0)`` is the last name."""

    names: Tuple[str, ...] = field(compare=False)
    arity: int
    tope: Tope

    @classmethod
    def of(cls, names, tope: Tope) -> "Shape":
        names = tuple(names)
        return cls(names, len(names), tope)


# ---------------------------------------------------------------------------
# expressions


@dataclass(frozen=True, slots=True)
class Var:
    index: int


@dataclass(frozen=True, slots=True)
class Const:
    """Reference to a top-level declaration."""

    name: str


@dataclass(frozen=True, slots=True)
class Universe:
    pass


@dataclass(frozen=True, slots=True)
class Pi:
    name: str = field(compare=False)
    dom: "Expr"
    cod: "Expr"


@dataclass(frozen=True, slots=True)
class Lam:
    name: str = field(compare=False)
    body: "Expr"


@dataclass(frozen=True, slots=True)
class App:
    fn: "Expr"
    arg: "Expr"


@dataclass(frozen=True, slots=True)
class Sigma:
    name: str = field(compare=False)
    fst: "Expr"
    snd: "Expr"


@dataclass(frozen=True, slots=True)
class Pair:
    fst: "Expr"
    snd: "Expr"


@dataclass(frozen=True, slots=True)
class Fst:
    pair: "Expr"


@dataclass(frozen=True, slots=True)
class Snd:
    pair: "Expr"


@dataclass(frozen=True, slots=True)
class IdType:
    ty: "Expr"
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True, slots=True)
class Refl:
    tm: "Expr"


@dataclass(frozen=True, slots=True)
class IdJ:
    """``J A a C d b p`` with ``C : (y : A) -> Id A a y -> U`` and ``d : C a (refl a)``."""

    ty: "Expr"
    lhs: "Expr"
    motive: "Expr"
    base: "Expr"
    rhs: "Expr"
    path: "Expr"


@dataclass(frozen=True, slots=True)
class UnitType:
    pass


@dataclass(frozen=True, slots=True)
class UnitTt:
    pass


@dataclass(frozen=True, slots=True)
class ExtType:
    """Extension type over a shape.

    ``shape`` is a closed expression that normalizes to a ``ShapeType``.
    ``family``, ``boundary`` and ``partial`` live under the shape's cube
    variables.  ``boundary == BOT`` with ``partial is None`` is the plain
    shape-indexed function type.
    """

    names: Tuple[str, ...] = field(compare=False)
    shape: "Expr"
    family: "Expr"
    boundary: Tope
    partial: Optional["Expr"]


@dataclass(frozen=True, slots=True)
class ExtLam:
    names: Tuple[str, ...] = field(compare=False)
    arity: int
    body: "Expr"


@dataclass(frozen=True, slots=True)
class CubeRef:
    """A cube point: one cube term per variable of the target shape."""

    terms: Tuple[CubeTerm, ...]


@dataclass(frozen=True, slots=True)
class ShapeType:
    shape: Shape


@dataclass(frozen=True, slots=True)
class RecOr:
    """Tope-directed case analysis ``recOR (phi |-> a | chi |-> b ...)``."""

    branches: Tuple[Tuple[Tope, "Expr"], ...]


Expr = Union[
    Var, Const, Universe, Pi, Lam, App, Sigma, Pair, Fst, Snd, IdType, Refl, IdJ,
    UnitType, UnitTt, ExtType, ExtLam, CubeRef, ShapeType, RecOr,
]

U = Universe()
UNIT = UnitType()
TT = UnitTt()


def rec_bd(t: CubeTerm, a: Expr, b: Expr) -> RecOr:
    """Boundary split on ``t === 0`` / ``t === 1``."""
    return RecOr(((Eq(t, ZERO), a), (Eq(t, ONE), b)))


def arrow(dom: Expr, cod: Expr) -> Pi:
    """Non-dependent function type; ``cod`` is given in the outer scope."""
    return Pi("_", dom, shift(cod, 1))


def ext_lam(names, body: Expr) -> ExtLam:
    names = tuple(names)
    return ExtLam(names, len(names), body)


# ---------------------------------------------------------------------------
# generic traversal

VarFn = Callable[[int, int, int], Expr]
CubeFn = Callable[[int, int, int], CubeTerm]


def _map_cube(t: CubeTerm, on_cube: CubeFn, c: int, k: int) -> CubeTerm:
    if isinstance(t, CVar):
        return on_cube(t.index, c, k)
    return t


def map_tope(phi: Tope, on_cube: CubeFn, c: int = 0, k: int = 0) -> Tope:
    if isinstance(phi, (Top, Bot)):
        return phi
    if isinstance(phi, And):
        return And(map_tope(phi.left, on_cube, c, k), map_tope(phi.right, on_cube, c, k))
    if isinstance(phi, Or):
        return Or(map_tope(phi.left, on_cube, c, k), map_tope(phi.right, on_cube, c, k))
    if isinstance(phi, Eq):
        return Eq(_map_cube(phi.left, on_cube, c, k), _map_cube(phi.right, on_cube, c, k))
    if isinstance(phi, Leq):
        return Leq(_map_cube(phi.left, on_cube, c, k), _map_cube(phi.right, on_cube, c, k))
    raise TypeError(f"not a tope: {phi!r}")


def _keep_var(i: int, c: int, k: int) -> Expr:
    return Var(i)


def _keep_cube(i: int, c: int, k: int) -> CubeTerm:
    return CVar(i)


def traverse(e: Expr, on_var: VarFn = _keep_var, on_cube: CubeFn = _keep_cube,
             c: int = 0, k: int = 0) -> Expr:
    """Rebuild ``e`` mapping every free variable occurrence.

    ``c`` and ``k`` count the term and cube binders passed so far.
    """

    def go(e: Expr, c: int, k: int) -> Expr:
        match e:
            case Var(i):
                return on_var(i, c, k)
            case Const() | Universe() | UnitType() | UnitTt() | ShapeType():
                return e
            case Pi(name, dom, cod):
                return Pi(name, go(dom, c, k), go(cod, c + 1, k))
            case Lam(name, body):
                return Lam(name, go(body, c + 1, k))
            case App(fn, arg):
                return App(go(fn, c, k), go(arg, c, k))
            case Sigma(name, a, b):
                return Sigma(name, go(a, c, k), go(b, c + 1, k))
            case Pair(a, b):
                return Pair(go(a, c, k), go(b, c, k))
            case Fst(p):
                return Fst(go(p, c, k))
            case Snd(p):
                return Snd(go(p, c, k))
            case IdType(ty, lhs, rhs):
                return IdType(go(ty, c, k), go(lhs, c, k), go(rhs, c, k))
            case Refl(tm):
                return Refl(go(tm, c, k))
            case IdJ(ty, lhs, motive, base, rhs, path):
                return IdJ(go(ty, c, k), go(lhs, c, k), go(motive, c, k),
                           go(base, c, k), go(rhs, c, k), go(path, c, k))
            case ExtType(names, shape, family, boundary, partial):
                n = len(names)
                return ExtType(
                    names, shape, go(family, c, k + n),
                    map_tope(boundary, on_cube, c, k + n),
                    None if partial is None else go(partial, c, k + n),
                )
            case ExtLam(names, arity, body):
                return ExtLam(names, arity, go(body, c, k + arity))
            case CubeRef(terms):
                return CubeRef(tuple(_map_cube(t, on_cube, c, k) for t in terms))
            case RecOr(branches):
                return RecOr(tuple((map_tope(phi, on_cube, c, k), go(a, c, k))
                                   for phi, a in branches))
        raise TypeError(f"not an expression: {e!r}")

    return go(e, c, k)


# ---------------------------------------------------------------------------
# shifting and substitution


def shift(e: Expr, d: int, dc: int = 0) -> Expr:
    """Shift free term indices by ``d`` and free cube indices by ``dc``."""
    if d == 0 and dc == 0:
        return e
    return traverse(
        e,
        lambda i, c, k: Var(i + d) if i >= c else Var(i),
        lambda i, c, k: CVar(i + dc) if i >= k else CVar(i),
    )


def shift_cube_term(t: CubeTerm, dc: int, cutoff: int = 0) -> CubeTerm:
    if isinstance(t, CVar) and t.index >= cutoff:
        return CVar(t.index + dc)
    return t


def shift_tope(phi: Tope, dc: int, cutoff: int = 0) -> Tope:
    if dc == 0:
        return phi
    return map_tope(phi, lambda i, c, k: CVar(i + dc) if i >= k + cutoff else CVar(i))


def subst_var(e: Expr, index: int, repl: Expr) -> Expr:
    """Replace free term variable ``index`` by ``repl`` (both in the scope of ``e``).

    No binder is removed, so other indices are left as they are.
    """

    def on_var(i: int, c: int, k: int) -> Expr:
        if i == index + c:
            return shift(repl, c, k)
        return Var(i)

    return traverse(e, on_var)


def subst_cube(e, index: int, t: CubeTerm):
    """Replace free cube variable ``index`` by ``t`` in an expression or tope."""

    def on_cube(i: int, c: int, k: int) -> CubeTerm:
        if i == index + k:
            return shift_cube_term(t, k)
        return CVar(i)

    if isinstance(e, (Top, Bot, And, Or, Eq, Leq)):
        return map_tope(e, on_cube)
    return traverse(e, on_cube=on_cube)


def instantiate(body: Expr, repl: Expr) -> Expr:
    """Substitute term variable 0 of ``body`` by ``repl`` and drop the binder."""

    def on_var(i: int, c: int, k: int) -> Expr:
        if i < c:
            return Var(i)
        if i == c:
            return shift(repl, c, k)
        return Var(i - 1)

    return traverse(body, on_var)


def _inst_cube_fn(terms: Tuple[CubeTerm, ...]) -> CubeFn:
    n = len(terms)

    def on_cube(i: int, c: int, k: int) -> CubeTerm:
        if i < k:
            return CVar(i)
        j = i - k
        if j < n:
            return shift_cube_term(terms[n - 1 - j], k)
        return CVar(i - n)

    return on_cube


def instantiate_cube(body: Expr, terms: Tuple[CubeTerm, ...]) -> Expr:
    """Substitute the ``len(terms)`` innermost cube variables and drop them.

    ``terms[j]`` replaces the variable named ``names[j]`` of the binder, i.e.
    the last term replaces ``CVar(0)``.
    """
    return traverse(body, on_cube=_inst_cube_fn(tuple(terms)))


def instantiate_cube_tope(phi: Tope, terms: Tuple[CubeTerm, ...]) -> Tope:
    return map_tope(phi, _inst_cube_fn(tuple(terms)))


def cube_vars(n: int) -> Tuple[CubeTerm, ...]:
    """The bound variables of an ``n``-ary cube binder, in name order."""
    return tuple(CVar(n - 1 - j) for j in range(n))


def alpha_eq(a: Expr, b: Expr) -> bool:
    return a == b


# ---------------------------------------------------------------------------
# free variables


def free_cube_vars_tope(phi: Tope) -> set:
    out: set = set()

    def on_cube(i: int, c: int, k: int) -> CubeTerm:
        if i >= k:
            out.add(i - k)
        return CVar(i)

    map_tope(phi, on_cube)
    return out


def free_vars(e: Expr) -> Tuple[set, set]:
    """Free term and cube indices of ``e``."""
    terms: set = set()
    cubes: set = set()

    def on_var(i: int, c: int, k: int) -> Expr:
        if i >= c:
            terms.add(i - c)
        return Var(i)

    def on_cube(i: int, c: int, k: int) -> CubeTerm:
        if i >= k:
            cubes.add(i - k)
        return CVar(i)

    traverse(e, on_var, on_cube)
    return terms, cubes


# ---------------------------------------------------------------------------
# typing contexts


@dataclass(frozen=True, slots=True)
class Entry:
    name: str
    type: Expr
    value: Optional[Expr]
    cube_depth: int


@dataclass(frozen=True)
class Context:
    """``cube | tope | vars``.

    Each entry's type (and definiens) is scoped over the entries before it
    and the first ``cube_depth`` cube variables; :meth:`lookup` shifts it to
    the current scope.
    """

    cube: Tuple[str, ...] = ()
    tope: Tope = TOP
    vars: Tuple[Entry, ...] = ()

    def lookup(self, index: int) -> Entry:
        entry = self.vars[-1 - index]
        dc = len(self.cube) - entry.cube_depth
        return Entry(
            entry.name,
            shift(entry.type, index + 1, dc),
            None if entry.value is None else shift(entry.value, index + 1, dc),
            len(self.cube),
        )

    def bind(self, name: str, ty: Expr, value: Optional[Expr] = None) -> "Context":
        return replace(self, vars=self.vars + (Entry(name, ty, value, len(self.cube)),))

    def bind_cube(self, names, tope: Tope = TOP) -> "Context":
        """Enter a cube binder; ``tope`` is scoped over the new variables."""
        names = tuple(names)
        return Context(self.cube + names, conj(shift_tope(self.tope, len(names)), tope), self.vars)

    def assume(self, tope: Tope) -> "Context":
        return replace(self, tope=conj(self.tope, tope))

    def with_tope(self, tope: Tope) -> "Context":
        return replace(self, tope=tope)

    def names(self) -> Tuple[str, ...]:
        return tuple(e.name for e in self.vars)
