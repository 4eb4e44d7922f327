"""Bidirectional type checking with tope-sensitive definitional equality."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .kernel import (
    BOT, ONE, TOP, TT, U, UNIT, ZERO, App, Const, Context, CubeRef, Eq, Expr, ExtLam, ExtType,
    Fst, IdJ, IdType, Lam, Pair, Pi, RecOr, Refl, Shape, ShapeType, Sigma, Snd, Tope, Universe,
    UnitTt, UnitType, Var, conj, cube_vars, disj, instantiate, instantiate_cube,
    instantiate_cube_tope, shift, shift_tope,
)
from .syntax import Decl, SourceModule, print_expr, print_tope
from .topes import TopeSolver, dnf, from_conjunct

CATEGORIES = ("Mismatch", "NotAFunction", "BoundaryViolation", "TopeFalse", "UnboundName",
              "UniverseError")


class CheckError(Exception):
    """A type error; ``category`` is one of :data:`CATEGORIES`."""

    def __init__(self, category: str, message: str, sequent: Optional[Tuple] = None):
        super().__init__(f"{category}: {message}")
        self.category = category
        self.message = message
        self.sequent = sequent
        self.line = 0
        self.col = 0


@dataclass(frozen=True)
class Global:
    type: Expr
    value: Optional[Expr]


@dataclass
class Environment:
    entries: Dict[str, Global] = field(default_factory=dict)

    def copy(self) -> "Environment":
        return Environment(dict(self.entries))

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __getitem__(self, name: str) -> Global:
        return self.entries[name]


def _scope(ctx: Context):
    return [(n, "cube") for n in ctx.cube] + [(n, "term") for n in ctx.names()]


class Checker:
    def __init__(self, env: Optional[Environment] = None, distinct_endpoints: bool = True,
                 solver: Optional[TopeSolver] = None):
        self.env = env if env is not None else Environment()
        self.solver = solver or TopeSolver(distinct_endpoints)

    # -- printing helpers

    def show(self, ctx: Context, e: Expr) -> str:
        return print_expr(e, _scope(ctx))

    def show_tope(self, ctx: Context, phi: Tope) -> str:
        return print_tope(phi, ctx.cube)

    # -- topes

    def entails(self, ctx: Context, goal: Tope) -> bool:
        return self.solver.entails(ctx.tope, goal)

    def satisfiable(self, ctx: Context) -> bool:
        return self.solver.satisfiable(ctx.tope)

    def leaves(self, ctx: Context) -> Iterator[Context]:
        """Satisfiable disjuncts of the tope context, as contexts."""
        conjuncts = dnf(ctx.tope)
        if len(conjuncts) == 1:
            if self.solver.satisfiable(ctx.tope):
                yield ctx
            return
        for atoms in conjuncts:
            phi = from_conjunct(atoms)
            if self.solver.satisfiable(phi):
                yield ctx.with_tope(phi)

    def shape_of(self, e: Expr) -> Shape:
        w = self.whnf(Context(), e)
        if isinstance(w, Const) and w.name not in self.env:
            raise CheckError("UnboundName", f"unbound name {w.name!r}")
        if not isinstance(w, ShapeType):
            raise CheckError("UniverseError", f"{print_expr(e)} is not a shape")
        return w.shape

    # -- evaluation

    def whnf(self, ctx: Context, e: Expr) -> Expr:
        while True:
            match e:
                case Var(i):
                    value = ctx.lookup(i).value
                    if value is None:
                        return e
                    e = value
                case Const(name):
                    entry = self.env.entries.get(name)
                    if entry is None or entry.value is None:
                        return e
                    e = entry.value
                case App(fn, arg):
                    head = self.whnf(ctx, fn)
                    if isinstance(head, Lam):
                        e = instantiate(head.body, arg)
                        continue
                    if (isinstance(head, ExtLam) and isinstance(arg, CubeRef)
                            and len(arg.terms) == head.arity):
                        e = instantiate_cube(head.body, arg.terms)
                        continue
                    reduced = self._boundary(ctx, head, arg)
                    if reduced is None:
                        return App(head, arg)
                    e = reduced
                case Fst(p) | Snd(p):
                    inner = self.whnf(ctx, p)
                    if isinstance(inner, Pair):
                        e = inner.fst if isinstance(e, Fst) else inner.snd
                        continue
                    return Fst(inner) if isinstance(e, Fst) else Snd(inner)
                case IdJ(ty, lhs, motive, base, rhs, path):
                    p = self.whnf(ctx, path)
                    if isinstance(p, Refl):
                        e = base
                        continue
                    return IdJ(ty, lhs, motive, base, rhs, p)
                case RecOr(branches):
                    for phi, branch in branches:
                        if self.entails(ctx, phi):
                            e = branch
                            break
                    else:
                        return e
                case _:
                    return e

    def _boundary(self, ctx: Context, head: Expr, arg: Expr) -> Optional[Expr]:
        """Reduce a neutral cube application that lands on its boundary."""
        if not isinstance(arg, CubeRef):
            return None
        ty = self.type_of_neutral(ctx, head)
        if ty is None:
            return None
        ty = self.whnf(ctx, ty)
        if not isinstance(ty, ExtType) or ty.partial is None:
            return None
        if len(arg.terms) != len(ty.names):
            return None
        if self.entails(ctx, instantiate_cube_tope(ty.boundary, arg.terms)):
            return instantiate_cube(ty.partial, arg.terms)
        return None

    def type_of_neutral(self, ctx: Context, e: Expr) -> Optional[Expr]:
        """Type of an already-checked neutral term, without re-checking arguments."""
        match e:
            case Var(i):
                return ctx.lookup(i).type
            case Const(name):
                entry = self.env.entries.get(name)
                return None if entry is None else entry.type
            case App(fn, arg):
                ty = self.type_of_neutral(ctx, fn)
                if ty is None:
                    return None
                ty = self.whnf(ctx, ty)
                if isinstance(ty, Pi):
                    return instantiate(ty.cod, arg)
                if isinstance(ty, ExtType) and isinstance(arg, CubeRef):
                    return instantiate_cube(ty.family, arg.terms)
                return None
            case Fst(p) | Snd(p):
                ty = self.type_of_neutral(ctx, p)
                if ty is None:
                    return None
                ty = self.whnf(ctx, ty)
                if not isinstance(ty, Sigma):
                    return None
                return ty.fst if isinstance(e, Fst) else instantiate(ty.snd, Fst(p))
            case IdJ(_, _, motive, _, rhs, path):
                return App(App(motive, rhs), path)
        return None

    # -- conversion

    def convertible(self, ctx: Context, a: Expr, b: Expr, ty: Expr) -> bool:
        if a == b:
            return True
        return all(self._conv_leaf(leaf, a, b, ty) for leaf in self.leaves(ctx))

    def conv_type(self, ctx: Context, a: Expr, b: Expr) -> bool:
        return self.convertible(ctx, a, b, U)

    def _conv_leaf(self, ctx: Context, a: Expr, b: Expr, ty: Expr) -> bool:
        if a == b:
            return True
        t = self.whnf(ctx, ty)
        match t:
            case Pi(name, dom, cod):
                inner = ctx.bind(name, dom)
                return self.convertible(inner, App(shift(a, 1), Var(0)),
                                        App(shift(b, 1), Var(0)), cod)
            case ExtType(names, shape, family, _, _):
                psi = self.shape_of(shape)
                n = psi.arity
                inner = ctx.bind_cube(names, psi.tope)
                point = CubeRef(cube_vars(n))
                return self.convertible(inner, App(shift(a, 0, n), point),
                                        App(shift(b, 0, n), point), family)
            case Sigma(_, fst, snd):
                if not self.convertible(ctx, Fst(a), Fst(b), fst):
                    return False
                return self.convertible(ctx, Snd(a), Snd(b), instantiate(snd, Fst(a)))
            case UnitType():
                return True
            case ShapeType():
                wa, wb = self.whnf(ctx, a), self.whnf(ctx, b)
                if isinstance(wa, CubeRef) and isinstance(wb, CubeRef):
                    return len(wa.terms) == len(wb.terms) and all(
                        self.entails(ctx, Eq(x, y)) for x, y in zip(wa.terms, wb.terms))
                return self._conv_whnf(ctx, wa, wb, t)
            case RecOr(branches):
                return all(self.convertible(ctx.assume(phi), a, b, branch)
                           for phi, branch in branches)
        return self._conv_whnf(ctx, self.whnf(ctx, a), self.whnf(ctx, b), t)

    def _conv_whnf(self, ctx: Context, a: Expr, b: Expr, ty: Expr) -> bool:
        if a == b:
            return True
        for stuck, other, flip in ((a, b, False), (b, a, True)):
            if isinstance(stuck, RecOr):
                return all(self.convertible(ctx.assume(phi), x, other, ty)
                           for phi, x in stuck.branches)
        match a, b:
            case (Universe(), Universe()) | (UnitType(), UnitType()) | (UnitTt(), UnitTt()):
                return True
            case (Pi(), Pi()) | (Sigma(), Sigma()):
                if type(a) is not type(b):
                    return False
                x, y = (a.dom, a.cod) if isinstance(a, Pi) else (a.fst, a.snd)
                x2, y2 = (b.dom, b.cod) if isinstance(b, Pi) else (b.fst, b.snd)
                return self.conv_type(ctx, x, x2) and self.conv_type(ctx.bind(a.name, x), y, y2)
            case (IdType(), IdType()):
                return (self.conv_type(ctx, a.ty, b.ty)
                        and self.convertible(ctx, a.lhs, b.lhs, a.ty)
                        and self.convertible(ctx, a.rhs, b.rhs, a.ty))
            case (ShapeType(), ShapeType()):
                return (a.shape.arity == b.shape.arity
                        and self.solver.equivalent(a.shape.tope, b.shape.tope))
            case (ExtType(), ExtType()):
                return self._conv_ext(ctx, a, b)
            case (Refl(), Refl()):
                ity = self.whnf(ctx, ty)
                if isinstance(ity, IdType):
                    return self.convertible(ctx, a.tm, b.tm, ity.ty)
                return self._conv_whnf(ctx, a.tm, b.tm, ity)
            case (Pair(), Pair()):
                return (self._conv_whnf(ctx, self.whnf(ctx, a.fst), self.whnf(ctx, b.fst), U)
                        and self._conv_whnf(ctx, self.whnf(ctx, a.snd), self.whnf(ctx, b.snd), U))
        return self._neutral(ctx, a, b) is not None

    def _conv_ext(self, ctx: Context, a: ExtType, b: ExtType) -> bool:
        psi, psi2 = self.shape_of(a.shape), self.shape_of(b.shape)
        if psi.arity != psi2.arity or not self.solver.equivalent(psi.tope, psi2.tope):
            return False
        inner = ctx.bind_cube(a.names, psi.tope)
        if not (self.solver.entails(conj(inner.tope, a.boundary), b.boundary)
                and self.solver.entails(conj(inner.tope, b.boundary), a.boundary)):
            return False
        if not self.conv_type(inner, a.family, b.family):
            return False
        if a.partial is None or b.partial is None:
            return not self.satisfiable(inner.assume(a.boundary))
        return self.convertible(inner.assume(a.boundary), a.partial, b.partial, a.family)

    def _neutral(self, ctx: Context, a: Expr, b: Expr) -> Optional[Expr]:
        """Compare neutral terms; returns their common type or None."""
        match a, b:
            case (Var(i), Var(j)):
                return ctx.lookup(i).type if i == j else None
            case (Const(x), Const(y)):
                if x != y or x not in self.env:
                    return None
                return self.env[x].type
            case (App(f, x), App(g, y)):
                ty = self._neutral(ctx, f, g)
                if ty is None:
                    return None
                ty = self.whnf(ctx, ty)
                if isinstance(ty, Pi):
                    return instantiate(ty.cod, x) if self.convertible(ctx, x, y, ty.dom) else None
                if isinstance(ty, ExtType) and isinstance(x, CubeRef) and isinstance(y, CubeRef):
                    if len(x.terms) == len(y.terms) and all(
                            self.entails(ctx, Eq(s, t)) for s, t in zip(x.terms, y.terms)):
                        return instantiate_cube(ty.family, x.terms)
                return None
            case (Fst(p), Fst(q)) | (Snd(p), Snd(q)):
                if type(a) is not type(b):
                    return None
                ty = self._neutral(ctx, p, q)
                if ty is None:
                    return None
                ty = self.whnf(ctx, ty)
                if not isinstance(ty, Sigma):
                    return None
                return ty.fst if isinstance(a, Fst) else instantiate(ty.snd, Fst(p))
            case (IdJ(), IdJ()):
                if self._neutral(ctx, a.path, b.path) is None:
                    return None
                motive_ty = _motive_type(a.ty, a.lhs)
                if not (self.conv_type(ctx, a.ty, b.ty)
                        and self.convertible(ctx, a.lhs, b.lhs, a.ty)
                        and self.convertible(ctx, a.motive, b.motive, motive_ty)
                        and self.convertible(ctx, a.rhs, b.rhs, a.ty)
                        and self.convertible(ctx, a.base, b.base,
                                             App(App(a.motive, a.lhs), Refl(a.lhs)))):
                    return None
                return App(App(a.motive, a.rhs), a.path)
        return None

    # -- checking

    def check(self, ctx: Context, e: Expr, ty: Expr) -> None:
        if not self.satisfiable(ctx):
            return
        t = self.whnf(ctx, ty)
        if isinstance(t, RecOr) and not isinstance(e, RecOr):
            for phi, branch in t.branches:
                self.check(ctx.assume(phi), e, branch)
            return
        match e:
            case Lam(name, body):
                if not isinstance(t, Pi):
                    raise CheckError("Mismatch", f"lambda {self.show(ctx, e)} checked against "
                                     f"non-function type {self.show(ctx, t)}")
                self.check(ctx.bind(name, t.dom), body, t.cod)
            case ExtLam(names, arity, body):
                if not isinstance(t, ExtType):
                    raise CheckError("Mismatch", f"cube abstraction {self.show(ctx, e)} checked "
                                     f"against non-extension type {self.show(ctx, t)}")
                psi = self.shape_of(t.shape)
                if arity != psi.arity:
                    raise CheckError("Mismatch", f"cube abstraction binds {arity} variables "
                                     f"but the shape has {psi.arity}")
                inner = ctx.bind_cube(names, psi.tope)
                self.check(inner, body, t.family)
                if t.partial is not None:
                    self._check_boundary(inner.assume(t.boundary), body, t.partial, t.family)
            case Pair(a, b) if isinstance(t, Sigma):
                self.check(ctx, a, t.fst)
                self.check(ctx, b, instantiate(t.snd, a))
            case RecOr(branches):
                self._check_cover(ctx, branches)
                for phi, branch in branches:
                    self.check(ctx.assume(phi), branch, t)
                self._check_overlaps(ctx, branches, [t] * len(branches))
            case CubeRef(terms) if isinstance(t, ShapeType):
                if len(terms) != t.shape.arity:
                    raise CheckError("Mismatch", f"cube point has {len(terms)} components "
                                     f"but the shape has {t.shape.arity}")
                goal = instantiate_cube_tope(t.shape.tope, terms)
                if not self.entails(ctx, goal):
                    raise CheckError("TopeFalse", f"{self.show_tope(ctx, ctx.tope)} does not "
                                     f"entail {self.show_tope(ctx, goal)}")
            case Refl(x) if isinstance(t, IdType):
                self.check(ctx, x, t.ty)
                if not (self.convertible(ctx, x, t.lhs, t.ty)
                        and self.convertible(ctx, x, t.rhs, t.ty)):
                    raise CheckError("Mismatch", f"refl {self.show(ctx, x)} does not have "
                                     f"type {self.show(ctx, t)}")
            case _:
                actual = self.infer(ctx, e)
                if not self.conv_type(ctx, actual, t):
                    raise CheckError("Mismatch", f"{self.show(ctx, e)} has type "
                                     f"{self.show(ctx, actual)} but {self.show(ctx, t)} "
                                     f"was expected")

    def _check_boundary(self, ctx: Context, body: Expr, partial: Expr, family: Expr) -> None:
        for leaf in self.leaves(ctx):
            if not self._conv_leaf(leaf, body, partial, family):
                sequent = (ctx.cube, leaf.tope, body, partial)
                raise CheckError(
                    "BoundaryViolation",
                    f"{self.show_tope(leaf, leaf.tope)} |- {self.show(leaf, self.whnf(leaf, body))} "
                    f"=/= {self.show(leaf, self.whnf(leaf, partial))}", sequent)

    def _check_cover(self, ctx: Context, branches) -> None:
        cover = disj(*(phi for phi, _ in branches)) if branches else BOT
        if not self.entails(ctx, cover):
            raise CheckError("TopeFalse", f"case split {self.show_tope(ctx, cover)} does not "
                             f"cover {self.show_tope(ctx, ctx.tope)}")

    def _check_overlaps(self, ctx: Context, branches, types) -> None:
        for i in range(len(branches)):
            for j in range(i + 1, len(branches)):
                (phi, a), (chi, b) = branches[i], branches[j]
                overlap = ctx.assume(conj(phi, chi))
                for leaf in self.leaves(overlap):
                    if not self._conv_leaf(leaf, a, b, types[i]):
                        raise CheckError(
                            "BoundaryViolation",
                            f"branches disagree: {self.show_tope(leaf, leaf.tope)} |- "
                            f"{self.show(leaf, self.whnf(leaf, a))} =/= "
                            f"{self.show(leaf, self.whnf(leaf, b))}",
                            (ctx.cube, leaf.tope, a, b))

    def check_type(self, ctx: Context, a: Expr) -> None:
        if not self.satisfiable(ctx):
            return
        actual = self.infer(ctx, a)
        if not self.conv_type(ctx, actual, U):
            raise CheckError("UniverseError", f"{self.show(ctx, a)} is not a type; it has type "
                             f"{self.show(ctx, actual)}")

    def check_ext_formation(self, ctx: Context, e: ExtType) -> None:
        psi = self.shape_of(e.shape)
        if len(e.names) != psi.arity:
            raise CheckError("Mismatch", f"pattern binds {len(e.names)} cube variables but the "
                             f"shape has {psi.arity}")
        inner = ctx.bind_cube(e.names, psi.tope)
        lifted = conj(shift_tope(ctx.tope, psi.arity), e.boundary)
        if not self.solver.entails(lifted, psi.tope):
            raise CheckError("TopeFalse", f"boundary {self.show_tope(inner, e.boundary)} is not "
                             f"contained in the shape {self.show_tope(inner, psi.tope)}")
        self.check_type(inner, e.family)
        if e.partial is not None:
            self.check(inner.assume(e.boundary), e.partial, e.family)
        elif self.satisfiable(inner.assume(e.boundary)):
            raise CheckError("Mismatch", "boundary tope given without a partial term")

    def infer(self, ctx: Context, e: Expr) -> Expr:
        match e:
            case Var(i):
                return ctx.lookup(i).type
            case Const(name):
                if name not in self.env:
                    raise CheckError("UnboundName", f"unbound name {name!r}")
                return self.env[name].type
            case Universe() | UnitType():
                return U
            case UnitTt():
                return UNIT
            case ShapeType():
                return U
            case Pi(name, dom, cod) | Sigma(name, dom, cod):
                self.check_type(ctx, dom)
                self.check_type(ctx.bind(name, dom), cod)
                return U
            case IdType(ty, lhs, rhs):
                self.check_type(ctx, ty)
                self.check(ctx, lhs, ty)
                self.check(ctx, rhs, ty)
                return U
            case ExtType():
                self.check_ext_formation(ctx, e)
                return U
            case App(Lam(name, body), arg):
                arg_ty = self.infer(ctx, arg)
                body_ty = self.infer(ctx.bind(name, arg_ty, arg), body)
                return instantiate(body_ty, arg)
            case App(fn, arg):
                fn_ty = self.whnf(ctx, self.infer(ctx, fn))
                if isinstance(fn_ty, Pi):
                    self.check(ctx, arg, fn_ty.dom)
                    return instantiate(fn_ty.cod, arg)
                if isinstance(fn_ty, ExtType):
                    return self._infer_cube_app(ctx, fn_ty, arg)
                raise CheckError("NotAFunction", f"{self.show(ctx, fn)} has type "
                                 f"{self.show(ctx, fn_ty)} and cannot be applied")
            case Pair(a, b):
                return Sigma("_", self.infer(ctx, a), shift(self.infer(ctx, b), 1))
            case Fst(p) | Snd(p):
                ty = self.whnf(ctx, self.infer(ctx, p))
                if not isinstance(ty, Sigma):
                    raise CheckError("Mismatch", f"projection from {self.show(ctx, p)} of "
                                     f"non-pair type {self.show(ctx, ty)}")
                return ty.fst if isinstance(e, Fst) else instantiate(ty.snd, Fst(p))
            case Refl(x):
                return IdType(self.infer(ctx, x), x, x)
            case IdJ(ty, lhs, motive, base, rhs, path):
                self.check_type(ctx, ty)
                self.check(ctx, lhs, ty)
                self.check(ctx, motive, _motive_type(ty, lhs))
                self.check(ctx, base, App(App(motive, lhs), Refl(lhs)))
                self.check(ctx, rhs, ty)
                self.check(ctx, path, IdType(ty, lhs, rhs))
                return App(App(motive, rhs), path)
            case RecOr(branches):
                self._check_cover(ctx, branches)
                types = [self.infer(ctx.assume(phi), branch) for phi, branch in branches]
                self._check_overlaps(ctx, branches, types)
                if all(t == types[0] for t in types):
                    return types[0]
                return RecOr(tuple((phi, t) for (phi, _), t in zip(branches, types)))
        raise CheckError("Mismatch", f"cannot infer a type for {self.show(ctx, e)}; "
                         f"add a type annotation")

    def _infer_cube_app(self, ctx: Context, fn_ty: ExtType, arg: Expr) -> Expr:
        if not isinstance(arg, CubeRef):
            raise CheckError("Mismatch", f"{self.show(ctx, arg)} is not a cube point")
        psi = self.shape_of(fn_ty.shape)
        if len(arg.terms) != psi.arity:
            raise CheckError("Mismatch", f"cube point has {len(arg.terms)} components but the "
                             f"shape has {psi.arity}")
        goal = instantiate_cube_tope(psi.tope, arg.terms)
        if not self.entails(ctx, goal):
            raise CheckError("TopeFalse", f"{self.show_tope(ctx, ctx.tope)} does not entail "
                             f"{self.show_tope(ctx, goal)}")
        return instantiate_cube(fn_ty.family, arg.terms)

    # -- declarations

    def check_decl(self, d: Decl) -> Optional[Tuple[str, str]]:
        ctx = Context()
        if d.kind == "import":
            return None
        if d.kind in ("def", "postulate"):
            if d.name in self.env:
                raise CheckError("Mismatch", f"duplicate definition of {d.name!r}")
            self.check_type(ctx, d.type)
            if d.kind == "def":
                self.check(ctx, d.value, d.type)
            self.env.entries[d.name] = Global(d.type, d.value)
            return None
        if d.kind == "check":
            if d.type is not None:
                self.check_type(ctx, d.type)
                self.check(ctx, d.value, d.type)
                ty = d.type
            else:
                ty = self.infer(ctx, d.value)
            return "check", f"{print_expr(d.value)} : {print_expr(ty)}"
        if d.kind == "normalize":
            self.infer(ctx, d.value)
            nf = self.whnf(ctx, d.value)
            if d.type is not None and nf != d.type:
                raise CheckError("Mismatch", f"{print_expr(d.value)} normalizes to "
                                 f"{print_expr(nf)}, not {print_expr(d.type)}")
            return "normalize", f"{print_expr(d.value)} ~> {print_expr(nf)}"
        if d.kind == "entails":
            if d.hyp is not None:
                if not self.solver.entails(d.hyp, d.goal):
                    raise CheckError("TopeFalse", f"{print_tope(d.hyp, d.names)} does not entail "
                                     f"{print_tope(d.goal, d.names)}")
                return "entails", (f"{print_tope(d.hyp, d.names)} |- "
                                   f"{print_tope(d.goal, d.names)} VALID")
            sub, sup = self.shape_of(d.value), self.shape_of(d.type)
            if sub.arity != sup.arity:
                raise CheckError("Mismatch", f"shapes of dimension {sub.arity} and {sup.arity} "
                                 f"cannot be compared")
            if not self.solver.entails(sub.tope, sup.tope):
                raise CheckError("TopeFalse", f"{print_expr(d.value)} is not contained in "
                                 f"{print_expr(d.type)}")
            return "entails", f"{print_expr(d.value)} |- {print_expr(d.type)} VALID"
        raise ValueError(d.kind)


def _motive_type(ty: Expr, lhs: Expr) -> Expr:
    # (y : A) -> Id A a y -> U
    return Pi("y", ty, Pi("_", IdType(shift(ty, 1), shift(lhs, 1), Var(0)), U))


# ---------------------------------------------------------------------------
# modules


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    file: str
    line: int
    col: int
    category: str
    message: str

    def format(self) -> str:
        return f"{self.severity} {self.file}:{self.line}:{self.col} {self.category}: {self.message}"

    def as_dict(self) -> dict:
        return {"severity": self.severity, "file": self.file, "line": self.line,
                "col": self.col, "category": self.category, "message": self.message}


def check_module(module: SourceModule, filename: str, env: Optional[Environment] = None,
                 distinct_endpoints: bool = True,
                 solver: Optional[TopeSolver] = None) -> Tuple[List[Diagnostic], Environment]:
    """Check declarations in order, stopping at the first error."""
    checker = Checker(env.copy() if env is not None else Environment(),
                      distinct_endpoints, solver)
    out: List[Diagnostic] = []
    for decl in module.decls:
        try:
            info = checker.check_decl(decl)
        except CheckError as err:
            out.append(Diagnostic("ERROR", filename, decl.span.line, decl.span.col,
                                  err.category, err.message))
            break
        if info is not None:
            out.append(Diagnostic("INFO", filename, decl.span.line, decl.span.col,
                                  info[0], info[1]))
    return out, checker.env
