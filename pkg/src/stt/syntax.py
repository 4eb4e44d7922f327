"""Surface syntax: lexer, parser to kernel terms, and printer.

Files use the ``.stt`` extension.  Both Unicode and ASCII spellings of the
connectives are accepted; the printer emits ASCII.

Grammar (normative)::

    module    := { "import" NAME | decl }
    decl      := "def" NAME params ":" expr ":=" expr
               | "postulate" NAME params ":" expr
               | "#check" expr [ ":" expr ]
               | "#normalize" expr [ "~>" expr ]
               | "#entails" pattern "|" tope "|-" tope
               | "#entails" expr "|-" expr
    params    := { "(" NAME { NAME } ":" expr ")" }
    expr      := "\\" { NAME | "<" NAME { "," NAME } ">" } "->" expr
               | ext
               | "(" NAME { NAME } ":" expr ")" ( "->" | "*" ) expr
               | "Sigma" "(" NAME ":" expr ")" "," expr
               | arrow
    ext       := "ext" "(" pattern ":" expr ")" "->" expr [ "[" tope "|->" expr "]" ]
    arrow     := prod [ "->" expr ]
    prod      := app [ "*" prod ]
    app       := head { atom }
    head      := "Id" atom atom atom | "refl" atom | "J" atom*6 | "fst" atom
               | "snd" atom | "recBD" cterm atom atom
               | "recOR" "(" tope "|->" expr { "|" tope "|->" expr } ")" | atom
    atom      := NAME | "U" | "SHAPE" | "Unit" | "tt" | "0" | "1" | "<" cterm { "," cterm } ">"
               | "(" expr ")" | "(" expr "," expr { "," expr } ")" | shape
    shape     := "{" pattern ":" cube "|" tope "}"
    pattern   := NAME | "(" NAME { "," NAME } ")" | "<" NAME { "," NAME } ">" | "(" ")"
    cube      := "I" { "*" "I" } | "1"
    tope      := tope1 { "\\/" tope1 }
    tope1     := tope2 { "/\\" tope2 }
    tope2     := "TOP" | "BOT" | "(" tope ")" | cterm ( "===" | "<=" ) cterm
    cterm     := NAME | "0" | "1"

Cube pairs ``<t, s>`` bind or denote one cube variable per component.
``SHAPE`` is read as the universe ``U``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .kernel import (
    BOT, ONE, TOP, ZERO, And, App, Bot, Const, CubeRef, CubeTerm, CVar, Eq, Expr, ExtLam,
    ExtType, Fst, IdJ, IdType, Lam, Leq, One, Or, Pair, Pi, RecOr, Refl, Shape, ShapeType,
    Sigma, Snd, Top, Tope, TT, U, UNIT, Universe, UnitTt, UnitType, Var, Zero, free_vars,
)

# ---------------------------------------------------------------------------
# tokens


class LexError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(message)
        self.message, self.line, self.col = message, line, col


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected: Sequence[str] = ()):
        super().__init__(message)
        self.message, self.line, self.col = message, line, col
        self.expected = tuple(expected)


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    line: int
    col: int
    start: int
    end: int


KEYWORDS = {
    "def", "postulate", "import", "ext", "U", "SHAPE", "Unit", "tt", "Id", "refl", "J",
    "fst", "snd", "recBD", "recOR", "TOP", "BOT", "I", "Sigma",
}

# longest spellings first
_SYMBOLS = [
    ("#normalize", "NORMALIZE"), ("#entails", "ENTAILS"), ("#check", "CHECK"),
    ("===", "EQ"), ("|->", "MAPSTO"), ("|-", "TURNSTILE"), (":=", "DEFEQ"),
    ("->", "ARROW"), ("<=", "LEQ"), ("/\\", "AND"), ("\\/", "OR"), ("~>", "NORMTO"),
    ("\\", "LAMBDA"), ("(", "LPAREN"), (")", "RPAREN"), ("[", "LBRACK"), ("]", "RBRACK"),
    ("{", "LBRACE"), ("}", "RBRACE"), ("<", "LANGLE"), (">", "RANGLE"), (",", "COMMA"),
    (":", "COLON"), ("|", "BAR"), ("*", "STAR"),
    ("≤", "LEQ"), ("≡", "EQ"), ("∧", "AND"), ("∨", "OR"), ("⊤", "TOP"), ("⊥", "BOT"),
    ("→", "ARROW"), ("Σ", "SIGMA"), ("λ", "LAMBDA"), ("⟨", "LANGLE"), ("⟩", "RANGLE"),
    ("↦", "MAPSTO"), ("⊢", "TURNSTILE"), ("×", "STAR"), ("⇝", "NORMTO"),
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def tokenize(text: str) -> List[Token]:
    """Split ``text`` into tokens; ``--`` starts a line comment."""
    tokens: List[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group()
            kind = word.upper() if word in ("TOP", "BOT") else ("KW" if word in KEYWORDS else "IDENT")
            if word == "Sigma":
                kind = "SIGMA"
            tokens.append(Token(kind, word, line, col, i, m.end()))
            col += m.end() - i
            i = m.end()
            continue
        if ch in "01":
            if i + 1 < n and text[i + 1].isdigit():
                raise LexError(f"illegal numeral starting at {ch!r}", line, col)
            tokens.append(Token("ZERO" if ch == "0" else "ONE", ch, line, col, i, i + 1))
            i, col = i + 1, col + 1
            continue
        for sym, kind in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(kind, sym, line, col, i, i + len(sym)))
                i, col = i + len(sym), col + len(sym)
                break
        else:
            raise LexError(f"illegal character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col, n, n))
    return tokens


def print_tokens(tokens: Sequence[Token]) -> str:
    return " ".join(t.lexeme for t in tokens if t.kind != "EOF")


# ---------------------------------------------------------------------------
# declarations


@dataclass(frozen=True)
class Span:
    line: int
    col: int


@dataclass(frozen=True)
class Decl:
    """One top-level item of a module.

    ``kind`` is ``def``, ``postulate``, ``import``, ``check``, ``normalize``
    or ``entails``.  For ``entails`` either ``names``/``hyp``/``goal`` (a
    tope sequent) or ``value``/``type`` (two shape expressions) are set.
    """

    kind: str
    span: Span
    name: Optional[str] = None
    type: Optional[Expr] = None
    value: Optional[Expr] = None
    names: Tuple[str, ...] = ()
    hyp: Optional[Tope] = None
    goal: Optional[Tope] = None


@dataclass
class SourceModule:
    decls: List[Decl] = field(default_factory=list)

    @property
    def imports_prelude(self) -> bool:
        return any(d.kind == "import" for d in self.decls)


# ---------------------------------------------------------------------------
# parser

_DECL_STARTS = {"CHECK", "NORMALIZE", "ENTAILS", "EOF"}


class Parser:
    def __init__(self, tokens: Sequence[Token]):
        self.tokens = list(tokens)
        self.pos = 0
        # innermost last; entries are (name, "term" | "cube")
        self.scope: List[Tuple[str, str]] = []

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, kind: str, lexeme: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (lexeme is None or t.lexeme == lexeme)

    def at_kw(self, word: str) -> bool:
        return self.at("KW", word)

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def error(self, message: str, expected: Sequence[str] = ()) -> ParseError:
        t = self.tok
        found = t.lexeme or "end of input"
        return ParseError(f"{message} (found {found!r})", t.line, t.col, expected)

    def expect(self, kind: str, lexeme: Optional[str] = None) -> Token:
        if not self.at(kind, lexeme):
            raise self.error(f"expected {lexeme or kind}", [lexeme or kind])
        return self.advance()

    def ident(self) -> str:
        return self.expect("IDENT").lexeme

    def at_decl_start(self) -> bool:
        return self.tok.kind in _DECL_STARTS or (
            self.tok.kind == "KW" and self.tok.lexeme in ("def", "postulate", "import"))

    # -- scope

    def _with(self, names, kind):
        return _ScopeGuard(self, [(n, kind) for n in names])

    def resolve(self, name: str) -> Expr:
        terms = cubes = 0
        for bound, kind in reversed(self.scope):
            if bound == name:
                if kind == "term":
                    return Var(terms)
                return CubeRef((CVar(cubes),))
            if kind == "term":
                terms += 1
            else:
                cubes += 1
        return Const(name)

    def resolve_cube(self, name: str) -> CubeTerm:
        cubes = 0
        for bound, kind in reversed(self.scope):
            if kind == "cube":
                if bound == name:
                    return CVar(cubes)
                cubes += 1
        raise self.error(f"unknown cube variable {name!r}")

    # -- module

    def module(self) -> SourceModule:
        out = SourceModule()
        while not self.at("EOF"):
            out.decls.append(self.decl())
        return out

    def decl(self) -> Decl:
        t = self.tok
        span = Span(t.line, t.col)
        if self.at_kw("import"):
            self.advance()
            name = self.ident()
            if name != "prelude":
                raise ParseError(f"only the prelude can be imported, not {name!r}",
                                 t.line, t.col, ["prelude"])
            return Decl("import", span, name=name)
        if self.at_kw("def") or self.at_kw("postulate"):
            kind = self.advance().lexeme
            name = self.ident()
            params = self.params()
            with self._with([p for p, _ in params], "term"):
                self.expect("COLON")
                ty = self.expr()
                value = None
                if kind == "def":
                    self.expect("DEFEQ")
                    value = self.expr()
            self.end_decl()
            for pname, pty in reversed(params):
                ty = Pi(pname, pty, ty)
                if value is not None:
                    value = Lam(pname, value)
            return Decl(kind, span, name=name, type=ty, value=value)
        if self.at("CHECK"):
            self.advance()
            e = self.expr()
            ty = None
            if self.at("COLON"):
                self.advance()
                ty = self.expr()
            self.end_decl()
            return Decl("check", span, value=e, type=ty)
        if self.at("NORMALIZE"):
            self.advance()
            e = self.expr()
            expected = None
            if self.at("NORMTO"):
                self.advance()
                expected = self.expr()
            self.end_decl()
            return Decl("normalize", span, value=e, type=expected)
        if self.at("ENTAILS"):
            self.advance()
            if self.at("LANGLE") or (self.at("IDENT") and self.peek().kind in ("BAR", "COMMA")):
                names = self.pattern()
                self.expect("BAR")
                with self._with(names, "cube"):
                    hyp = self.tope()
                    self.expect("TURNSTILE")
                    goal = self.tope()
                self.end_decl()
                return Decl("entails", span, names=tuple(names), hyp=hyp, goal=goal)
            sub = self.expr()
            self.expect("TURNSTILE")
            sup = self.expr()
            self.end_decl()
            return Decl("entails", span, value=sub, type=sup)
        raise self.error("expected a declaration", ["def", "postulate", "import", "#check",
                                                     "#normalize", "#entails"])

    def end_decl(self) -> None:
        if not self.at_decl_start():
            raise self.error("unexpected token after declaration",
                             ["def", "postulate", "#check", "#normalize", "#entails", "EOF"])

    def params(self) -> List[Tuple[str, Expr]]:
        out: List[Tuple[str, Expr]] = []
        while self.at("LPAREN"):
            self.advance()
            names = [self.ident()]
            while self.at("IDENT"):
                names.append(self.ident())
            self.expect("COLON")
            with self._with([n for n, _ in out], "term"):
                ty = self.expr()
            self.expect("RPAREN")
            for i, n in enumerate(names):
                # later names of one group see the earlier ones
                out.append((n, _shift_plain(ty, i)))
        return out

    # -- expressions

    def is_telescope(self) -> bool:
        if not self.at("LPAREN"):
            return False
        i = 1
        if self.peek(i).kind != "IDENT":
            return False
        while self.peek(i).kind == "IDENT":
            i += 1
        return self.peek(i).kind == "COLON"

    def expr(self) -> Expr:
        if self.at("LAMBDA"):
            return self.lam()
        if self.at_kw("ext"):
            return self.ext()
        if self.at("SIGMA"):
            self.advance()
            self.expect("LPAREN")
            name = self.ident()
            self.expect("COLON")
            dom = self.expr()
            self.expect("RPAREN")
            self.expect("COMMA")
            with self._with([name], "term"):
                cod = self.expr()
            return Sigma(name, dom, cod)
        if self.is_telescope():
            self.advance()
            names = [self.ident()]
            while self.at("IDENT"):
                names.append(self.ident())
            self.expect("COLON")
            dom = self.expr()
            self.expect("RPAREN")
            if self.at("ARROW"):
                ctor = Pi
            elif self.at("STAR"):
                ctor = Sigma
            else:
                raise self.error("expected '->' or '*' after binder", ["->", "*"])
            self.advance()
            with self._with(names, "term"):
                body = self.expr()
            for i in reversed(range(len(names))):
                body = ctor(names[i], _shift_plain(dom, i), body)
            return body
        return self.arrow()

    def lam(self) -> Expr:
        self.advance()
        groups: List[Tuple[str, Tuple[str, ...]]] = []
        while not self.at("ARROW"):
            if self.at("LANGLE"):
                groups.append(("cube", tuple(self.pattern())))
            elif self.at("IDENT"):
                groups.append(("term", (self.ident(),)))
            else:
                raise self.error("expected a binder", ["NAME", "<"])
        if not groups:
            raise self.error("lambda without binders", ["NAME", "<"])
        self.advance()
        guards = []
        for kind, names in groups:
            g = self._with(names, kind)
            g.__enter__()
            guards.append(g)
        try:
            body = self.expr()
        finally:
            for g in reversed(guards):
                g.__exit__(None, None, None)
        for kind, names in reversed(groups):
            body = Lam(names[0], body) if kind == "term" else ExtLam(names, len(names), body)
        return body

    def ext(self) -> Expr:
        self.advance()
        self.expect("LPAREN")
        names = self.pattern()
        self.expect("COLON")
        saved, self.scope = self.scope, []
        try:
            shape = self.expr()
        finally:
            self.scope = saved
        self.expect("RPAREN")
        self.expect("ARROW")
        with self._with(names, "cube"):
            family = self.expr()
            boundary, partial = BOT, None
            if self.at("LBRACK"):
                self.advance()
                boundary = self.tope()
                self.expect("MAPSTO")
                partial = self.expr()
                self.expect("RBRACK")
        return ExtType(tuple(names), shape, family, boundary, partial)

    def pattern(self) -> List[str]:
        if self.at("IDENT"):
            return [self.ident()]
        if self.at("LANGLE") or self.at("LPAREN"):
            close = "RANGLE" if self.at("LANGLE") else "RPAREN"
            self.advance()
            names: List[str] = []
            if not self.at(close):
                names.append(self.ident())
                while self.at("COMMA"):
                    self.advance()
                    names.append(self.ident())
            self.expect(close)
            return names
        raise self.error("expected a cube variable pattern", ["NAME", "<", "("])

    def arrow(self) -> Expr:
        dom = self.prod()
        if self.at("ARROW"):
            self.advance()
            with self._with(["_"], "term"):
                cod = self.expr()
            return Pi("_", dom, cod)
        return dom

    def prod(self) -> Expr:
        left = self.app()
        if self.at("STAR"):
            self.advance()
            with self._with(["_"], "term"):
                right = self.prod()
            return Sigma("_", left, right)
        return left

    def app(self) -> Expr:
        e = self.head()
        while self.starts_atom():
            e = App(e, self.atom())
        return e

    def head(self) -> Expr:
        if self.at("KW"):
            word = self.tok.lexeme
            if word == "Id":
                self.advance()
                return IdType(self.atom(), self.atom(), self.atom())
            if word == "refl":
                self.advance()
                return Refl(self.atom())
            if word == "J":
                self.advance()
                return IdJ(*(self.atom() for _ in range(6)))
            if word == "fst":
                self.advance()
                return Fst(self.atom())
            if word == "snd":
                self.advance()
                return Snd(self.atom())
            if word == "recBD":
                self.advance()
                t = self.cterm()
                return RecOr(((Eq(t, ZERO), self.atom()), (Eq(t, ONE), self.atom())))
            if word == "recOR":
                self.advance()
                self.expect("LPAREN")
                branches = [self.branch()]
                while self.at("BAR"):
                    self.advance()
                    branches.append(self.branch())
                self.expect("RPAREN")
                return RecOr(tuple(branches))
        if not self.starts_atom():
            raise self.error("expected an expression",
                             ["NAME", "(", "\\", "ext", "U", "Id", "refl", "J", "fst", "snd"])
        return self.atom()

    def branch(self) -> Tuple[Tope, Expr]:
        phi = self.tope()
        self.expect("MAPSTO")
        return phi, self.expr()

    def starts_atom(self) -> bool:
        t = self.tok
        if t.kind in ("IDENT", "LPAREN", "ZERO", "ONE", "LANGLE", "LBRACE"):
            return True
        return t.kind == "KW" and t.lexeme in ("U", "SHAPE", "Unit", "tt")

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "IDENT":
            self.advance()
            return self.resolve(t.lexeme)
        if t.kind == "ZERO":
            self.advance()
            return CubeRef((ZERO,))
        if t.kind == "ONE":
            self.advance()
            return CubeRef((ONE,))
        if t.kind == "KW" and t.lexeme in ("U", "SHAPE"):
            self.advance()
            return U
        if t.kind == "KW" and t.lexeme == "Unit":
            self.advance()
            return UNIT
        if t.kind == "KW" and t.lexeme == "tt":
            self.advance()
            return TT
        if t.kind == "LANGLE":
            self.advance()
            terms = [self.cterm()]
            while self.at("COMMA"):
                self.advance()
                terms.append(self.cterm())
            self.expect("RANGLE")
            return CubeRef(tuple(terms))
        if t.kind == "LBRACE":
            return self.shape_literal()
        if t.kind == "LPAREN":
            self.advance()
            first = self.expr()
            if self.at("COMMA"):
                items = [first]
                while self.at("COMMA"):
                    self.advance()
                    items.append(self.expr())
                self.expect("RPAREN")
                out = items[-1]
                for item in reversed(items[:-1]):
                    out = Pair(item, out)
                return out
            self.expect("RPAREN")
            return first
        if t.kind == "KW" and t.lexeme in ("Id", "refl", "J", "fst", "snd", "recBD", "recOR"):
            raise self.error(f"parenthesize '{t.lexeme}' in argument position", ["("])
        raise self.error("expected an expression", ["NAME", "(", "0", "1", "<", "{"])

    def shape_literal(self) -> Expr:
        self.expect("LBRACE")
        names = self.pattern()
        self.expect("COLON")
        arity = self.cube()
        if arity != len(names):
            raise self.error(f"pattern binds {len(names)} variables but the cube has {arity}")
        self.expect("BAR")
        saved, self.scope = self.scope, [(n, "cube") for n in names]
        try:
            tope = self.tope()
        finally:
            self.scope = saved
        self.expect("RBRACE")
        return ShapeType(Shape.of(names, tope))

    def cube(self) -> int:
        if self.at("ONE"):
            self.advance()
            return 0
        self.expect("KW", "I")
        n = 1
        while self.at("STAR"):
            self.advance()
            self.expect("KW", "I")
            n += 1
        return n

    # -- topes

    def tope(self) -> Tope:
        left = self.tope_and()
        while self.at("OR"):
            self.advance()
            left = Or(left, self.tope_and())
        return left

    def tope_and(self) -> Tope:
        left = self.tope_atom()
        while self.at("AND"):
            self.advance()
            left = And(left, self.tope_atom())
        return left

    def tope_atom(self) -> Tope:
        if self.at("TOP"):
            self.advance()
            return TOP
        if self.at("BOT"):
            self.advance()
            return BOT
        if self.at("LPAREN"):
            self.advance()
            inner = self.tope()
            self.expect("RPAREN")
            return inner
        left = self.cterm()
        if self.at("EQ"):
            self.advance()
            return Eq(left, self.cterm())
        if self.at("LEQ"):
            self.advance()
            return Leq(left, self.cterm())
        raise self.error("expected '===' or '<='", ["===", "<="])

    def cterm(self) -> CubeTerm:
        if self.at("ZERO"):
            self.advance()
            return ZERO
        if self.at("ONE"):
            self.advance()
            return ONE
        if self.at("IDENT"):
            return self.resolve_cube(self.ident_peek())
        raise self.error("expected a cube term", ["NAME", "0", "1"])

    def ident_peek(self) -> str:
        name = self.tok.lexeme
        self.resolve_cube(name)
        self.advance()
        return name


class _ScopeGuard:
    def __init__(self, parser: Parser, entries):
        self.parser, self.entries = parser, entries

    def __enter__(self):
        self.parser.scope.extend(self.entries)
        return self

    def __exit__(self, *exc):
        del self.parser.scope[len(self.parser.scope) - len(self.entries):]
        return False


def _shift_plain(e: Expr, d: int) -> Expr:
    from .kernel import shift
    return shift(e, d)


def parse_module(tokens_or_text) -> SourceModule:
    tokens = tokenize(tokens_or_text) if isinstance(tokens_or_text, str) else tokens_or_text
    return Parser(tokens).module()


def parse_expr(text: str, scope: Sequence[Tuple[str, str]] = ()) -> Expr:
    """Parse one expression; ``scope`` lists enclosing binders, innermost last."""
    p = Parser(tokenize(text))
    p.scope = list(scope)
    e = p.expr()
    if not p.at("EOF"):
        raise p.error("trailing input after expression", ["EOF"])
    return e


def parse_tope(text: str, names: Sequence[str]) -> Tope:
    p = Parser(tokenize(text))
    p.scope = [(n, "cube") for n in names]
    phi = p.tope()
    if not p.at("EOF"):
        raise p.error("trailing input after tope", ["EOF"])
    return phi


# ---------------------------------------------------------------------------
# printer

_RESERVED = KEYWORDS | {"_"}


class Printer:
    def __init__(self, globals_used: Sequence[str] = ()):
        self.avoid = set(globals_used)

    def fresh(self, name: str, scope: List[Tuple[str, str]]) -> str:
        taken = {n for n, _ in scope} | self.avoid | _RESERVED
        base = name if name and name != "_" else "x"
        base = base.rstrip("0123456789") or "x"
        if name not in taken and name != "_":
            return name
        i = 1
        while f"{base}{i}" in taken:
            i += 1
        return f"{base}{i}"

    # precedence: 0 binder forms, 1 arrow, 2 product, 3 application, 4 atom

    def expr(self, e: Expr, scope: List[Tuple[str, str]], prec: int = 0) -> str:
        text, level = self._expr(e, scope)
        return f"({text})" if level < prec else text

    def _var(self, index: int, scope, kind: str) -> str:
        seen = 0
        for name, k in reversed(scope):
            if k == kind:
                if seen == index:
                    return name
                seen += 1
        return f"?{kind}{index}"

    def cterm(self, t: CubeTerm, scope) -> str:
        if isinstance(t, Zero):
            return "0"
        if isinstance(t, One):
            return "1"
        return self._var(t.index, scope, "cube")

    def tope(self, phi: Tope, scope, prec: int = 0) -> str:
        # prec: 0 disjunction, 1 conjunction, 2 atom
        if isinstance(phi, Top):
            return "TOP"
        if isinstance(phi, Bot):
            return "BOT"
        if isinstance(phi, Eq):
            return f"{self.cterm(phi.left, scope)} === {self.cterm(phi.right, scope)}"
        if isinstance(phi, Leq):
            return f"{self.cterm(phi.left, scope)} <= {self.cterm(phi.right, scope)}"
        if isinstance(phi, Or):
            text = f"{self.tope(phi.left, scope, 0)} \\/ {self.tope(phi.right, scope, 1)}"
            return f"({text})" if prec > 0 else text
        if isinstance(phi, And):
            text = f"{self.tope(phi.left, scope, 1)} /\\ {self.tope(phi.right, scope, 2)}"
            return f"({text})" if prec > 1 else text
        raise TypeError(f"not a tope: {phi!r}")

    def pattern(self, names: Sequence[str]) -> str:
        if len(names) == 1:
            return names[0]
        return "<" + ", ".join(names) + ">"

    def bind_cube(self, names, scope):
        out = []
        inner = list(scope)
        for n in names:
            fresh = self.fresh(n, inner)
            out.append(fresh)
            inner.append((fresh, "cube"))
        return out, inner

    def _expr(self, e: Expr, scope) -> Tuple[str, int]:
        match e:
            case Var(i):
                return self._var(i, scope, "term"), 4
            case Const(name):
                return name, 4
            case Universe():
                return "U", 4
            case UnitType():
                return "Unit", 4
            case UnitTt():
                return "tt", 4
            case Pi(name, dom, cod) | Sigma(name, dom, cod):
                sym = "->" if isinstance(e, Pi) else "*"
                used = 0 in free_vars(cod)[0]
                if not used:
                    inner = scope + [("_", "term")]
                    if sym == "->":
                        return f"{self.expr(dom, scope, 2)} -> {self.expr(cod, inner, 0)}", 1
                    return f"{self.expr(dom, scope, 3)} * {self.expr(cod, inner, 2)}", 2
                x = self.fresh(name, scope)
                inner = scope + [(x, "term")]
                return f"({x} : {self.expr(dom, scope, 0)}) {sym} {self.expr(cod, inner, 0)}", 0
            case Lam(name, body):
                x = self.fresh(name, scope)
                return f"\\{x} -> {self.expr(body, scope + [(x, 'term')], 0)}", 0
            case ExtLam(names, arity, body):
                fresh, inner = self.bind_cube(names, scope)
                return f"\\<{', '.join(fresh)}> -> {self.expr(body, inner, 0)}", 0
            case App(fn, arg):
                if isinstance(arg, CubeRef) and len(arg.terms) == 1:
                    arg_text = self.cterm(arg.terms[0], scope)
                else:
                    arg_text = self.expr(arg, scope, 4)
                return f"{self.expr(fn, scope, 3)} {arg_text}", 3
            case Pair(a, b):
                return f"({self.expr(a, scope, 0)}, {self.expr(b, scope, 0)})", 4
            case Fst(p):
                return f"fst {self.expr(p, scope, 4)}", 3
            case Snd(p):
                return f"snd {self.expr(p, scope, 4)}", 3
            case IdType(ty, lhs, rhs):
                return (f"Id {self.expr(ty, scope, 4)} {self.expr(lhs, scope, 4)} "
                        f"{self.expr(rhs, scope, 4)}"), 3
            case Refl(tm):
                return f"refl {self.expr(tm, scope, 4)}", 3
            case IdJ(ty, lhs, motive, base, rhs, path):
                parts = (ty, lhs, motive, base, rhs, path)
                return "J " + " ".join(self.expr(p, scope, 4) for p in parts), 3
            case CubeRef(terms):
                if len(terms) == 1:
                    return self.cterm(terms[0], scope), 4
                return "<" + ", ".join(self.cterm(t, scope) for t in terms) + ">", 4
            case ShapeType(shape):
                fresh, inner = self.bind_cube(shape.names, [])
                pat = fresh[0] if len(fresh) == 1 else "(" + ", ".join(fresh) + ")"
                cube = " * ".join(["I"] * shape.arity) if shape.arity else "1"
                return f"{{{pat} : {cube} | {self.tope(shape.tope, inner)}}}", 4
            case ExtType(names, shape, family, boundary, partial):
                fresh, inner = self.bind_cube(names, scope)
                shape_text = self.expr(shape, [], 0)
                head = f"ext ({self.pattern(fresh)} : {shape_text}) -> "
                if partial is None and boundary == BOT:
                    return head + self.expr(family, inner, 0), 0
                return (head + f"{self.expr(family, inner, 3)} "
                        f"[ {self.tope(boundary, inner)} |-> {self.expr(partial, inner, 0)} ]"), 0
            case RecOr(branches):
                if (len(branches) == 2 and isinstance(branches[0][0], Eq)
                        and isinstance(branches[1][0], Eq)
                        and branches[0][0].right == ZERO and branches[1][0].right == ONE
                        and branches[0][0].left == branches[1][0].left):
                    t = self.cterm(branches[0][0].left, scope)
                    return (f"recBD {t} {self.expr(branches[0][1], scope, 4)} "
                            f"{self.expr(branches[1][1], scope, 4)}"), 3
                inner = " | ".join(f"{self.tope(phi, scope)} |-> {self.expr(a, scope, 0)}"
                                   for phi, a in branches)
                return f"recOR ({inner})", 3
        raise TypeError(f"not an expression: {e!r}")


def _consts(e: Expr) -> set:
    out: set = set()

    def walk(x):
        if isinstance(x, Const):
            out.add(x.name)
            return
        if isinstance(x, tuple):
            for y in x:
                walk(y)
            return
        if hasattr(x, "__dataclass_fields__"):
            for f in x.__dataclass_fields__:
                walk(getattr(x, f))

    walk(e)
    return out


def print_expr(e: Expr, names: Sequence[Tuple[str, str]] = ()) -> str:
    """Render ``e``; ``names`` lists enclosing binders as ``(name, kind)``, innermost last."""
    return Printer(_consts(e)).expr(e, list(names), 0)


def print_tope(phi: Tope, names: Sequence[str]) -> str:
    return Printer().tope(phi, [(n, "cube") for n in names])


def print_decl(d: Decl) -> str:
    p = Printer(_consts(d.type) | (_consts(d.value) if d.value is not None else set())
                if d.type is not None else ())
    if d.kind == "import":
        return f"import {d.name}"
    if d.kind == "def":
        return f"def {d.name} : {p.expr(d.type, [], 0)} := {p.expr(d.value, [], 0)}"
    if d.kind == "postulate":
        return f"postulate {d.name} : {p.expr(d.type, [], 0)}"
    if d.kind == "check":
        text = f"#check {print_expr(d.value)}"
        return text + (f" : {print_expr(d.type)}" if d.type is not None else "")
    if d.kind == "normalize":
        text = f"#normalize {print_expr(d.value)}"
        return text + (f" ~> {print_expr(d.type)}" if d.type is not None else "")
    if d.kind == "entails":
        if d.hyp is not None:
            pat = "<" + ", ".join(d.names) + ">"
            return f"#entails {pat} | {print_tope(d.hyp, d.names)} |- {print_tope(d.goal, d.names)}"
        return f"#entails {print_expr(d.value)} |- {print_expr(d.type)}"
    raise ValueError(d.kind)


def print_module(m: SourceModule) -> str:
    return "\n".join(print_decl(d) for d in m.decls) + "\n"
