"""Expression language for species, stuff types and Weyl-algebra elements.

Grammar (loosest binding first)::

    expr    := term ('+' term)*
    term    := power (('*' | '/') power)*
    power   := compose ('^' NAT)*
    compose := primary (('of' | '∘') primary)*
    primary := NAT | NAME | NAME '(' args ')' | '(' expr ')'

so ``∘`` binds tighter than ``^``, which binds tighter than ``*``, then ``+``;
all binary operators associate to the left.  ``/`` divides by a natural
number and only makes sense for Weyl elements.

Queries wrap expressions::

    gf(EXPR, ORDER)              inner(EXPR, EXPR, ORDER)
    fock_inner(EXPR, EXPR, ORDER)
    vev(K, L, [M, ...])          expect(K, WEYL, L)
    solve(NAME = EXPR, ORDER)    evolve(EXPR, ANGLE, ORDER)
    dyson(K, L, {M: G, ...}, T, ORDER, CUTOFF)

An ANGLE is a real number (a time T, radians) or ``p/q turns``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Optional, Tuple, Union

from .errors import ParseError

SPECIES_ATOMS = ("Z", "E", "Eplus", "O", "Eeven", "Eodd")
WEYL_ATOMS = ("A", "ASTAR", "PHI", "N")
SIZED = ("En", "Tuple")
UNARY = ("D", "Astar", "Conj")
ATOMS = SPECIES_ATOMS + WEYL_ATOMS
RESERVED = frozenset(ATOMS + SIZED + UNARY + ("Phase", "of"))


# --- abstract syntax -----------------------------------------------------


class Expr:
    pass


@dataclass(frozen=True)
class Atom(Expr):
    name: str


@dataclass(frozen=True)
class Nat(Expr):
    value: int


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Sized(Expr):
    """En(n) or Tuple(k)."""

    name: str
    n: int


@dataclass(frozen=True)
class Derivative(Expr):
    arg: Expr


@dataclass(frozen=True)
class Shift(Expr):
    arg: Expr


@dataclass(frozen=True)
class Conj(Expr):
    arg: Expr


@dataclass(frozen=True)
class PhaseScale(Expr):
    turns: Fraction
    arg: Expr


@dataclass(frozen=True)
class Sum(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Product(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Quotient(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Compose(Expr):
    outer: Expr
    inner: Expr


# queries


@dataclass(frozen=True)
class AngleLit:
    turns: Optional[Fraction] = None
    radians: Optional[float] = None


@dataclass(frozen=True)
class GF:
    expr: Expr
    order: int


@dataclass(frozen=True)
class Inner:
    left: Expr
    right: Expr
    order: int
    fock: bool = False


@dataclass(frozen=True)
class Vev:
    k: int
    l: int
    valences: Tuple[int, ...]


@dataclass(frozen=True)
class Expect:
    k: int
    weyl: Expr
    l: int


@dataclass(frozen=True)
class Solve:
    var: str
    rhs: Expr
    order: int


@dataclass(frozen=True)
class Evolve:
    expr: Expr
    angle: AngleLit
    order: int


@dataclass(frozen=True)
class Dyson:
    k: int
    l: int
    potential: Tuple[Tuple[int, float], ...]
    time: float
    order: int
    cutoff: int


Query = Union[GF, Inner, Vev, Expect, Solve, Evolve, Dyson]


# --- lexer ---------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<real>\d+\.\d*(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+)
  | (?P<nat>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>∘|[-+*/^(),=\[\]{}:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # nat, real, name, op, eof
    text: str
    offset: int  # byte offset into the UTF-8 encoding


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    tokens.append(Token("eof", "", _byte_offset(text, len(text))))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


# --- parser --------------------------------------------------------------


class Parser:
    def __init__(self, text: str, variables: FrozenSet[str] = frozenset()):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.variables = variables

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, msg: str, expected=()):
        raise ParseError(msg, self.tok.offset, expected)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "name"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.tok
        if not self.accept(text):
            self.fail(f"unexpected {tok.text or 'end of input'!r}", {repr(text)})
        return tok

    def nat(self) -> int:
        tok = self.tok
        if tok.kind != "nat":
            self.fail(f"unexpected {tok.text or 'end of input'!r}", {"natural number"})
        self.i += 1
        return int(tok.text)

    def number(self) -> float:
        neg = self.accept("-")
        tok = self.tok
        if tok.kind == "nat" and self.tokens[self.i + 1].text == "/":
            self.i += 2
            value = float(Fraction(int(tok.text), self.nat()))
        elif tok.kind in ("nat", "real"):
            self.i += 1
            value = float(tok.text)
        else:
            self.fail(f"unexpected {tok.text or 'end of input'!r}", {"number"})
        return -value if neg else value

    def rational(self) -> Fraction:
        neg = self.accept("-")
        num = self.nat()
        den = 1
        if self.accept("/"):
            den = self.nat()
            if den == 0:
                self.fail("zero denominator")
        q = Fraction(num, den)
        return -q if neg else q

    def end(self):
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}", {"end of input"})

    # expressions

    def expr(self) -> Expr:
        node = self.term()
        while self.accept("+"):
            node = Sum(node, self.term())
        return node

    def term(self) -> Expr:
        node = self.power()
        while True:
            if self.accept("*"):
                node = Product(node, self.power())
            elif self.accept("/"):
                node = Quotient(node, self.power())
            else:
                return node

    def power(self) -> Expr:
        node = self.compose()
        while self.accept("^"):
            node = Pow(node, self.nat())
        return node

    def compose(self) -> Expr:
        node = self.primary()
        while self.accept("of") or self.accept("∘"):
            node = Compose(node, self.primary())
        return node

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "nat":
            self.i += 1
            return Nat(int(tok.text))
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind != "name":
            self.fail(
                f"unexpected {tok.text or 'end of input'!r}",
                {"'('", "natural number", "identifier"},
            )
        name = tok.text
        self.i += 1
        if name in ATOMS:
            return Atom(name)
        if name in SIZED:
            self.expect("(")
            n = self.nat()
            self.expect(")")
            return Sized(name, n)
        if name in UNARY:
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return {"D": Derivative, "Astar": Shift, "Conj": Conj}[name](arg)
        if name == "Phase":
            self.expect("(")
            turns = self.rational()
            self.expect(",")
            arg = self.expr()
            self.expect(")")
            return PhaseScale(turns % 1, arg)
        if name in self.variables:
            return Var(name)
        raise ParseError(f"unknown identifier {name!r}", tok.offset, {"identifier"})

    # queries

    def query(self) -> Query:
        tok = self.tok
        if tok.kind != "name":
            self.fail(f"unexpected {tok.text or 'end of input'!r}", {"query name"})
        kind = tok.text
        self.i += 1
        self.expect("(")
        if kind == "gf":
            e = self.expr()
            self.expect(",")
            q = GF(e, self.nat())
        elif kind in ("inner", "fock_inner"):
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(",")
            q = Inner(a, b, self.nat(), fock=kind == "fock_inner")
        elif kind == "vev":
            k = self.nat()
            self.expect(",")
            l = self.nat()
            self.expect(",")
            q = Vev(k, l, tuple(self._nat_list()))
        elif kind == "expect":
            k = self.nat()
            self.expect(",")
            w = self.expr()
            self.expect(",")
            q = Expect(k, w, self.nat())
        elif kind == "solve":
            vt = self.tok
            if vt.kind != "name" or vt.text in RESERVED:
                self.fail("expected an unknown's name", {"identifier"})
            self.i += 1
            self.expect("=")
            saved = self.variables
            self.variables = saved | {vt.text}
            rhs = self.expr()
            self.variables = saved
            self.expect(",")
            q = Solve(vt.text, rhs, self.nat())
        elif kind == "evolve":
            e = self.expr()
            self.expect(",")
            ang = self._angle()
            self.expect(",")
            q = Evolve(e, ang, self.nat())
        elif kind == "dyson":
            k = self.nat()
            self.expect(",")
            l = self.nat()
            self.expect(",")
            pot = self._potential()
            self.expect(",")
            t = self.number()
            self.expect(",")
            order = self.nat()
            self.expect(",")
            q = Dyson(k, l, pot, t, order, self.nat())
        else:
            raise ParseError(
                f"unknown query {kind!r}",
                tok.offset,
                {"gf", "inner", "fock_inner", "vev", "expect", "solve", "evolve", "dyson"},
            )
        self.expect(")")
        return q

    def _nat_list(self) -> List[int]:
        self.expect("[")
        out = []
        if not self.accept("]"):
            out.append(self.nat())
            while self.accept(","):
                out.append(self.nat())
            self.expect("]")
        return out

    def _angle(self) -> AngleLit:
        tok = self.tok
        if tok.kind == "nat" and self.tokens[self.i + 1].text == "/":
            q = self.rational()
            self.expect("turns")
            return AngleLit(turns=q)
        x = self.number()
        if self.accept("turns"):
            if x != int(x):
                self.fail("turns must be rational, write p/q turns")
            return AngleLit(turns=Fraction(int(x)))
        self.accept("rad")
        return AngleLit(radians=x)

    def _potential(self) -> Tuple[Tuple[int, float], ...]:
        self.expect("{")
        out = []
        while True:
            m = self.nat()
            self.expect(":")
            out.append((m, self.number()))
            if not self.accept(","):
                break
        self.expect("}")
        return tuple(out)


def parse(text: str, variables=()) -> Expr:
    p = Parser(text, frozenset(variables))
    node = p.expr()
    p.end()
    return node


def parse_query(text: str) -> Query:
    p = Parser(text)
    q = p.query()
    p.end()
    return q


def parse_equation(text: str) -> Tuple[str, Expr]:
    """``NAME = EXPR`` for solve; NAME may appear on the right."""
    p = Parser(text)
    tok = p.tok
    if tok.kind != "name" or tok.text in RESERVED:
        p.fail("expected an unknown's name", {"identifier"})
    p.i += 1
    p.expect("=")
    p.variables = frozenset({tok.text})
    rhs = p.expr()
    p.end()
    return tok.text, rhs


# --- rendering -----------------------------------------------------------

_PREC = {Sum: 1, Product: 2, Quotient: 2, Pow: 3, Compose: 4}


def render(e: Expr) -> str:
    """Text that parses back to the same tree."""
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, Nat):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Sized):
        return f"{e.name}({e.n})"
    if isinstance(e, Derivative):
        return f"D({render(e.arg)})"
    if isinstance(e, Shift):
        return f"Astar({render(e.arg)})"
    if isinstance(e, Conj):
        return f"Conj({render(e.arg)})"
    if isinstance(e, PhaseScale):
        return f"Phase({e.turns}, {render(e.arg)})"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, 3, left=True)}^{e.exponent}"
    if isinstance(e, (Sum, Product, Quotient, Compose)):
        p = _PREC[type(e)]
        op = {Sum: " + ", Product: " * ", Quotient: " / ", Compose: " of "}[type(e)]
        a, b = (e.outer, e.inner) if isinstance(e, Compose) else (e.left, e.right)
        return f"{_wrap(a, p, left=True)}{op}{_wrap(b, p, left=False)}"
    raise TypeError(f"cannot render {e!r}")


def _wrap(e: Expr, parent: int, left: bool) -> str:
    s = render(e)
    p = _PREC.get(type(e))
    if p is None:
        return s
    # left-associative: a right child of equal precedence needs parentheses
    if p < parent or (p == parent and not left):
        return f"({s})"
    return s


def render_query(q: Query) -> str:
    if isinstance(q, GF):
        return f"gf({render(q.expr)}, {q.order})"
    if isinstance(q, Inner):
        name = "fock_inner" if q.fock else "inner"
        return f"{name}({render(q.left)}, {render(q.right)}, {q.order})"
    if isinstance(q, Vev):
        return f"vev({q.k}, {q.l}, [{', '.join(map(str, q.valences))}])"
    if isinstance(q, Expect):
        return f"expect({q.k}, {render(q.weyl)}, {q.l})"
    if isinstance(q, Solve):
        return f"solve({q.var} = {render(q.rhs)}, {q.order})"
    if isinstance(q, Evolve):
        a = q.angle
        ang = f"{a.turns} turns" if a.turns is not None else repr(a.radians)
        return f"evolve({render(q.expr)}, {ang}, {q.order})"
    if isinstance(q, Dyson):
        pot = ", ".join(f"{m}: {g!r}" for m, g in q.potential)
        return f"dyson({q.k}, {q.l}, {{{pot}}}, {q.time!r}, {q.order}, {q.cutoff})"
    raise TypeError(f"cannot render {q!r}")
