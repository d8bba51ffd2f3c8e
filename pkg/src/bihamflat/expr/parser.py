"""Parser for the model-file expression language.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' '-'? integer)?
    base   := integer | coordinate | '(' expr ')'

Unary minus binds looser than ``^``: ``-x^2`` is ``-(x^2)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from .poly import Polynomial
from .rational import RationalFunction


@dataclass(frozen=True)
class ChartContext:
    """Coordinate names of a chart; ``dim`` is their count."""

    coordinate_names: Tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.coordinate_names)
        object.__setattr__(self, "coordinate_names", names)
        if not names:
            raise ValueError("a chart needs at least one coordinate")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        for name in names:
            if not _NAME.fullmatch(name):
                raise ValueError(f"invalid coordinate name {name!r}")

    @classmethod
    def standard(cls, dim: int, prefix: str = "x") -> "ChartContext":
        return cls(tuple(f"{prefix}{i + 1}" for i in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.coordinate_names)

    def index(self, name: str) -> int:
        try:
            return self.coordinate_names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def coordinate(self, i: int) -> RationalFunction:
        return RationalFunction.var(self.dim, i)

    def constant(self, c) -> RationalFunction:
        return RationalFunction.constant(self.dim, c)

    def zero(self) -> RationalFunction:
        return RationalFunction.zero(self.dim)

    def parse(self, text: str) -> RationalFunction:
        return to_rational(parse_expr(text, self), self)

    def format(self, r: RationalFunction) -> str:
        return r.format(self.coordinate_names)


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


# -- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Coord:
    index: int
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "ExprAst"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Pow:
    base: "ExprAst"
    exponent: int


ExprAst = Union[Const, Coord, Neg, BinOp, Pow]


# -- tokenizer ----------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            at = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[at]!r}", at, text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, chart: ChartContext):
        self.text = text
        self.chart = chart
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {value!r}, found {found}", pos, self.text)

    def parse(self) -> ExprAst:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", pos, self.text)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.factor())
        node = self.base()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            sign = 1
            if self.peek()[1] == "-" and self.peek()[0] == "op":
                self.take()
                sign = -1
            kind, val, pos = self.take()
            if kind != "num":
                found = "end of input" if kind == "end" else repr(val)
                raise ParseError(f"expected integer exponent, found {found}", pos, self.text)
            node = Pow(node, sign * int(val))
        return node

    def base(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Const(Fraction(int(val)))
        if kind == "name":
            try:
                return Coord(self.chart.index(val), val)
            except KeyError:
                raise ParseError(f"unknown coordinate {val!r}", pos, self.text) from None
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {found}", pos, self.text)


def parse_expr(text: str, chart: ChartContext) -> ExprAst:
    """Parse ``text`` into an AST; coordinates are resolved against ``chart``."""
    return _Parser(text, chart).parse()


def to_rational(ast: ExprAst, chart: ChartContext | int) -> RationalFunction:
    """Evaluate an AST to a canonical rational function.

    Raises ``ZeroDivisionError`` when a divisor simplifies to zero.
    """
    n = chart if isinstance(chart, int) else chart.dim
    if isinstance(ast, Const):
        return RationalFunction.constant(n, ast.value)
    if isinstance(ast, Coord):
        return RationalFunction.var(n, ast.index)
    if isinstance(ast, Neg):
        return -to_rational(ast.operand, n)
    if isinstance(ast, Pow):
        b = to_rational(ast.base, n)
        if ast.exponent < 0 and b.is_zero():
            raise ZeroDivisionError("zero raised to a negative power")
        return b ** ast.exponent
    if isinstance(ast, BinOp):
        a = to_rational(ast.left, n)
        b = to_rational(ast.right, n)
        if ast.op == "+":
            return a + b
        if ast.op == "-":
            return a - b
        if ast.op == "*":
            return a * b
        if b.is_zero():
            raise ZeroDivisionError("division by an expression that simplifies to zero")
        return a / b
    raise TypeError(f"not an expression node: {ast!r}")


def differentiate(r: RationalFunction, i: int) -> RationalFunction:
    if not 0 <= i < r.nvars:
        raise IndexError(f"coordinate index {i} out of range")
    return r.diff(i)


def evaluate(r: RationalFunction, point: Sequence) -> Fraction:
    return r.evaluate(point)


def coerce_point(values: Sequence) -> Tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


def parse_rational_literal(text: str) -> Fraction:
    """``p`` or ``p/q`` with an optional sign."""
    m = re.fullmatch(r"\s*([-+]?\d+)(?:\s*/\s*(\d+))?\s*", text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    q = int(m.group(2)) if m.group(2) else 1
    if q == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), q)


__all__ = [
    "BinOp", "ChartContext", "Const", "Coord", "ExprAst", "Neg", "ParseError", "Polynomial", "Pow",
    "coerce_point", "differentiate", "evaluate", "parse_expr", "parse_rational_literal", "to_rational",
]
