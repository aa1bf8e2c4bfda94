"""Recursive-descent parser for the polynomial expression grammar::

    expr   := term (('+' | '-') term)*
    term   := ['-'] factor ('*' factor)*
    factor := scalar | var | '(' expr ')'
    scalar := INT ['/' INT] [RADICAL] | RADICAL        RADICAL := r2 | r3 | r6
    var    := ('T' | 'th' | 'q' | 'p' | 'X') INT

Odd factors are sign-normalized as they are multiplied in.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .scalars import Scalar
from .superpoly import Family, SuperPolynomial, VariableId

_FAMILIES = {"T": Family.THETA_BIG, "th": Family.THETA_SMALL, "q": Family.Q, "p": Family.P, "X": Family.X}

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<rad>r[236])(?![0-9A-Za-z])|(?P<var>th|T|q|p|X)(?P<idx>\d+)|(?P<int>\d+)|(?P<op>[-+*/()])"
)


class ExpressionError(ValueError):
    """Syntax or range error, carrying a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExpressionError(f"unexpected character {src[pos]!r}", *_linecol(src, pos))
        kind = m.lastgroup
        if kind == "idx":
            kind = "var"
        if kind != "ws":
            out.append(Token(kind, m.group(0), pos))
        pos = m.end()
    out.append(Token("eof", "", len(src)))
    return out


def _linecol(src: str, pos: int) -> tuple[int, int]:
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, src: str, dim: int | None):
        self.src = src
        self.dim = dim
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok: Token):
        raise ExpressionError(msg, *_linecol(self.src, tok.pos))

    def expect(self, text: str) -> Token:
        tok = self.take()
        if tok.text != text:
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def parse(self) -> SuperPolynomial:
        result = self.expr()
        tok = self.peek()
        if tok.kind != "eof":
            self.error(f"unexpected {tok.text!r}", tok)
        return result

    def expr(self) -> SuperPolynomial:
        acc = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> SuperPolynomial:
        negate = False
        if self.peek().text == "-":
            self.take()
            negate = True
        acc = self.factor()
        while self.peek().text == "*":
            self.take()
            acc = acc * self.factor()
        return -acc if negate else acc

    def factor(self) -> SuperPolynomial:
        tok = self.peek()
        if tok.text == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "var":
            self.take()
            m = re.fullmatch(r"(th|T|q|p|X)(\d+)", tok.text)
            idx = int(m.group(2))
            if idx < 1 or (self.dim is not None and idx > self.dim):
                bound = f"1..{self.dim}" if self.dim is not None else ">= 1"
                self.error(f"variable index {idx} out of range {bound}", tok)
            return SuperPolynomial.var(_FAMILIES[m.group(1)], idx)
        if tok.kind in ("int", "rad"):
            return SuperPolynomial.const(self.scalar())
        self.error(f"unexpected {tok.text or 'end of input'!r}", tok)

    def scalar(self) -> Scalar:
        value = Fraction(1)
        tok = self.peek()
        if tok.kind == "int":
            self.take()
            value = Fraction(int(tok.text))
            if self.peek().text == "/":
                self.take()
                den = self.take()
                if den.kind != "int":
                    self.error("expected denominator", den)
                if int(den.text) == 0:
                    self.error("zero denominator", den)
                value /= int(den.text)
        if self.peek().kind == "rad":
            rad = self.take().text
            coords = [0, 0, 0, 0]
            coords[{"r2": 1, "r3": 2, "r6": 3}[rad]] = value
            return Scalar(*coords)
        return Scalar(value)


def parse_expression(src: str, dim: int | None = None) -> SuperPolynomial:
    """Parse ``src`` into canonical form; ``dim`` bounds variable indices when given."""
    return _Parser(src, dim).parse()


def variable(name: str) -> VariableId:
    """Parse a single variable name such as ``T3`` or ``th1``."""
    m = re.fullmatch(r"(th|T|q|p|X)(\d+)", name.strip())
    if m is None:
        raise ExpressionError(f"not a variable name: {name!r}", 1, 1)
    return VariableId(_FAMILIES[m.group(1)], int(m.group(2)))
