"""Recursive-descent parser for polynomial text.

Grammar::

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := rational | identifier | '(' expr ')'
    rational := int ('/' uint)?

The optional leading sign is what lets rendered polynomials such as
``-w0^2 + w1*w2`` parse back.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .polyring import Polynomial, VarContext


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, offset: int, text: str):
        super().__init__(f"{message} at offset {offset}: {text!r}")
        self.offset = offset
        self.text = text


@dataclass
class _Token:
    kind: str  # int, ident, op, end
    value: str
    pos: int


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^/()]))")


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: VarContext):
        self.text = text
        self.ctx = ctx
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Optional[_Token] = None):
        tok = tok or self.tok
        raise PolynomialSyntaxError(message, tok.pos, self.text)

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.value == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            found = self.tok.value or "end of input"
            self.error(f"expected {op!r}, found {found!r}")

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.value!r}")
        return p

    def expr(self) -> Polynomial:
        neg = False
        if self.accept("-"):
            neg = True
        else:
            self.accept("+")
        acc = self.term()
        if neg:
            acc = -acc
        while True:
            if self.accept("+"):
                acc = acc + self.term()
            elif self.accept("-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.accept("*"):
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        base = self.base()
        if self.accept("^"):
            tok = self.tok
            if tok.kind != "int":
                self.error("expected a nonnegative integer exponent")
            self.i += 1
            base = base ** int(tok.value)
        return base

    def base(self) -> Polynomial:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            value = Fraction(int(tok.value))
            if self.accept("/"):
                den = self.tok
                if den.kind != "int":
                    self.error("expected an unsigned integer denominator")
                if int(den.value) == 0:
                    self.error("zero denominator", den)
                self.i += 1
                value = value / int(den.value)
            return self.ctx.const(value)
        if tok.kind == "ident":
            self.i += 1
            if tok.value not in self.ctx.names:
                self.error(f"unknown identifier {tok.value!r}", tok)
            return self.ctx.var(tok.value)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        self.error(f"unexpected {tok.value!r}" if tok.value else "unexpected end of input")


def parse_polynomial(text: str, ctx: VarContext) -> Polynomial:
    """Parse ``text`` into a polynomial of ``ctx``; raises PolynomialSyntaxError."""
    return _Parser(text, ctx).parse()


def infer_context(text: str) -> VarContext:
    """Context of all identifiers in ``text``, in order of first appearance."""
    names = []
    for tok in _tokenize(text):
        if tok.kind == "ident" and tok.value not in names:
            names.append(tok.value)
    return VarContext(tuple(names))
