"""Tiny recursive-descent parser shared by the polynomial and graded grammars.

Grammar (whitespace-insensitive)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' INT]
    atom   := NUMBER | NAME | '(' expr ')'

Division is only allowed by numeric factors.  The parser builds nothing
itself: it calls back into an ``Algebra`` object so the same code yields
Polynomials, GradedFunctions or linear combinations of basis symbols.
"""
from __future__ import annotations

import re
from fractions import Fraction

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


class ParseError(ValueError):
    """Syntax or name error, carrying a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")

    def shifted(self, line: int, col_offset: int) -> "ParseError":
        return ParseError(self.message, line, self.column + col_offset)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col - 1]!r}", 1, col)
        kind = m.lastgroup
        start = m.start(kind) + 1
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


def _number(tok: str) -> Fraction:
    if "/" in tok:
        a, b = tok.split("/")
        return Fraction(Fraction(a), Fraction(b))
    return Fraction(tok)


class _Parser:
    def __init__(self, text, algebra):
        self.toks = _tokenize(text)
        self.i = 0
        self.alg = algebra

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, col = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", 1, col)

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 1, 1)
        val = self.expr()
        kind, tok, col = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {tok!r}", 1, col)
        return val

    def expr(self):
        val = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            val = self.alg.add(val, rhs) if op == "+" else self.alg.add(val, self.alg.neg(rhs))
        return val

    def term(self):
        val = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op, col = self.take()[1], self.peek()[2]
            if op == "*":
                val = self.alg.mul(val, self.unary())
            else:
                kind, tok, col = self.peek()
                if kind != "num":
                    raise ParseError("division is only allowed by a number", 1, col)
                self.take()
                d = _number(tok)
                if d == 0:
                    raise ParseError("division by zero", 1, col)
                val = self.alg.mul(val, self.alg.const(1 / d))
        return val

    def unary(self):
        # a sign binds looser than ^, so -x^2 is -(x^2)
        if self.peek()[0] == "op" and self.peek()[1] in "+-":
            neg = self.take()[1] == "-"
            val = self.unary()
            return self.alg.neg(val) if neg else val
        return self.factor()

    def factor(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, tok, col = self.take()
            if kind != "num" or not tok.isdigit():
                raise ParseError("exponent must be a non-negative integer", 1, col)
            base = self.alg.pow(base, int(tok))
        return base

    def atom(self):
        kind, tok, col = self.take()
        if kind == "num":
            return self.alg.const(_number(tok))
        if kind == "name":
            try:
                return self.alg.symbol(tok)
            except KeyError:
                raise ParseError(f"unknown symbol {tok!r}", 1, col) from None
        if tok == "(":
            val = self.expr()
            self.expect(")")
            return val
        raise ParseError(f"unexpected token {tok or 'end of input'!r}", 1, col)


def parse_with(text: str, algebra):
    """Parse ``text`` using the callbacks of ``algebra``."""
    return _Parser(text, algebra).parse()
