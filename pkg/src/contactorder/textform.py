"""Canonical text format for polynomials and rational functions.

Rendering emits terms in graded-lex descending order, scalars as ``p/q``
or ``p/q+r/s*sqrt(d)`` and monomials as ``X1^a*X2^b``, e.g.
``4*X1^3*X2-4*X1*X2^3``.  The parser is whitespace-insensitive and
accepts general ``+ - * / ^ ( )`` expressions over integers, ``sqrt(d)``
and variables (``X1, X2, ...``; ``X, Y, Z`` are aliases for the first
three), so any rendered value round-trips.
"""

from __future__ import annotations

import re

from contactorder.multipoly import MultiPoly, _grlex
from contactorder.ratfunc import RatFunc
from contactorder.scalars import Scalar


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------


def _monomial_text(e) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"X{i + 1}")
        elif k > 1:
            parts.append(f"X{i + 1}^{k}")
    return "*".join(parts)


def render_poly(p: MultiPoly) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for e in sorted(p.terms, key=_grlex, reverse=True):
        c = p.terms[e]
        mono = _monomial_text(e)
        if c.is_composite_text():
            txt = f"({c.render()})*{mono}" if mono else f"({c.render()})"
            pieces.append((False, txt))
            continue
        negative = c.sign() < 0
        mag = (-c if negative else c).render()
        if mono:
            txt = mono if mag == "1" else f"{mag}*{mono}"
        else:
            txt = mag
        pieces.append((negative, txt))
    out = []
    for i, (negative, txt) in enumerate(pieces):
        if i == 0:
            out.append("-" + txt if negative else txt)
        else:
            out.append(("-" if negative else "+") + txt)
    return "".join(out)


def render_ratfunc(f: RatFunc) -> str:
    if f.is_polynomial():
        return render_poly(f.num)
    num = render_poly(f.num)
    den = render_poly(f.den)
    return f"({num})/({den})"


# ---------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|/|\+|-|\(|\)))")

_ALIASES = {"X": 1, "Y": 2, "Z": 3, "x": 1, "y": 2, "z": 3}


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            tail = text[pos:].strip()
            if not tail:
                break
            raise ParseError(f"unexpected input at {tail[:20]!r}")
        if m.group(1):
            tokens.append(("int", int(m.group(1))))
        elif m.group(2):
            tokens.append(("name", m.group(2)))
        else:
            tokens.append(("op", m.group(3)))
        pos = m.end()
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, tokens, nvars: int):
        self.tokens = tokens
        self.pos = 0
        self.nvars = nvars

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.next()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, got {val!r}")

    def parse_expr(self) -> RatFunc:
        value = self.parse_term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.parse_term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def parse_term(self) -> RatFunc:
        value = self.parse_factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.parse_factor()
                value = value * rhs if val == "*" else value / rhs
            else:
                return value

    def parse_factor(self) -> RatFunc:
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.next()
            return -self.parse_factor()
        if kind == "op" and val == "+":
            self.next()
            return self.parse_factor()
        base = self.parse_base()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "^":
                self.next()
                sign = 1
                kind2, val2 = self.peek()
                if kind2 == "op" and val2 == "-":
                    self.next()
                    sign = -1
                kind2, val2 = self.next()
                if kind2 != "int":
                    raise ParseError("exponent must be an integer")
                base = base ** (sign * val2)
            else:
                return base

    def parse_base(self) -> RatFunc:
        kind, val = self.next()
        if kind == "int":
            return RatFunc.constant(self.nvars, val)
        if kind == "op" and val == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if kind == "name":
            if val == "sqrt":
                self.expect_op("(")
                kind2, d = self.next()
                if kind2 != "int":
                    raise ParseError("sqrt() takes an integer")
                self.expect_op(")")
                return RatFunc.constant(self.nvars, Scalar.sqrt_of(d))
            index = None
            m = re.fullmatch(r"[Xx](\d+)", val)
            if m:
                index = int(m.group(1))
            elif val in _ALIASES:
                index = _ALIASES[val]
            if index is None:
                raise ParseError(f"unknown name {val!r}")
            if not 1 <= index <= self.nvars:
                raise ParseError(f"variable X{index} out of range for {self.nvars} variables")
            return RatFunc.from_poly(MultiPoly.variable(self.nvars, index - 1))
        raise ParseError(f"unexpected token {val!r}")


def parse_ratfunc(text: str, nvars: int) -> RatFunc:
    parser = _Parser(_tokenize(text), nvars)
    value = parser.parse_expr()
    kind, val = parser.next()
    if kind != "end":
        raise ParseError(f"trailing input at {val!r}")
    return value


def parse_poly(text: str, nvars: int) -> MultiPoly:
    return parse_ratfunc(text, nvars).as_poly()
