"""Recursive-descent parser for products of linear forms in x, y, z, t.

Grammar (whitespace ignored, ``*`` and ``·`` optional between factors)::

    product := factor+
    factor  := VAR | '(' linear ')'
    linear  := sign? term (sign term)*
    term    := INT? '*'? VAR
"""
from __future__ import annotations

VARIABLES = "xyzt"
_MINUS = {"-", "−", "–"}


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}: {text!r}")
        self.pos = pos


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.text, self.pos)

    def product(self) -> list[tuple[int, int, int, int]]:
        factors = []
        while True:
            ch = self.peek()
            if ch == "":
                break
            if ch in "*·⋅":
                self.pos += 1
                continue
            factors.append(self.factor())
        if not factors:
            raise self.error("empty product")
        return factors

    def factor(self) -> tuple[int, int, int, int]:
        ch = self.peek()
        if ch in VARIABLES:
            self.pos += 1
            return _unit(ch)
        if ch == "(":
            self.pos += 1
            start = self.pos
            form = self.linear()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            if not any(form):
                raise ParseError("factor not linear (vanishes identically)", self.text, start)
            return form
        if ch.isdigit() or ch in _MINUS or ch == "+":
            raise self.error("factor not linear (constant factor)")
        raise self.error(f"unexpected character {ch!r}")

    def linear(self) -> tuple[int, int, int, int]:
        coeffs = [0, 0, 0, 0]
        first = True
        while True:
            ch = self.peek()
            sign = 1
            if ch in _MINUS or ch == "+":
                sign = -1 if ch in _MINUS else 1
                self.pos += 1
            elif not first:
                break
            first = False
            coef, var = self.term()
            coeffs[VARIABLES.index(var)] += sign * coef
            if self.peek() in ("", ")"):
                break
        return tuple(coeffs)

    def term(self) -> tuple[int, str]:
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start:self.pos]
        coef = int(digits) if digits else 1
        if self.peek() == "*":
            self.pos += 1
        ch = self.peek()
        if ch in VARIABLES and ch:
            self.pos += 1
            return coef, ch
        if digits:
            raise ParseError("factor not linear (constant term)", self.text, start)
        raise self.error("expected a variable")


def _unit(var: str) -> tuple[int, int, int, int]:
    coeffs = [0, 0, 0, 0]
    coeffs[VARIABLES.index(var)] = 1
    return tuple(coeffs)


def parse_product(text: str) -> list[tuple[int, int, int, int]]:
    """Return the integer coefficient vectors of the factors, in order."""
    return _Parser(text).product()
