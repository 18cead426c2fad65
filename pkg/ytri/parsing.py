"""Text front end: ``P ; Q [on (a, b)]`` into a ``PlanarMap``.

Precedence climbing over a token stream. Literals are integers or rationals written
``5/2`` without spaces; there is no division operator. ``^`` binds tightest and
associates to the right, and unary minus applies to the following power.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Deque, Optional, Tuple, Union

from ytri.errors import ParseError
from ytri.mapalg import PlanarMap
from ytri.polycore import BiPoly
from ytri.realroots import Interval

logger = logging.getLogger(__name__)

OPERATORS = [
    [("+", "left"), ("-", "left")],
    [("*", "left")],
    [("^", "right")],
]
OPERATOR_PREC = {name: idx for idx, group in enumerate(OPERATORS) for name, _ in group}
OPERATOR_ASSOC = {name: assoc for group in OPERATORS for name, assoc in group}
PUNCTUATION = "();,"
VARIABLES = {"x": BiPoly.x, "y": BiPoly.y}
KEYWORDS = {"on", "inf"}


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "name", "op", "end"
    text: str
    line: int
    column: int
    value: Optional[Fraction] = None


def tokenize(source: str) -> Deque[Token]:
    tokens: Deque[Token] = deque()
    idx, line, line_start = 0, 1, 0

    def column() -> int:
        return idx - line_start + 1

    while idx < len(source):
        c = source[idx]
        if c == "\n":
            idx += 1
            line, line_start = line + 1, idx
            continue
        if c.isspace():
            idx += 1
            continue
        col = column()
        if c.isdigit():
            start = idx
            while idx < len(source) and source[idx].isdigit():
                idx += 1
            numerator = int(source[start:idx])
            denominator = 1
            if idx < len(source) and source[idx] == "/":
                idx += 1
                digits = idx
                while idx < len(source) and source[idx].isdigit():
                    idx += 1
                if digits == idx:
                    raise ParseError(
                        "expected digits after '/' in a rational literal", line, col
                    )
                denominator = int(source[digits:idx])
                if denominator == 0:
                    raise ParseError("zero denominator in rational literal", line, col)
            value = Fraction(numerator, denominator)
            tokens.append(Token("number", source[start:idx], line, col, value))
            continue
        if c.isalpha():
            start = idx
            while idx < len(source) and source[idx].isalnum():
                idx += 1
            tokens.append(Token("name", source[start:idx], line, col))
            continue
        if c in OPERATOR_PREC or c in PUNCTUATION:
            idx += 1
            tokens.append(Token("op", c, line, col))
            continue
        if c == "/":
            raise ParseError(
                "division is not supported; write rationals as p/q", line, col
            )
        raise ParseError(f"unexpected character {c!r}", line, col)
    return tokens


class _Parser:
    def __init__(self, source: str) -> None:
        self.tokens = tokenize(source)
        self.last: Optional[Token] = None

    def peek(self) -> Optional[Token]:
        return self.tokens[0] if self.tokens else None

    def advance(self) -> Token:
        if not self.tokens:
            self.fail_at_end("unexpected end of input")
        self.last = self.tokens.popleft()
        return self.last

    def fail_at_end(self, message: str) -> None:
        if self.last is None:
            raise ParseError(message, 1, 1)
        raise ParseError(message, self.last.line, self.last.column)

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token is None:
            self.fail_at_end(f"expected {text!r}, found end of input")
        if token.text != text:
            raise ParseError(
                f"expected {text!r}, found {token.text!r}", token.line, token.column
            )
        return self.advance()

    def atom(self) -> BiPoly:
        token = self.advance()
        if token.text == "-":
            return -self.expression(OPERATOR_PREC["^"])
        if token.text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        if token.kind == "number":
            return BiPoly.constant(token.value)
        if token.kind == "name":
            if token.text in VARIABLES:
                return VARIABLES[token.text]()
            raise ParseError(
                f"unknown variable {token.text!r}; only x and y are allowed",
                token.line,
                token.column,
            )
        raise ParseError(f"unexpected {token.text!r}", token.line, token.column)

    def expression(self, min_prec: int) -> BiPoly:
        result = self.atom()
        while True:
            token = self.peek()
            if token is None:
                return result
            if token.kind in ("number", "name") or token.text == "(":
                if token.text == "on":
                    return result
                raise ParseError(
                    f"unexpected {token.text!r};"
                    " implicit multiplication is not supported",
                    token.line,
                    token.column,
                )
            prec = OPERATOR_PREC.get(token.text)
            if prec is None or prec < min_prec:
                return result
            operator = self.advance()
            next_prec = prec if OPERATOR_ASSOC[operator.text] == "right" else prec + 1
            rhs = self.expression(next_prec)
            result = self.apply(operator, result, rhs)

    @staticmethod
    def apply(operator: Token, lhs: BiPoly, rhs: BiPoly) -> BiPoly:
        if operator.text == "+":
            return lhs + rhs
        if operator.text == "-":
            return lhs - rhs
        if operator.text == "*":
            return lhs * rhs
        exponent = rhs.coeff(0).coeff(0) if rhs.is_constant else None
        if exponent is None or exponent.denominator != 1 or exponent < 0:
            raise ParseError(
                "exponent must be a nonnegative integer constant",
                operator.line,
                operator.column,
            )
        return lhs ** int(exponent)

    def bound(self, upper: bool) -> Optional[Fraction]:
        sign = 1
        token = self.advance()
        if token.text == "-":
            sign = -1
            token = self.advance()
        elif token.text == "+":
            token = self.advance()
        if token.text == "inf":
            if (sign > 0) != upper:
                raise ParseError(
                    "infinite endpoint on the wrong side of the strip",
                    token.line,
                    token.column,
                )
            return None
        if token.kind != "number":
            raise ParseError(
                f"expected a rational endpoint, found {token.text!r}",
                token.line,
                token.column,
            )
        return sign * token.value

    def strip(self) -> Interval:
        start = self.expect("(")
        lower = self.bound(upper=False)
        self.expect(",")
        upper = self.bound(upper=True)
        self.expect(")")
        try:
            return Interval(lower, upper)
        except ValueError as exc:
            raise ParseError(str(exc), start.line, start.column) from exc

    def planar_map(self) -> PlanarMap:
        P = self.expression(0)
        self.expect(";")
        Q = self.expression(0)
        strip = Interval.real_line()
        token = self.peek()
        if token is not None and token.text == "on":
            self.advance()
            strip = self.strip()
        token = self.peek()
        if token is not None:
            raise ParseError(f"unexpected {token.text!r}", token.line, token.column)
        return PlanarMap(P, Q, strip)


@dataclass(frozen=True)
class MapSource:
    p_text: str
    q_text: str
    strip_text: Optional[str] = None

    @property
    def text(self) -> str:
        text = f"{self.p_text} ; {self.q_text}"
        if self.strip_text:
            text += f" on {self.strip_text}"
        return text


def parse_map(source: Union[str, MapSource]) -> PlanarMap:
    text = source.text if isinstance(source, MapSource) else source
    F = _Parser(text).planar_map()
    logger.debug("parsed %r as %s", text, F)
    return F


def parse_point(text: str) -> Tuple[Fraction, Fraction]:
    """``"u,v"`` with integer or ``p/q`` coordinates."""
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 2:
        raise ParseError(f"expected two comma-separated coordinates, got {text!r}")
    try:
        return Fraction(parts[0]), Fraction(parts[1])
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"invalid coordinate in {text!r}") from exc
