"""Exact polynomial arithmetic over the rationals.

``UniPoly`` is a polynomial in ``x`` with ``Fraction`` coefficients. ``BiPoly`` is a
polynomial in ``y`` whose coefficients are ``UniPoly`` values, which is how every
planar map component ``P(x, y)`` is stored. Both types are immutable and kept in
canonical form (no trailing zero coefficients), so equality is structural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import zip_longest
from numbers import Rational as _RationalABC
from typing import Iterable, List, Sequence, Tuple, Union

from ytri.errors import UndefinedGcd, ZeroPolynomialError

Rational = Fraction
Scalar = Union[int, Fraction]

# degree of the zero polynomial
MINUS_INFINITY = -math.inf

_ZERO = Fraction(0)
_ONE = Fraction(1)


def to_rational(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _strip(coeffs: Sequence, zero) -> tuple:
    end = len(coeffs)
    while end and coeffs[end - 1] == zero:
        end -= 1
    return tuple(coeffs[:end])


class UniPoly:
    """Univariate polynomial in x, coefficients indexed by degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()) -> None:
        self.coeffs: Tuple[Fraction, ...] = _strip(
            [to_rational(c) for c in coeffs], _ZERO
        )

    @classmethod
    def _raw(cls, coeffs: Sequence[Fraction]) -> "UniPoly":
        poly = cls.__new__(cls)
        poly.coeffs = _strip(coeffs, _ZERO)
        return poly

    @classmethod
    def zero(cls) -> "UniPoly":
        return cls._raw(())

    @classmethod
    def constant(cls, value: Scalar) -> "UniPoly":
        return cls._raw((to_rational(value),))

    @classmethod
    def x(cls) -> "UniPoly":
        return cls._raw((_ZERO, _ONE))

    @classmethod
    def monomial(cls, coefficient: Scalar, exponent: int) -> "UniPoly":
        return cls._raw((_ZERO,) * exponent + (to_rational(coefficient),))

    @property
    def degree(self) -> Union[int, float]:
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INFINITY

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UniPoly.constant(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("UniPoly", self.coeffs))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({format_unipoly(self)})"

    @staticmethod
    def _coerce(other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly.constant(other)
        return NotImplemented

    def __neg__(self) -> "UniPoly":
        return UniPoly._raw([-c for c in self.coeffs])

    def __add__(self, other) -> "UniPoly":
        other = UniPoly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return UniPoly._raw(
            [a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=_ZERO)]
        )

    __radd__ = __add__

    def __sub__(self, other) -> "UniPoly":
        other = UniPoly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return UniPoly._raw(
            [a - b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=_ZERO)]
        )

    def __rsub__(self, other) -> "UniPoly":
        return (-self) + other

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, (int, Fraction)):
            scalar = to_rational(other)
            return UniPoly._raw([c * scalar for c in self.coeffs])
        if not isinstance(other, UniPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return UniPoly.zero()
        product = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                product[i + j] += a * b
        return UniPoly._raw(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "UniPoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = UniPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __divmod__(self, divisor: "UniPoly") -> Tuple["UniPoly", "UniPoly"]:
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        remainder = list(self.coeffs)
        shift = len(remainder) - len(divisor.coeffs)
        if shift < 0:
            return UniPoly.zero(), self
        quotient = [_ZERO] * (shift + 1)
        lead = divisor.lead
        dlen = len(divisor.coeffs)
        for k in range(shift, -1, -1):
            factor = remainder[k + dlen - 1] / lead
            quotient[k] = factor
            if factor:
                for i, d in enumerate(divisor.coeffs):
                    remainder[k + i] -= factor * d
        return UniPoly._raw(quotient), UniPoly._raw(remainder[: dlen - 1])

    def __floordiv__(self, divisor: "UniPoly") -> "UniPoly":
        return divmod(self, divisor)[0]

    def __mod__(self, divisor: "UniPoly") -> "UniPoly":
        return divmod(self, divisor)[1]

    def exact_div(self, divisor: "UniPoly") -> "UniPoly":
        quotient, remainder = divmod(self, divisor)
        if not remainder.is_zero:
            raise ArithmeticError(f"{divisor!r} does not divide {self!r}")
        return quotient

    def __call__(self, at: Scalar) -> Fraction:
        at = to_rational(at)
        value = _ZERO
        for c in reversed(self.coeffs):
            value = value * at + c
        return value

    def derivative(self) -> "UniPoly":
        return UniPoly._raw([i * c for i, c in enumerate(self.coeffs)][1:])

    def compose(self, inner: "UniPoly") -> "UniPoly":
        """Return ``self(inner(x))``."""
        result = UniPoly.zero()
        for c in reversed(self.coeffs):
            result = result * inner + c
        return result

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        return self * (1 / self.lead)


class BiPoly:
    """Polynomial in y whose coefficients are ``UniPoly`` values in x."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Union[UniPoly, Scalar]] = ()) -> None:
        self.coeffs: Tuple[UniPoly, ...] = _strip(
            [c if isinstance(c, UniPoly) else UniPoly.constant(c) for c in coeffs],
            UniPoly.zero(),
        )

    @classmethod
    def _raw(cls, coeffs: Sequence[UniPoly]) -> "BiPoly":
        poly = cls.__new__(cls)
        poly.coeffs = _strip(coeffs, UniPoly.zero())
        return poly

    @classmethod
    def zero(cls) -> "BiPoly":
        return cls._raw(())

    @classmethod
    def constant(cls, value: Scalar) -> "BiPoly":
        return cls._raw((UniPoly.constant(value),))

    @classmethod
    def from_x(cls, poly: UniPoly) -> "BiPoly":
        """Embed ``poly(x)`` as a y-free bivariate polynomial."""
        return cls._raw((poly,))

    @classmethod
    def from_y(cls, poly: UniPoly) -> "BiPoly":
        """Embed ``poly`` as a polynomial in y with constant coefficients."""
        return cls._raw([UniPoly.constant(c) for c in poly.coeffs])

    @classmethod
    def x(cls) -> "BiPoly":
        return cls.from_x(UniPoly.x())

    @classmethod
    def y(cls) -> "BiPoly":
        return cls._raw((UniPoly.zero(), UniPoly.constant(1)))

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[int, int, Scalar]]) -> "BiPoly":
        """Build from ``(x_exponent, y_exponent, coefficient)`` triples."""
        rows: dict = {}
        for i, j, c in terms:
            rows.setdefault(j, {})
            rows[j][i] = rows[j].get(i, _ZERO) + to_rational(c)
        if not rows:
            return cls.zero()
        coeffs = []
        for j in range(max(rows) + 1):
            row = rows.get(j, {})
            width = max(row) + 1 if row else 0
            coeffs.append(UniPoly._raw([row.get(i, _ZERO) for i in range(width)]))
        return cls._raw(coeffs)

    @property
    def y_degree(self) -> Union[int, float]:
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INFINITY

    @property
    def x_degree(self) -> Union[int, float]:
        if not self.coeffs:
            return MINUS_INFINITY
        return max(c.degree for c in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1 and self.coeff(0).is_constant

    @property
    def depends_on_y(self) -> bool:
        return len(self.coeffs) > 1

    def coeff(self, j: int) -> UniPoly:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else UniPoly.zero()

    def exponents(self) -> List[int]:
        return [j for j, c in enumerate(self.coeffs) if not c.is_zero]

    def terms(self) -> List[Tuple[int, int, Fraction]]:
        """Nonzero ``(x_exponent, y_exponent, coefficient)`` triples."""
        return [
            (i, j, c)
            for j, row in enumerate(self.coeffs)
            for i, c in enumerate(row.coeffs)
            if c
        ]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, UniPoly)):
            other = BiPoly._coerce(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("BiPoly", self.coeffs))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"BiPoly({format_bipoly(self)})"

    @staticmethod
    def _coerce(other) -> "BiPoly":
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, UniPoly):
            return BiPoly.from_x(other)
        if isinstance(other, (int, Fraction)):
            return BiPoly.constant(other)
        return NotImplemented

    def __neg__(self) -> "BiPoly":
        return BiPoly._raw([-c for c in self.coeffs])

    def __add__(self, other) -> "BiPoly":
        other = BiPoly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return BiPoly._raw(
            [
                a + b
                for a, b in zip_longest(
                    self.coeffs, other.coeffs, fillvalue=UniPoly.zero()
                )
            ]
        )

    __radd__ = __add__

    def __sub__(self, other) -> "BiPoly":
        other = BiPoly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return BiPoly._raw(
            [
                a - b
                for a, b in zip_longest(
                    self.coeffs, other.coeffs, fillvalue=UniPoly.zero()
                )
            ]
        )

    def __rsub__(self, other) -> "BiPoly":
        return (-self) + other

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, (int, Fraction, UniPoly)):
            return BiPoly._raw([c * other for c in self.coeffs])
        if not isinstance(other, BiPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return BiPoly.zero()
        product = [UniPoly.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero:
                    product[i + j] = product[i + j] + a * b
        return BiPoly._raw(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "BiPoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = BiPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __call__(self, x: Scalar, y: Scalar) -> Fraction:
        x = to_rational(x)
        y = to_rational(y)
        value = _ZERO
        for c in reversed(self.coeffs):
            value = value * y + c(x)
        return value

    def at_x(self, x: Scalar) -> UniPoly:
        """Specialise x and return the remaining polynomial in y."""
        return UniPoly([c(x) for c in self.coeffs])

    def derivative(self, variable: str = "x") -> "BiPoly":
        if variable == "x":
            return BiPoly._raw([c.derivative() for c in self.coeffs])
        if variable == "y":
            return BiPoly._raw([c * j for j, c in enumerate(self.coeffs)][1:])
        raise ValueError(f"unknown variable {variable!r}")


Poly = Union[UniPoly, BiPoly]


def poly_arith(a: Poly, b, op: str) -> Poly:
    """Dispatch ``add``, ``sub``, ``mul`` or ``pow`` (``b`` is then the exponent)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a**b
    raise ValueError(f"unknown operation {op!r}")


def poly_derivative(f: Poly, variable: str = "x") -> Poly:
    if isinstance(f, UniPoly):
        if variable == "y":
            return UniPoly.zero()
        return f.derivative()
    return f.derivative(variable)


def poly_eval(f: UniPoly, at: Scalar) -> Fraction:
    return f(at)


def bi_eval(f: BiPoly, at: Tuple[Scalar, Scalar]) -> Fraction:
    return f(at[0], at[1])


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor by the Euclidean algorithm."""
    if a.is_zero and b.is_zero:
        raise UndefinedGcd("undefined gcd")
    a, b = a.monic(), b.monic()
    while not b.is_zero:
        a, b = b, (a % b).monic()
    return a


def square_free_part(p: UniPoly) -> UniPoly:
    if p.is_zero:
        raise ZeroPolynomialError("square-free part of the zero polynomial")
    if p.is_constant:
        return UniPoly.constant(1)
    return p.exact_div(poly_gcd(p, p.derivative())).monic()


def square_free_decomposition(p: UniPoly) -> List[UniPoly]:
    """Yun's algorithm: monic ``[a1, a2, ...]`` with ``p = lead * a1 * a2^2 * ...``."""
    if p.is_zero:
        raise ZeroPolynomialError("square-free decomposition of the zero polynomial")
    if p.is_constant:
        return []
    dp = p.derivative()
    g = poly_gcd(p, dp)
    b = p.exact_div(g)
    d = dp.exact_div(g) - b.derivative()
    factors: List[UniPoly] = []
    while not b.is_constant:
        a = poly_gcd(b, d)
        b = b.exact_div(a)
        d = d.exact_div(a) - b.derivative()
        factors.append(a)
    return factors


def substitute(f: BiPoly, u: BiPoly, v: BiPoly) -> BiPoly:
    """Expand ``f(u(x, y), v(x, y))``: Horner in y over Horner in x."""
    result = BiPoly.zero()
    for row in reversed(f.coeffs):
        inner = BiPoly.zero()
        for c in reversed(row.coeffs):
            inner = inner * u + c
        result = result * v + inner
    return result


def _format_monomial(coefficient: Fraction, powers: Sequence[Tuple[str, int]]) -> str:
    factors = [name if e == 1 else f"{name}^{e}" for name, e in powers if e]
    magnitude = abs(coefficient)
    if not factors:
        return str(magnitude)
    if magnitude == 1:
        return "*".join(factors)
    return "*".join([str(magnitude)] + factors)


def _join_terms(terms: List[Tuple[Fraction, str]]) -> str:
    if not terms:
        return "0"
    pieces = []
    for index, (coefficient, body) in enumerate(terms):
        if index == 0:
            pieces.append(f"-{body}" if coefficient < 0 else body)
        else:
            pieces.append(f" - {body}" if coefficient < 0 else f" + {body}")
    return "".join(pieces)


def format_unipoly(p: UniPoly, variable: str = "x") -> str:
    terms = [
        (c, _format_monomial(c, [(variable, i)]))
        for i, c in reversed(list(enumerate(p.coeffs)))
        if c
    ]
    return _join_terms(terms)


def format_bipoly(f: BiPoly) -> str:
    """Canonical text, highest y-degree first; the output re-parses to ``f``."""
    terms = [
        (c, _format_monomial(c, [("x", i), ("y", j)]))
        for i, j, c in sorted(f.terms(), key=lambda t: (-t[1], -t[0]))
    ]
    return _join_terms(terms)
