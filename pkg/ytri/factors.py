"""Atomic factors of a decomposition and the chains built from them.

Every factor is injective on its strip: triangular factors globally, quasi-triangular
factors when their ``alpha`` is strictly monotone and their y-scaling does not
vanish. Chains list factors outermost first, ``F = C_k o ... o C_1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import ClassVar, Optional, Tuple

from ytri.errors import CertificateError
from ytri.polycore import BiPoly, UniPoly, format_unipoly, to_rational
from ytri.realroots import Interval, is_non_vanishing

COMPOSITION_CONVENTION = "outermost first: F = C_k o ... o C_1"


@dataclass(frozen=True)
class FactorCertificate:
    strip: Interval
    monotone: bool
    nonvanishing: bool
    detail: str

    @property
    def valid(self) -> bool:
        return self.monotone and self.nonvanishing


def _global_certificate(strip: Interval, detail: str) -> FactorCertificate:
    return FactorCertificate(strip, True, True, detail)


def _nonzero(value, name: str) -> Fraction:
    value = to_rational(value)
    if value == 0:
        raise ValueError(f"{name} must be nonzero")
    return value


class AtomicMap:
    kind: ClassVar[str] = "atomic"
    is_triangular: ClassVar[bool] = False

    def components(self) -> Tuple[BiPoly, BiPoly]:
        raise NotImplementedError

    def certify(self, strip: Interval) -> FactorCertificate:
        raise NotImplementedError

    def certified(self, strip: Interval) -> "AtomicMap":
        certificate = self.certify(strip)
        if not certificate.valid:
            raise CertificateError(f"{self.kind} factor: {certificate.detail}")
        return replace(self, certificate=certificate)

    def __call__(self, x, y) -> Tuple[Fraction, Fraction]:
        p, q = self.components()
        return p(x, y), q(x, y)


@dataclass(frozen=True)
class TriangularX(AtomicMap):
    """``(a*x, b*y + beta(x))``."""

    a: Fraction
    b: Fraction
    beta: UniPoly = field(default_factory=UniPoly.zero)
    certificate: Optional[FactorCertificate] = field(default=None, compare=False)

    kind: ClassVar[str] = "triangular_x"
    is_triangular: ClassVar[bool] = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _nonzero(self.a, "a"))
        object.__setattr__(self, "b", _nonzero(self.b, "b"))

    def components(self) -> Tuple[BiPoly, BiPoly]:
        return BiPoly.x() * self.a, BiPoly.y() * self.b + self.beta

    def certify(self, strip: Interval) -> FactorCertificate:
        return _global_certificate(strip, f"a = {self.a}, b = {self.b} are nonzero")


@dataclass(frozen=True)
class TriangularY(AtomicMap):
    """``(a*x + alpha(y), b*y)`` with ``alpha`` stored as a univariate polynomial."""

    a: Fraction
    b: Fraction
    alpha: UniPoly = field(default_factory=UniPoly.zero)
    certificate: Optional[FactorCertificate] = field(default=None, compare=False)

    kind: ClassVar[str] = "triangular_y"
    is_triangular: ClassVar[bool] = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _nonzero(self.a, "a"))
        object.__setattr__(self, "b", _nonzero(self.b, "b"))

    def components(self) -> Tuple[BiPoly, BiPoly]:
        return BiPoly.x() * self.a + BiPoly.from_y(self.alpha), BiPoly.y() * self.b

    def certify(self, strip: Interval) -> FactorCertificate:
        return _global_certificate(strip, f"a = {self.a}, b = {self.b} are nonzero")


@dataclass(frozen=True)
class ShearX(AtomicMap):
    """``(u - c*v^L, v)``."""

    c: Fraction
    exponent: int = 1
    certificate: Optional[FactorCertificate] = field(default=None, compare=False)

    kind: ClassVar[str] = "shear_x"
    is_triangular: ClassVar[bool] = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", _nonzero(self.c, "c"))
        if self.exponent < 1:
            raise ValueError("shear exponent must be positive")

    def components(self) -> Tuple[BiPoly, BiPoly]:
        return BiPoly.x() - BiPoly.y() ** self.exponent * self.c, BiPoly.y()

    def certify(self, strip: Interval) -> FactorCertificate:
        return _global_certificate(strip, "shear with unit determinant")


def _certify_quasi(
    alpha: UniPoly, scale: UniPoly, strip: Interval
) -> FactorCertificate:
    monotone = not alpha.is_constant and is_non_vanishing(alpha.derivative(), strip)
    nonvanishing = is_non_vanishing(scale, strip)
    reasons = []
    reasons.append(
        f"alpha' = {format_unipoly(alpha.derivative())} "
        + ("has no root" if monotone else "vanishes")
        + f" on {strip}"
    )
    reasons.append(
        f"scale {format_unipoly(scale)} "
        + ("has no root" if nonvanishing else "vanishes")
        + f" on {strip}"
    )
    return FactorCertificate(strip, monotone, nonvanishing, "; ".join(reasons))


@dataclass(frozen=True)
class QuasiTriangularX(AtomicMap):
    """``(alpha(x), b*y + beta(x))`` with ``alpha`` strictly monotone."""

    alpha: UniPoly
    b: Fraction
    beta: UniPoly = field(default_factory=UniPoly.zero)
    certificate: Optional[FactorCertificate] = field(default=None, compare=False)

    kind: ClassVar[str] = "quasi_triangular_x"

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", _nonzero(self.b, "b"))

    def components(self) -> Tuple[BiPoly, BiPoly]:
        return BiPoly.from_x(self.alpha), BiPoly.y() * self.b + self.beta

    @property
    def scale(self) -> UniPoly:
        return UniPoly.constant(self.b)

    def certify(self, strip: Interval) -> FactorCertificate:
        return _certify_quasi(self.alpha, self.scale, strip)


@dataclass(frozen=True)
class ScaledQuasiTriangularX(AtomicMap):
    """``(alpha(x), w(x)*y + beta(x))``, alpha monotone and w nonvanishing."""

    alpha: UniPoly
    w: UniPoly
    beta: UniPoly = field(default_factory=UniPoly.zero)
    certificate: Optional[FactorCertificate] = field(default=None, compare=False)

    kind: ClassVar[str] = "scaled_quasi_triangular_x"

    def components(self) -> Tuple[BiPoly, BiPoly]:
        return BiPoly.from_x(self.alpha), BiPoly.y() * self.w + self.beta

    @property
    def scale(self) -> UniPoly:
        return self.w

    def certify(self, strip: Interval) -> FactorCertificate:
        return _certify_quasi(self.alpha, self.w, strip)


QUASI_KINDS = (QuasiTriangularX, ScaledQuasiTriangularX)


def terminal_factor(alpha: UniPoly, w: UniPoly, beta: UniPoly) -> AtomicMap:
    """Most specific factor for ``(alpha(x), w(x)*y + beta(x))``."""
    if w.is_constant and not w.is_zero:
        b = w.coeff(0)
        if alpha.degree == 1 and alpha.coeff(0) == 0:
            return TriangularX(alpha.coeff(1), b, beta)
        return QuasiTriangularX(alpha, b, beta)
    return ScaledQuasiTriangularX(alpha, w, beta)


@dataclass(frozen=True)
class Chain:
    factors: Tuple[AtomicMap, ...]
    strip: Interval = field(default_factory=Interval.real_line)

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a chain needs at least one factor")

    def __len__(self) -> int:
        return len(self.factors)

    # The innermost factor is the quasi-triangular one even when its alpha is a
    # plain a*x; the outer factors are counted by kind.
    @property
    def triangular_count(self) -> int:
        return sum(1 for f in self.factors[:-1] if f.is_triangular)

    @property
    def quasi_triangular_count(self) -> int:
        return 1 + sum(1 for f in self.factors[:-1] if isinstance(f, QUASI_KINDS))

    def certificates(self) -> Tuple[FactorCertificate, ...]:
        # the innermost factor sees the strip, the others act on the whole plane
        innermost = len(self.factors) - 1
        return tuple(
            f.certify(self.strip if i == innermost else Interval.real_line())
            for i, f in enumerate(self.factors)
        )

    def all_certified(self) -> bool:
        return all(c.valid for c in self.certificates())
