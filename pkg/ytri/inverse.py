"""Inverses of atomic factors and of whole decomposition chains."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from ytri.decompose import DecompositionReport
from ytri.errors import CertificateError, ImageDomainError, RefinementError
from ytri.factors import (
    AtomicMap,
    Chain,
    QuasiTriangularX,
    ScaledQuasiTriangularX,
    ShearX,
    TriangularX,
    TriangularY,
)
from ytri.mapalg import PlanarMap, compose_chain
from ytri.polycore import BiPoly, UniPoly, substitute
from ytri.realroots import Interval
from ytri.settings import DEFAULT_TOLERANCE_BITS

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, Fraction]

VERIFY_SAMPLES = 100


def _affine_inverse(alpha: UniPoly) -> UniPoly:
    a0, a1 = alpha.coeff(0), alpha.coeff(1)
    return UniPoly([-a0 / a1, 1 / a1])


@dataclass(frozen=True)
class MonotoneInverse:
    """Evaluator for ``(alpha(x), w(x)*y + beta(x))`` where alpha is monotone.

    ``alpha^-1`` is found by exact rational bisection until ``|alpha(x) - u|`` drops
    below ``2^-tolerance_bits``; an affine alpha is inverted exactly.
    """

    alpha: UniPoly
    w: UniPoly
    beta: UniPoly
    strip: Interval
    tolerance_bits: int = DEFAULT_TOLERANCE_BITS

    @property
    def increasing(self) -> bool:
        return self.alpha.derivative()(self.strip.sample_points(1)[0]) > 0

    @property
    def image(self) -> Interval:
        """``alpha(strip)`` with exact endpoints where they are finite."""
        ends = [
            None if endpoint is None else self.alpha(endpoint)
            for endpoint in (self.strip.lower, self.strip.upper)
        ]
        lo, hi = ends if self.increasing else ends[::-1]
        return Interval(lo, hi)

    def _bracket(self, u: Fraction) -> Tuple[Fraction, Fraction]:
        lo, hi = self.strip.lower, self.strip.upper
        grow = -1 if self.increasing else 1
        anchor = self.strip.sample_points(1)[0]
        step = Fraction(1)
        while lo is None:
            candidate = anchor - step
            if (self.alpha(candidate) - u) * grow >= 0:
                lo = candidate
            step *= 2
        step = Fraction(1)
        while hi is None:
            candidate = anchor + step
            if (self.alpha(candidate) - u) * grow <= 0:
                hi = candidate
            step *= 2
        return lo, hi

    def alpha_inverse(self, u) -> Fraction:
        u = Fraction(u)
        if u not in self.image:
            raise ImageDomainError(f"u = {u} lies outside alpha(I) = {self.image}")
        if self.alpha.degree == 1:
            return _affine_inverse(self.alpha)(u)
        tolerance = Fraction(1, 2**self.tolerance_bits)
        lo, hi = self._bracket(u)
        for _ in range(4 * self.tolerance_bits + 4096):
            mid = (lo + hi) / 2
            value = self.alpha(mid) - u
            if abs(value) <= tolerance:
                return mid
            if (value < 0) == self.increasing:
                lo = mid
            else:
                hi = mid
        raise RefinementError(f"bisection for alpha^-1({u}) did not converge")

    def __call__(self, u, v) -> Point:
        x = self.alpha_inverse(u)
        return x, (Fraction(v) - self.beta(x)) / self.w(x)


AtomicInverse = Union[AtomicMap, MonotoneInverse]


def invert_atomic(
    factor: AtomicMap,
    strip: Optional[Interval] = None,
    tolerance_bits: int = DEFAULT_TOLERANCE_BITS,
) -> AtomicInverse:
    strip = strip or Interval.real_line()
    certificate = factor.certificate or factor.certify(strip)
    if not certificate.valid:
        raise CertificateError(f"{factor.kind} factor: {certificate.detail}")
    if isinstance(factor, TriangularX):
        shifted = factor.beta.compose(UniPoly([0, 1 / factor.a]))
        return TriangularX(1 / factor.a, 1 / factor.b, shifted * (-1 / factor.b))
    if isinstance(factor, TriangularY):
        shifted = factor.alpha.compose(UniPoly([0, 1 / factor.b]))
        return TriangularY(1 / factor.a, 1 / factor.b, shifted * (-1 / factor.a))
    if isinstance(factor, ShearX):
        return ShearX(-factor.c, factor.exponent)
    if isinstance(factor, QuasiTriangularX):
        if factor.alpha.degree == 1:
            inner = _affine_inverse(factor.alpha)
            return QuasiTriangularX(
                inner, 1 / factor.b, factor.beta.compose(inner) * (-1 / factor.b)
            )
        return MonotoneInverse(
            factor.alpha, factor.scale, factor.beta, strip, tolerance_bits
        )
    if isinstance(factor, ScaledQuasiTriangularX):
        return MonotoneInverse(
            factor.alpha, factor.w, factor.beta, strip, tolerance_bits
        )
    raise TypeError(f"unsupported factor {factor!r}")


@dataclass(frozen=True)
class ExplicitMap:
    inverse: PlanarMap
    domain: str


@dataclass(frozen=True)
class Evaluable:
    """Factor inverses in application order, after the translation is undone."""

    steps: Tuple[AtomicInverse, ...]
    translation: Point
    domain: str

    def __call__(self, u, v) -> Point:
        point = (Fraction(u) - self.translation[0], Fraction(v) - self.translation[1])
        for step in self.steps:
            point = step(*point)
        return point


InverseObject = Union[ExplicitMap, Evaluable]


def invert_chain(
    chain: Chain,
    translation: Point = (Fraction(0), Fraction(0)),
    tolerance_bits: int = DEFAULT_TOLERANCE_BITS,
) -> InverseObject:
    innermost = len(chain) - 1
    # the first factor to undo is the outermost one
    steps = tuple(
        invert_atomic(
            factor,
            chain.strip if index == innermost else Interval.real_line(),
            tolerance_bits,
        )
        for index, factor in enumerate(chain.factors)
    )
    terminal = steps[-1]
    if isinstance(terminal, MonotoneInverse):
        domain = f"alpha(I) x R after the outer factors, alpha(I) = {terminal.image}"
    else:
        domain = f"F({chain.strip} x R)"
    if all(isinstance(step, AtomicMap) for step in steps):
        folded = compose_chain(Chain(tuple(reversed(steps))))
        tu, tv = translation
        u, v = BiPoly.x() - tu, BiPoly.y() - tv
        inverse = PlanarMap(
            substitute(folded.P, u, v), substitute(folded.Q, u, v), Interval.real_line()
        )
        logger.debug("explicit inverse %s", inverse)
        return ExplicitMap(inverse, domain)
    return Evaluable(steps, translation, domain)


def invert_report(
    report: DecompositionReport, tolerance_bits: int = DEFAULT_TOLERANCE_BITS
) -> InverseObject:
    return invert_chain(report.chain, report.translation, tolerance_bits)


@dataclass(frozen=True)
class InverseCheck:
    ok: bool
    exact: bool
    counterexample: Optional[Point] = None
    max_error: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.ok


def _grid(strip: Interval, count: int):
    side = max(int(count**0.5), 1)
    ys = Interval.real_line().sample_points(side)
    for x in strip.sample_points(side):
        for y in ys:
            yield x, y


def verify_inverse(
    F: PlanarMap,
    inverse: InverseObject,
    tolerance_bits: int = DEFAULT_TOLERANCE_BITS,
) -> InverseCheck:
    if isinstance(inverse, ExplicitMap):
        G = inverse.inverse
        left = G.compose_after(F)
        right = F.compose_after(G)
        identity = PlanarMap.identity()
        if left.same_components(identity) and right.same_components(identity):
            return InverseCheck(ok=True, exact=True)
        for x, y in _grid(F.strip, VERIFY_SAMPLES):
            if left.P(x, y) != x or left.Q(x, y) != y:
                return InverseCheck(ok=False, exact=True, counterexample=(x, y))
        for u, v in _grid(Interval.real_line(), VERIFY_SAMPLES):
            if right.P(u, v) != u or right.Q(u, v) != v:
                return InverseCheck(ok=False, exact=True, counterexample=(u, v))
        return InverseCheck(ok=False, exact=True)

    tolerance = Fraction(1, 2 ** (tolerance_bits // 2))
    worst = Fraction(0)
    for x, y in _grid(F.strip, VERIFY_SAMPLES):
        u, v = F.P(x, y), F.Q(x, y)
        try:
            back = inverse(u, v)
        except (ImageDomainError, ZeroDivisionError):
            return InverseCheck(ok=False, exact=False, counterexample=(u, v))
        error = max(abs(F.P(*back) - u), abs(F.Q(*back) - v))
        worst = max(worst, error)
        if error > tolerance:
            return InverseCheck(
                ok=False, exact=False, counterexample=(u, v), max_error=error
            )
    return InverseCheck(ok=True, exact=False, max_error=worst)


def evaluate_inverse(inverse: InverseObject, point) -> Point:
    u, v = Fraction(point[0]), Fraction(point[1])
    if isinstance(inverse, ExplicitMap):
        return inverse.inverse.P(u, v), inverse.inverse.Q(u, v)
    return inverse(u, v)
