"""Decidable real-root analysis for ``UniPoly`` on open intervals.

Everything here is exact: Sturm chains over the rationals, bisection with rational
midpoints, and gcd certificates for shared roots. Unbounded intervals are clipped to
the Cauchy root bound, outside of which no real root lies.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ytri.errors import RefinementError, ZeroPolynomialError
from ytri.polycore import (
    UniPoly,
    poly_gcd,
    square_free_decomposition,
    square_free_part,
)
from ytri.settings import DEFAULT_REFINE_ROUNDS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Interval:
    """Open interval; ``None`` stands for an infinite endpoint."""

    lower: Optional[Fraction] = None
    upper: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.lower is not None:
            object.__setattr__(self, "lower", Fraction(self.lower))
        if self.upper is not None:
            object.__setattr__(self, "upper", Fraction(self.upper))
        if (
            self.lower is not None
            and self.upper is not None
            and not self.lower < self.upper
        ):
            raise ValueError(f"empty interval ({self.lower}, {self.upper})")

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(None, None)

    @property
    def is_real_line(self) -> bool:
        return self.lower is None and self.upper is None

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        if self.lower is not None and not self.lower < x:
            return False
        if self.upper is not None and not x < self.upper:
            return False
        return True

    def contains_interval(self, other: "Interval") -> bool:
        lower_ok = self.lower is None or (
            other.lower is not None and other.lower >= self.lower
        )
        upper_ok = self.upper is None or (
            other.upper is not None and other.upper <= self.upper
        )
        return lower_ok and upper_ok

    def sample_points(self, count: int = 9) -> List[Fraction]:
        """Deterministic rational abscissae strictly inside the interval."""
        lo, hi = self.lower, self.upper
        points: List[Fraction] = []
        if lo is not None and hi is not None:
            gap = (hi - lo) / (count + 1)
            points = [lo + gap * k for k in range(1, count + 1)]
        elif lo is None and hi is None:
            offsets = [Fraction(0)]
            step = 1
            while len(offsets) < count:
                for magnitude in (Fraction(step), Fraction(1, step + 1)):
                    offsets.extend([magnitude, -magnitude])
                step += 1
            points = offsets[:count]
        else:
            anchor = lo if lo is not None else hi
            direction = 1 if lo is not None else -1
            magnitudes = []
            k = 1
            while len(magnitudes) < count:
                magnitudes.extend([Fraction(1, 2**k), Fraction(k)])
                k += 1
            points = [anchor + direction * m for m in magnitudes[:count]]
        seen = []
        for p in points:
            if p not in seen:
                seen.append(p)
        return seen

    def __str__(self) -> str:
        lo = "-inf" if self.lower is None else str(self.lower)
        hi = "inf" if self.upper is None else str(self.upper)
        return f"({lo}, {hi})"


class Sign(str, enum.Enum):
    NEGATIVE = "negative"
    ZERO = "zero"
    POSITIVE = "positive"
    NONPOSITIVE = "nonpositive-certified"

    @classmethod
    def of(cls, value: Fraction) -> "Sign":
        if value > 0:
            return cls.POSITIVE
        if value < 0:
            return cls.NEGATIVE
        return cls.ZERO


@dataclass(frozen=True)
class SturmSequence:
    polynomials: Tuple[UniPoly, ...]

    def variations_at(self, x: Fraction) -> int:
        return _variations([p(x) for p in self.polynomials])

    def variations_at_infinity(self, positive: bool) -> int:
        values = []
        for p in self.polynomials:
            sign = 1 if p.lead > 0 else -1
            if not positive and p.degree % 2 == 1:
                sign = -sign
            values.append(sign)
        return _variations(values)


@dataclass(frozen=True)
class IsolatingInterval:
    lower: Fraction
    upper: Fraction
    multiplicity: int = 1

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def as_interval(self) -> Interval:
        return Interval(self.lower, self.upper)


def _variations(values: Sequence[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _require_nonzero(p: UniPoly) -> None:
    if p.is_zero:
        raise ZeroPolynomialError("zero polynomial has no finite root set")


def sturm_sequence(p: UniPoly) -> SturmSequence:
    _require_nonzero(p)
    chain = [p]
    if not p.is_constant:
        chain.append(p.derivative())
        while True:
            remainder = chain[-2] % chain[-1]
            if remainder.is_zero:
                break
            chain.append(-remainder)
    return SturmSequence(tuple(chain))


def cauchy_bound(p: UniPoly) -> Fraction:
    _require_nonzero(p)
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def _clip(p: UniPoly, interval: Interval) -> Tuple[Fraction, Fraction]:
    bound = cauchy_bound(p)
    lo = -bound if interval.lower is None else max(interval.lower, -bound)
    hi = bound if interval.upper is None else min(interval.upper, bound)
    return lo, hi


def _deflate_endpoints(p: UniPoly, lo: Fraction, hi: Fraction) -> UniPoly:
    # p is square-free, so after dividing out (x - e) it no longer vanishes at e
    for endpoint in (lo, hi):
        if not p.is_constant and p(endpoint) == 0:
            p = p.exact_div(UniPoly([-endpoint, 1]))
    return p


def _count_open(sqf: UniPoly, lo: Fraction, hi: Fraction) -> int:
    """Distinct roots of the square-free ``sqf`` in the open interval (lo, hi)."""
    if not lo < hi:
        return 0
    p = _deflate_endpoints(sqf, lo, hi)
    if p.is_constant:
        return 0
    sturm = sturm_sequence(p)
    return sturm.variations_at(lo) - sturm.variations_at(hi)


def count_roots(p: UniPoly, interval: Interval) -> int:
    """Number of distinct real roots of ``p`` in the open interval."""
    _require_nonzero(p)
    if p.is_constant:
        return 0
    sqf = square_free_part(p)
    lo, hi = _clip(sqf, interval)
    return _count_open(sqf, lo, hi)


def is_non_vanishing(p: UniPoly, interval: Interval) -> bool:
    if p.is_zero:
        return False
    return count_roots(p, interval) == 0


def _split_point(sqf: UniPoly, lo: Fraction, hi: Fraction) -> Fraction:
    for t in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(2, 5)):
        point = lo + (hi - lo) * t
        if sqf(point) != 0:
            return point
    k = 5
    while True:
        point = lo + (hi - lo) / k
        if sqf(point) != 0:
            return point
        k += 1


def _isolate_square_free(
    sqf: UniPoly, lo: Fraction, hi: Fraction
) -> List[Tuple[Fraction, Fraction]]:
    found: List[Tuple[Fraction, Fraction]] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = _count_open(sqf, a, b)
        if n == 0:
            continue
        if n == 1 and sqf(a) != 0 and sqf(b) != 0:
            found.append((a, b))
            continue
        mid = _split_point(sqf, a, b)
        stack.append((mid, b))
        stack.append((a, mid))
    found.sort()
    return found


def isolate_roots(p: UniPoly, interval: Interval) -> List[IsolatingInterval]:
    """Disjoint isolating intervals, one per distinct root, with multiplicities."""
    _require_nonzero(p)
    if p.is_constant:
        return []
    sqf = square_free_part(p)
    lo, hi = _clip(sqf, interval)
    boxes = _isolate_square_free(sqf, lo, hi)
    layers = square_free_decomposition(p)
    result = []
    for a, b in boxes:
        multiplicity = next(
            (
                index
                for index, layer in enumerate(layers, start=1)
                if not layer.is_constant and _count_open(layer, a, b) == 1
            ),
            1,
        )
        result.append(IsolatingInterval(a, b, multiplicity))
    logger.debug("isolated %d roots of degree-%s polynomial", len(result), p.degree)
    return result


def refine(
    p: UniPoly, box: IsolatingInterval, width: Fraction
) -> IsolatingInterval:
    """Bisect ``box`` until it is narrower than ``width``."""
    sqf = square_free_part(p)
    a, b = box.lower, box.upper
    sign_a = sqf(a) > 0
    while b - a >= width:
        mid = (a + b) / 2
        value = sqf(mid)
        if value == 0:
            quarter = (b - a) / 4
            return IsolatingInterval(mid - quarter, mid + quarter, box.multiplicity)
        if (value > 0) == sign_a:
            a = mid
        else:
            b = mid
    return IsolatingInterval(a, b, box.multiplicity)


def has_simple_zero(p: UniPoly, interval: Interval) -> bool:
    return any(box.multiplicity == 1 for box in isolate_roots(p, interval))


def simplest_rational_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Smallest-denominator rational in the open interval (lo, hi)."""
    if not lo < hi:
        raise ValueError("empty interval")
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -simplest_rational_between(-hi, -lo)
    floor_lo = math.floor(lo)
    if floor_lo + 1 < hi:
        return Fraction(floor_lo + 1)
    # lo and hi share the integer part; recurse on the continued-fraction tail
    if lo == floor_lo:
        tail = Fraction(math.floor(1 / (hi - floor_lo)) + 1)
    else:
        tail = simplest_rational_between(1 / (hi - floor_lo), 1 / (lo - floor_lo))
    return floor_lo + 1 / tail


def rational_root_in(p: UniPoly, box: IsolatingInterval) -> Optional[Fraction]:
    """The root inside ``box`` if it is rational and found by a short refinement."""
    current = box
    for _ in range(4):
        candidate = simplest_rational_between(current.lower, current.upper)
        if p(candidate) == 0:
            return candidate
        current = refine(p, current, current.width / 2**16)
    return None


def sign_at_roots(
    target: UniPoly,
    roots_of: UniPoly,
    interval: Interval,
    max_rounds: int = DEFAULT_REFINE_ROUNDS,
) -> List[Tuple[IsolatingInterval, Sign]]:
    """Sign of ``target`` at each root of ``roots_of`` inside the interval."""
    _require_nonzero(roots_of)
    boxes = isolate_roots(roots_of, interval)
    if target.is_zero:
        return [(box, Sign.ZERO) for box in boxes]
    shared = poly_gcd(target, roots_of)
    verdicts = []
    for box in boxes:
        if not shared.is_constant and _count_open(
            square_free_part(shared), box.lower, box.upper
        ):
            verdicts.append((box, Sign.ZERO))
            continue
        current = box
        for _ in range(max_rounds + 1):
            if target(current.lower) != 0 and count_roots(
                target, current.as_interval()
            ) == 0:
                verdicts.append((box, Sign.of(target(current.lower))))
                break
            current = refine(roots_of, current, current.width / 2)
        else:
            if not _nonpositive_on(target, current):
                raise RefinementError(
                    f"sign of {target!r} at the root in ({box.lower}, {box.upper}) "
                    f"undecided after {max_rounds} rounds"
                )
            logger.debug(
                "sign of %r near %s certified nonpositive only", target, current.lower
            )
            verdicts.append((box, Sign.NONPOSITIVE))
    return verdicts


def _nonpositive_on(target: UniPoly, box: IsolatingInterval) -> bool:
    """True when ``target`` cannot change sign on ``box`` and is negative there."""
    odd = UniPoly.constant(1)
    for layer in square_free_decomposition(target)[::2]:
        odd = odd * layer
    if not odd.is_constant and _count_open(odd, box.lower, box.upper):
        return False
    point = _split_point(square_free_part(target), box.lower, box.upper)
    return target(point) < 0
