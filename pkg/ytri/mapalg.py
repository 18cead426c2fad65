"""Planar maps ``F = (P, Q)`` polynomial in y, and their Jacobian analysis."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

from ytri.errors import HypothesisViolated, StripError
from ytri.factors import Chain
from ytri.polycore import BiPoly, UniPoly, format_bipoly, format_unipoly, substitute
from ytri.realroots import (
    Interval,
    IsolatingInterval,
    count_roots,
    isolate_roots,
    is_non_vanishing,
    rational_root_in,
)

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, Fraction]

_SLICE_SAMPLES = 16


def _y_degree(f: BiPoly) -> int:
    # y-free components, the zero polynomial included, have type degree 0
    return max(int(f.y_degree), 0) if not f.is_zero else 0


@dataclass(frozen=True)
class PlanarMap:
    P: BiPoly
    Q: BiPoly
    strip: Interval = field(default_factory=Interval.real_line)

    @classmethod
    def identity(cls, strip: Optional[Interval] = None) -> "PlanarMap":
        return cls(BiPoly.x(), BiPoly.y(), strip or Interval.real_line())

    @property
    def map_type(self) -> Tuple[int, int]:
        return _y_degree(self.P), _y_degree(self.Q)

    def translated(self) -> Tuple["PlanarMap", Point]:
        """``F - F(0,0)`` together with the translation ``F(0,0)``."""
        shift = (self.P(0, 0), self.Q(0, 0))
        return PlanarMap(self.P - shift[0], self.Q - shift[1], self.strip), shift

    def compose_after(self, inner: "PlanarMap") -> "PlanarMap":
        """``self o inner`` on the strip of ``inner``."""
        return PlanarMap(
            substitute(self.P, inner.P, inner.Q),
            substitute(self.Q, inner.P, inner.Q),
            inner.strip,
        )

    def same_components(self, other: "PlanarMap") -> bool:
        return self.P == other.P and self.Q == other.Q

    def __str__(self) -> str:
        text = f"{format_bipoly(self.P)} ; {format_bipoly(self.Q)}"
        if not self.strip.is_real_line:
            text += f" on {self.strip}"
        return text


@dataclass(frozen=True)
class SingularWitness:
    """A point of the strip where the Jacobian determinant vanishes.

    ``x``/``y`` are exact when rational, otherwise the isolating boxes certify the
    location. ``y`` and ``y_box`` both unset means every y works.
    """

    x: Optional[Fraction] = None
    x_box: Optional[IsolatingInterval] = None
    y: Optional[Fraction] = None
    y_box: Optional[IsolatingInterval] = None

    @property
    def any_y(self) -> bool:
        return self.y is None and self.y_box is None


@dataclass(frozen=True)
class NonSingular:
    certificate: str


@dataclass(frozen=True)
class Singular:
    witness: SingularWitness


@dataclass(frozen=True)
class Unknown:
    reason: str


NonSingularity = Union[NonSingular, Singular, Unknown]


@dataclass(frozen=True)
class Classification:
    map_type: Tuple[int, int]
    dF: BiPoly
    is_delta_map: bool
    delta: Optional[UniPoly]
    is_jacobian_map: bool
    non_singularity: NonSingularity

    @property
    def is_non_singular(self) -> bool:
        return isinstance(self.non_singularity, NonSingular)

    @property
    def is_singular(self) -> bool:
        return isinstance(self.non_singularity, Singular)


@dataclass(frozen=True)
class LeadingPairData:
    d1m: UniPoly
    d1m_star: UniPoly
    m: int


def map_type(F: PlanarMap) -> Tuple[int, int]:
    return F.map_type


def jacobian_det(F: PlanarMap) -> BiPoly:
    """``P_x Q_y - P_y Q_x``."""
    return F.P.derivative("x") * F.Q.derivative("y") - F.P.derivative(
        "y"
    ) * F.Q.derivative("x")


def _witness_on_x(delta: UniPoly, strip: Interval) -> SingularWitness:
    if delta.is_zero:
        return SingularWitness(x=strip.sample_points(1)[0])
    box = isolate_roots(delta, strip)[0]
    exact = rational_root_in(delta, box)
    if exact is not None:
        return SingularWitness(x=exact)
    return SingularWitness(x_box=box)


def _slice_witness(dF: BiPoly, strip: Interval) -> Optional[SingularWitness]:
    lead = dF.coeff(int(dF.y_degree))
    odd = int(dF.y_degree) % 2 == 1
    samples = strip.sample_points(max(_SLICE_SAMPLES, int(lead.degree) + 2))
    for x0 in samples:
        section = dF.at_x(x0)
        if section.is_zero:
            return SingularWitness(x=x0)
        if odd and lead(x0) == 0:
            continue
        if count_roots(section, Interval.real_line()) == 0:
            continue
        box = isolate_roots(section, Interval.real_line())[0]
        exact = rational_root_in(section, box)
        if exact is not None:
            return SingularWitness(x=x0, y=exact)
        return SingularWitness(x=x0, y_box=box)
    return None


def classify(F: PlanarMap) -> Classification:
    dF = jacobian_det(F)
    is_delta = not dF.depends_on_y
    delta = dF.coeff(0) if is_delta else None
    is_jacobian = is_delta and delta.is_constant and not delta.is_zero

    status: NonSingularity
    if is_delta:
        if is_non_vanishing(delta, F.strip):
            status = NonSingular(
                f"delta = {format_unipoly(delta)} has no root on {F.strip}"
            )
        else:
            status = Singular(_witness_on_x(delta, F.strip))
    else:
        witness = _slice_witness(dF, F.strip)
        if witness is not None:
            status = Singular(witness)
        elif int(dF.y_degree) % 2 == 1:
            # unreachable: an odd-degree section always has a real root
            status = Unknown("no section with nonzero leading coefficient found")
        else:
            status = Unknown(
                f"dF has even y-degree {int(dF.y_degree)} and no sampled section "
                "has a real root"
            )
    logger.debug("classified %s: %s", F, type(status).__name__)
    return Classification(F.map_type, dF, is_delta, delta, is_jacobian, status)


def leading_pair_data(F: PlanarMap) -> LeadingPairData:
    m = max(F.map_type)
    if m < 1:
        raise HypothesisViolated("no leading pair: both components are y-free")
    p1, q1 = F.P.coeff(1), F.Q.coeff(1)
    pm, qm = F.P.coeff(m), F.Q.coeff(m)
    d1m = p1 * qm - q1 * pm
    d1m_star = p1.derivative() * qm - q1.derivative() * pm
    return LeadingPairData(d1m, d1m_star, m)


def compose_chain(chain: Chain) -> PlanarMap:
    P, Q = BiPoly.x(), BiPoly.y()
    for factor in reversed(chain.factors):
        fp, fq = factor.components()
        P, Q = substitute(fp, P, Q), substitute(fq, P, Q)
    return PlanarMap(P, Q, chain.strip)


def eval_map(F: PlanarMap, point: Tuple) -> Point:
    x, y = Fraction(point[0]), Fraction(point[1])
    if x not in F.strip:
        raise StripError(f"x = {x} lies outside the strip {F.strip}")
    return F.P(x, y), F.Q(x, y)
