"""Factorisation of non-singular delta-maps into triangular and quasi-triangular maps.

Each decomposer strips the leading y-coefficient of one component with a shear
whose constant comes from an exact proportionality identity, then recurses on the
lower-degree remainder until a map of type (1,1) is left. That last map splits into
one more shear and the quasi-triangular terminal factor. Constants are never
trusted: every identity is checked exactly and the chain is recomposed and compared
with the input before a report is returned.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from ytri.errors import (
    CertificateError,
    HypothesisViolated,
    NotDecomposable,
    ProportionalityError,
    SingularInput,
    YtriError,
)
from ytri.factors import (
    AtomicMap,
    Chain,
    QuasiTriangularX,
    ShearX,
    TriangularX,
    terminal_factor,
)
from ytri.mapalg import PlanarMap, classify, compose_chain
from ytri.polycore import BiPoly, UniPoly, format_bipoly, format_unipoly
from ytri.realroots import Interval, is_non_vanishing

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, Fraction]


class Theorem(str, enum.Enum):
    T1_TYPE11 = "T1_type11"
    T4_DELTA_M1 = "T4_deltaM1"
    C1_DELTA_MM = "C1_deltaMM"
    T5_DELTA_LMM = "T5_deltaLMM"


@dataclass(frozen=True)
class ProportionalityResult:
    constant: Optional[Fraction]
    differential_relation: bool
    lemma_point: str


def proportionality(
    p: UniPoly, q: UniPoly, h: int, k: int, strip: Optional[Interval] = None
) -> ProportionalityResult:
    """Constant ``c`` with ``p^h = c * q^k`` when the identity holds exactly."""
    if h < 1 or k < 1:
        raise ValueError("exponents must be positive integers")
    strip = strip or Interval.real_line()
    if q.is_zero:
        if not p.is_zero:
            raise ProportionalityError("no constant exists: q vanishes identically")
        return ProportionalityResult(Fraction(0), True, "i")
    relation = (p.derivative() * q * h - q.derivative() * p * k).is_zero
    lemma_point = "i" if is_non_vanishing(q, strip) else "ii"
    if p.is_zero:
        return ProportionalityResult(Fraction(0), relation, lemma_point)
    lhs, rhs = p**h, q**k
    constant = None
    if lhs.degree == rhs.degree:
        candidate = lhs.lead / rhs.lead
        if lhs == rhs * candidate:
            constant = candidate
    return ProportionalityResult(constant, relation, lemma_point)


def proportionality_power(
    p: UniPoly, q: UniPoly, l: int, strip: Optional[Interval] = None
) -> ProportionalityResult:
    """Constant ``c_l`` with ``p = c_l * q^l``."""
    return proportionality(p, q, 1, l, strip)


@dataclass(frozen=True)
class DecompositionReport:
    chain: Chain
    theorem: Theorem
    triangular_count: int
    quasi_triangular_count: int
    verified: bool
    translation: Point = (Fraction(0), Fraction(0))
    stages: Tuple[str, ...] = field(default=(), compare=False)

    def recompose(self) -> PlanarMap:
        composed = compose_chain(self.chain)
        tu, tv = self.translation
        return PlanarMap(composed.P + tu, composed.Q + tv, composed.strip)


def _y_deg(f: BiPoly) -> int:
    return max(int(f.y_degree), 0) if not f.is_zero else 0


class _ChainBuilder:
    """Accumulates factors outermost first while the map is being reduced."""

    def __init__(self, strip: Interval) -> None:
        self.strip = strip
        self.factors: List[AtomicMap] = []
        self.stages: List[str] = []

    def _note(self, text: str) -> None:
        logger.debug(text)
        self.stages.append(text)

    def _constant(
        self, p: UniPoly, q: UniPoly, power: int, stage: str, what: str
    ) -> Fraction:
        try:
            result = proportionality_power(p, q, power, self.strip)
        except ProportionalityError as exc:
            raise HypothesisViolated(exc.message, stage=stage) from exc
        if result.constant is None:
            raise HypothesisViolated(
                f"{what} is not a constant multiple "
                f"({format_unipoly(p)} vs ({format_unipoly(q)})^{power})",
                stage=stage,
            )
        return result.constant

    def shear(self, c: Fraction, exponent: int) -> None:
        # the chain holds the inverse (u + c v^L, v) of the eliminating shear
        if c:
            self.factors.append(ShearX(-c, exponent))

    def eliminate_first(self, P: BiPoly, Q: BiPoly) -> BiPoly:
        """Reduce ``P`` to y-degree <= 1 against ``Q = q1*y + q0``."""
        q1 = Q.coeff(1)
        for j in range(_y_deg(P), 1, -1):
            pj = P.coeff(j)
            if pj.is_zero:
                continue
            c = self._constant(pj, q1, j, f"stage {j}", f"p_{j} against q_1^{j}")
            self._note(f"stage {j}: p_{j} = {c} * q_1^{j}")
            self.shear(c, j)
            P = P - Q**j * c
        return P

    def eliminate_second(self, P: BiPoly, Q: BiPoly) -> BiPoly:
        """Reduce ``Q`` to y-degree <= 1 against ``P = p1*y + p0``."""
        p1 = P.coeff(1)
        for j in range(_y_deg(Q), 1, -1):
            qj = Q.coeff(j)
            if qj.is_zero:
                continue
            e = self._constant(qj, p1, j, f"stage {j}", f"q_{j} against p_1^{j}")
            self._note(f"stage {j}: q_{j} = {e} * p_1^{j}")
            if e:
                self.factors.append(TriangularX(1, 1, UniPoly.monomial(e, j)))
            Q = Q - P**j * e
        return Q

    def finish_linear(self, P: BiPoly, Q: BiPoly) -> None:
        """Split a map of type at most (1,1) into a shear and the terminal factor."""
        p1, p0 = P.coeff(1), P.coeff(0)
        q1, q0 = Q.coeff(1), Q.coeff(0)
        if p1.is_zero:
            if q1.is_zero:
                raise SingularInput("both components are y-free, dF vanishes")
            self._terminal(p0, q1, q0)
        elif q1.is_zero:
            # (p1 y + p0, q0) is the rotation (v, -u) after (-q0, p1 y + p0)
            self._note("rotation: second component is y-free")
            self.factors.extend(
                [ShearX(-1, 1), TriangularX(1, 1, UniPoly([0, -1])), ShearX(-1, 1)]
            )
            self._terminal(-q0, p1, p0)
        else:
            try:
                result = proportionality(p1, q1, 1, 1, self.strip)
            except ProportionalityError as exc:
                raise HypothesisViolated(exc.message, stage="type (1,1)") from exc
            if result.constant is None:
                raise HypothesisViolated(
                    "hypothesis violated: p1'q1 - p1q1' is not identically zero",
                    stage="type (1,1)",
                )
            c = result.constant
            self._note(f"type (1,1): p_1 = {c} * q_1")
            self.shear(c, 1)
            self._terminal(p0 - q0 * c, q1, q0)

    def _terminal(self, alpha: UniPoly, w: UniPoly, beta: UniPoly) -> None:
        factor = terminal_factor(alpha, w, beta)
        try:
            factor = factor.certified(self.strip)
        except CertificateError as exc:
            raise SingularInput(f"singular input: {exc.message}") from exc
        self._note(
            f"terminal {factor.kind}: alpha = {format_unipoly(alpha)}, "
            f"scale = {format_unipoly(w)}"
        )
        self.factors.append(factor)

    def chain(self) -> Chain:
        return Chain(tuple(self.factors), self.strip)


Build = Callable[[_ChainBuilder, BiPoly, BiPoly], None]


def _run(F: PlanarMap, build: Build) -> _ChainBuilder:
    builder = _ChainBuilder(F.strip)
    build(builder, F.P, F.Q)
    return builder


def _decompose(F: PlanarMap, theorem: Theorem, build: Build) -> DecompositionReport:
    builder = _run(F, build)
    chain = builder.chain()
    stages = list(builder.stages)
    translation: Point = (Fraction(0), Fraction(0))
    terminal = chain.factors[-1]
    origin = (F.P(0, 0), F.Q(0, 0))
    if (
        isinstance(terminal, QuasiTriangularX)
        and terminal.alpha.degree == 1
        and origin != (0, 0)
    ):
        shifted, shift = F.translated()
        try:
            shifted_builder = _run(shifted, build)
        except YtriError:
            shifted_builder = None
        if shifted_builder is not None and all(
            f.is_triangular for f in shifted_builder.factors
        ):
            chain = shifted_builder.chain()
            translation = shift
            stages = shifted_builder.stages + [f"translation by F(0,0) = {shift}"]
    report = DecompositionReport(
        chain=chain,
        theorem=theorem,
        triangular_count=chain.triangular_count,
        quasi_triangular_count=chain.quasi_triangular_count,
        verified=False,
        translation=translation,
        stages=tuple(stages),
    )
    verified = report.recompose().same_components(F) and chain.all_certified()
    logger.info(
        "%s: %d triangular + %d quasi-triangular factors, verified=%s",
        theorem.value,
        report.triangular_count,
        report.quasi_triangular_count,
        verified,
    )
    return DecompositionReport(
        chain=chain,
        theorem=theorem,
        triangular_count=report.triangular_count,
        quasi_triangular_count=report.quasi_triangular_count,
        verified=verified,
        translation=translation,
        stages=report.stages,
    )


def _build_type11(builder: _ChainBuilder, P: BiPoly, Q: BiPoly) -> None:
    builder.finish_linear(P, Q)


def _build_delta_m1(builder: _ChainBuilder, P: BiPoly, Q: BiPoly) -> None:
    m, n = _y_deg(P), _y_deg(Q)
    if n == 1:
        builder.finish_linear(builder.eliminate_first(P, Q), Q)
    elif n == 0 and m <= 1:
        builder.finish_linear(P, Q)
    elif m == 1:
        builder.finish_linear(P, builder.eliminate_second(P, Q))
    else:
        raise HypothesisViolated(
            f"type ({m},{n}) is neither (m,1) nor (1,m) with a degree-1 partner"
        )


def _corollary_shape_reason(P: BiPoly, Q: BiPoly) -> Optional[str]:
    m = max(_y_deg(P), _y_deg(Q))
    allowed = {0, 1, m}
    stray = sorted((set(P.exponents()) | set(Q.exponents())) - allowed)
    if stray:
        return f"not Corollary-1 shape: y-powers {stray} besides 0, 1, {m}"
    return None


def _build_delta_mm(builder: _ChainBuilder, P: BiPoly, Q: BiPoly) -> None:
    m = max(_y_deg(P), _y_deg(Q))
    if m <= 1:
        builder.finish_linear(P, Q)
        return
    reason = _corollary_shape_reason(P, Q)
    if reason:
        raise HypothesisViolated(reason)
    pm, qm = P.coeff(m), Q.coeff(m)
    if pm.is_zero or qm.is_zero:
        _build_delta_m1(builder, P, Q)
        return
    try:
        result = proportionality(pm, qm, 1, 1, builder.strip)
    except ProportionalityError as exc:
        raise HypothesisViolated(exc.message, stage="leading pair") from exc
    if result.constant is None:
        raise HypothesisViolated(
            f"p_{m} is not a constant multiple of q_{m}", stage="leading pair"
        )
    c = result.constant
    builder._note(f"leading pair: p_{m} = {c} * q_{m}")
    builder.shear(c, 1)
    P = P - Q * c
    builder.finish_linear(P, builder.eliminate_second(P, Q))


def _theorem5_shape(P: BiPoly, Q: BiPoly) -> Tuple[Optional[str], int, int]:
    m = _y_deg(Q)
    if m < 2 or set(Q.exponents()) - {0, m}:
        return "second component is not q_m y^m + q_0 with m >= 2", 0, 0
    top = _y_deg(P)
    if top < m or top % m:
        return f"first component degree {top} is not a positive multiple of {m}", 0, 0
    stray = [j for j in P.exponents() if j > 1 and j % m]
    if stray:
        reason = f"first component has y-powers {stray} that are not multiples of {m}"
        return reason, 0, 0
    return None, top // m, m


def _build_delta_lmm(builder: _ChainBuilder, P: BiPoly, Q: BiPoly) -> None:
    reason, L, m = _theorem5_shape(P, Q)
    if reason:
        raise HypothesisViolated(f"not Theorem-5 shape: {reason}")
    qm = Q.coeff(m)
    for l in range(L, 1, -1):
        plm = P.coeff(l * m)
        if plm.is_zero:
            continue
        c = builder._constant(
            plm, qm, l, f"stage l={l}", f"p_{l * m} against q_{m}^{l}"
        )
        builder._note(f"stage l={l}: p_{l * m} = {c} * q_{m}^{l}")
        builder.shear(c, l)
        P = P - Q**l * c
    _build_delta_mm(builder, P, Q)


def decompose_type11(F: PlanarMap) -> DecompositionReport:
    if F.map_type not in {(1, 1), (0, 1), (1, 0)}:
        raise HypothesisViolated(f"type {F.map_type} is not (1,1)")
    return _decompose(F, Theorem.T1_TYPE11, _build_type11)


def decompose_delta_m1(F: PlanarMap) -> DecompositionReport:
    return _decompose(F, Theorem.T4_DELTA_M1, _build_delta_m1)


def decompose_delta_mm(F: PlanarMap) -> DecompositionReport:
    return _decompose(F, Theorem.C1_DELTA_MM, _build_delta_mm)


def decompose_delta_lmm(F: PlanarMap) -> DecompositionReport:
    return _decompose(F, Theorem.T5_DELTA_LMM, _build_delta_lmm)


def _shape_reason(theorem: Theorem, F: PlanarMap) -> Optional[str]:
    m, n = F.map_type
    if theorem is Theorem.T1_TYPE11:
        return None if (m, n) == (1, 1) else f"type ({m},{n}) is not (1,1)"
    if theorem is Theorem.T4_DELTA_M1:
        return None if min(m, n) <= 1 else f"type ({m},{n}) has no degree-1 component"
    if theorem is Theorem.C1_DELTA_MM:
        if max(m, n) < 2:
            return "y-degree below 2"
        return _corollary_shape_reason(F.P, F.Q)
    reason, _, _ = _theorem5_shape(F.P, F.Q)
    return reason


_DECOMPOSERS = (
    (Theorem.T1_TYPE11, decompose_type11),
    (Theorem.T4_DELTA_M1, decompose_delta_m1),
    (Theorem.C1_DELTA_MM, decompose_delta_mm),
    (Theorem.T5_DELTA_LMM, decompose_delta_lmm),
)


def decompose_dispatch(F: PlanarMap) -> DecompositionReport:
    classification = classify(F)
    if not classification.is_delta_map:
        reason = f"not a delta-map: dF = {format_bipoly(classification.dF)}"
        raise NotDecomposable({theorem.value: reason for theorem, _ in _DECOMPOSERS})
    if classification.is_singular:
        delta = format_unipoly(classification.delta)
        reason = f"singular on {F.strip}: delta = {delta}"
        raise NotDecomposable({theorem.value: reason for theorem, _ in _DECOMPOSERS})
    diagnosis = {}
    for theorem, decomposer in _DECOMPOSERS:
        reason = _shape_reason(theorem, F)
        if reason:
            diagnosis[theorem.value] = reason
            continue
        try:
            report = decomposer(F)
        except YtriError as exc:
            diagnosis[theorem.value] = exc.message
            continue
        if report.verified:
            return report
        diagnosis[theorem.value] = "recomposition did not reproduce the input"
    raise NotDecomposable(diagnosis)
