"""Sound injectivity checks for planar maps polynomial in y.

A certificate is only ever issued by a criterion whose hypotheses were decided
exactly. The collision search at the end is an oracle: it can refute injectivity
but never prove it.
"""

from __future__ import annotations

import enum
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ytri.decompose import decompose_dispatch
from ytri.errors import (
    InternalContradiction,
    RefinementError,
    YtriError,
)
from ytri.mapalg import Classification, PlanarMap, classify, leading_pair_data
from ytri.polycore import BiPoly, UniPoly, format_unipoly
from ytri.realroots import (
    Interval,
    Sign,
    has_simple_zero,
    is_non_vanishing,
    sign_at_roots,
)
from ytri.settings import (
    DEFAULT_FALSIFY_BUDGET,
    DEFAULT_FALSIFY_SEED,
    DEFAULT_REFINE_ROUNDS,
)

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, Fraction]

FALSIFY_WINDOW = 16
FALSIFY_DENOMINATOR = 64
CLAIM_NOTE = "assuming non-singularity"


class Criterion(str, enum.Enum):
    L3I = "L3i"
    L3II = "L3ii"
    L3III = "L3iii"
    T2I = "T2i"
    T2II = "T2ii"
    T2III = "T2iii"
    T2IV = "T2iv"
    T3 = "T3"
    DECOMPOSITION_CHAIN = "DecompositionChain"
    FIBER_COLLAPSE = "FiberCollapse"
    FALSIFIER = "Falsifier"
    NONSINGULARITY_CLAIM = "NonSingularityClaim"


class Outcome(str, enum.Enum):
    CERTIFIED = "certified"
    FAILED = "failed"
    SKIPPED = "skipped"
    CONTRADICTION = "contradiction"
    WITNESS = "witness"
    NO_WITNESS = "no_witness"


@dataclass(frozen=True)
class CriterionOutcome:
    tag: Criterion
    outcome: Outcome
    detail: str


@dataclass(frozen=True)
class InjectiveCertified:
    criterion: Criterion


@dataclass(frozen=True)
class NotInjective:
    first: Point
    second: Point


@dataclass(frozen=True)
class Inconclusive:
    reasons: Dict[str, str] = field(default_factory=dict)


VerdictStatus = Union[InjectiveCertified, NotInjective, Inconclusive]


@dataclass(frozen=True)
class InjectivityVerdict:
    status: VerdictStatus
    criteria: Tuple[CriterionOutcome, ...]

    @property
    def certified(self) -> bool:
        return isinstance(self.status, InjectiveCertified)


def _certifying(outcomes: Sequence[CriterionOutcome]) -> Optional[CriterionOutcome]:
    return next((o for o in outcomes if o.outcome is Outcome.CERTIFIED), None)


def _nonsingular_detail(
    classification: Classification, assume_nonsingular: bool
) -> Optional[str]:
    """None when non-singularity is certified or claimed, else the reason it is not."""
    if classification.is_non_singular:
        return None
    if classification.is_singular:
        return "the map is singular, so non-singularity cannot be claimed"
    if assume_nonsingular:
        return None
    return (
        "non-singularity is neither certified nor claimed "
        f"({type(classification.non_singularity).__name__})"
    )


def _on_claim(
    outcomes: List[CriterionOutcome],
    classification: Classification,
    assume_nonsingular: bool,
) -> List[CriterionOutcome]:
    """Mark certificates that rest on the caller's non-singularity claim."""
    if classification.is_non_singular or not assume_nonsingular:
        return outcomes
    return [
        CriterionOutcome(o.tag, o.outcome, f"{o.detail}, {CLAIM_NOTE}")
        if o.outcome is Outcome.CERTIFIED
        else o
        for o in outcomes
    ]


def _describe_singularity(classification: Classification) -> str:
    witness = classification.non_singularity.witness
    if witness.x is not None:
        where = f"x = {witness.x}"
    else:
        where = f"some x in ({witness.x_box.lower}, {witness.x_box.upper})"
    if witness.y is not None:
        where += f", y = {witness.y}"
    elif witness.y_box is not None:
        where += f", some y in ({witness.y_box.lower}, {witness.y_box.upper})"
    return f"claim refuted: dF vanishes at {where}"


def check_lemma3(
    F: PlanarMap,
    classification: Optional[Classification] = None,
    assume_nonsingular: bool = False,
) -> List[CriterionOutcome]:
    classification = classification or classify(F)
    m, n = F.map_type
    if m > 1:
        reason = f"first component has y-degree {m} > 1"
        return [
            CriterionOutcome(tag, Outcome.SKIPPED, reason)
            for tag in (Criterion.L3I, Criterion.L3II, Criterion.L3III)
        ]
    missing = _nonsingular_detail(classification, assume_nonsingular)
    outcomes = []
    p1 = F.P.coeff(1)

    if (m, n) != (0, 1):
        outcomes.append(
            CriterionOutcome(
                Criterion.L3I, Outcome.SKIPPED, f"type ({m},{n}) is not (0,1)"
            )
        )
    elif missing:
        outcomes.append(CriterionOutcome(Criterion.L3I, Outcome.SKIPPED, missing))
    else:
        outcomes.append(
            CriterionOutcome(
                Criterion.L3I, Outcome.CERTIFIED, "type (0,1) and non-singular"
            )
        )

    if missing:
        outcomes.append(CriterionOutcome(Criterion.L3II, Outcome.SKIPPED, missing))
    elif is_non_vanishing(p1, F.strip):
        outcomes.append(
            CriterionOutcome(
                Criterion.L3II,
                Outcome.CERTIFIED,
                f"p1 = {format_unipoly(p1)} has no root on {F.strip}",
            )
        )
    else:
        outcomes.append(
            CriterionOutcome(
                Criterion.L3II,
                Outcome.FAILED,
                f"p1 = {format_unipoly(p1)} vanishes on {F.strip}",
            )
        )

    if p1.is_zero:
        outcomes.append(
            CriterionOutcome(
                Criterion.L3III, Outcome.SKIPPED, "p1 vanishes identically"
            )
        )
    elif missing:
        outcomes.append(CriterionOutcome(Criterion.L3III, Outcome.SKIPPED, missing))
    elif has_simple_zero(p1, F.strip):
        outcomes.append(
            CriterionOutcome(
                Criterion.L3III,
                Outcome.CONTRADICTION,
                f"input cannot be non-singular: p1 = {format_unipoly(p1)} "
                f"has a simple zero on {F.strip}",
            )
        )
    else:
        outcomes.append(
            CriterionOutcome(Criterion.L3III, Outcome.FAILED, "p1 has no simple zero")
        )
    return _on_claim(outcomes, classification, assume_nonsingular)


def _leading_shape(F: PlanarMap) -> Optional[str]:
    m = max(F.map_type)
    if m < 2:
        return f"y-degree {m} is not above 1"
    stray = sorted((set(F.P.exponents()) | set(F.Q.exponents())) - {0, 1, m})
    if stray:
        return f"y-powers {stray} outside {{0, 1, {m}}}"
    return None


def _all_roots(
    target: UniPoly,
    roots_of: UniPoly,
    strip: Interval,
    accept: Sequence[Sign],
    max_rounds: int,
) -> bool:
    return all(
        sign in accept
        for _, sign in sign_at_roots(target, roots_of, strip, max_rounds=max_rounds)
    )


_T2_TAGS = (Criterion.T2I, Criterion.T2II, Criterion.T2III, Criterion.T2IV)


def _theorem2_conditions(F: PlanarMap, max_rounds: int) -> List[CriterionOutcome]:
    tags = _T2_TAGS
    data = leading_pair_data(F)
    d1m, d1m_star, m = data.d1m, data.d1m_star, data.m
    strip = F.strip
    if d1m.is_zero:
        return [
            CriterionOutcome(tag, Outcome.FAILED, "d1m vanishes identically")
            for tag in tags
        ]

    outcomes: List[CriterionOutcome] = []
    nonzero = (Sign.NEGATIVE, Sign.POSITIVE)
    at_most_zero = (Sign.NEGATIVE, Sign.ZERO, Sign.NONPOSITIVE)
    current = Criterion.T2I
    try:
        if is_non_vanishing(d1m, strip):
            outcomes.append(
                CriterionOutcome(
                    Criterion.T2I,
                    Outcome.CERTIFIED,
                    f"d1m = {format_unipoly(d1m)} has no root on {strip}",
                )
            )
            return outcomes
        outcomes.append(
            CriterionOutcome(
                Criterion.T2I,
                Outcome.FAILED,
                f"d1m = {format_unipoly(d1m)} vanishes on {strip}",
            )
        )

        current = Criterion.T2II
        if d1m_star.is_zero:
            outcomes.append(
                CriterionOutcome(
                    Criterion.T2II, Outcome.FAILED, "d1m* vanishes identically"
                )
            )
        elif _all_roots(d1m_star, d1m, strip, nonzero, max_rounds):
            outcomes.append(
                CriterionOutcome(
                    Criterion.T2II,
                    Outcome.CERTIFIED,
                    f"d1m* = {format_unipoly(d1m_star)} is nonzero"
                    " at every root of d1m",
                )
            )
            return outcomes
        else:
            outcomes.append(
                CriterionOutcome(
                    Criterion.T2II, Outcome.FAILED, "d1m* vanishes at a root of d1m"
                )
            )

        pm, qm = F.P.coeff(m), F.Q.coeff(m)
        p1, q1 = F.P.coeff(1), F.Q.coeff(1)
        if m % 2 == 0:
            outcomes.append(
                CriterionOutcome(Criterion.T2IV, Outcome.SKIPPED, f"m = {m} is even")
            )
            current = Criterion.T2III
            for side, lead in (("q", qm), ("p", pm)):
                if _all_roots(lead, d1m, strip, nonzero, max_rounds):
                    outcomes.insert(
                        -1,
                        CriterionOutcome(
                            Criterion.T2III,
                            Outcome.CERTIFIED,
                            f"{side}_{m} is nonzero at every root of d1m",
                        ),
                    )
                    return outcomes
            outcomes.insert(
                -1,
                CriterionOutcome(
                    Criterion.T2III,
                    Outcome.FAILED,
                    f"both p_{m} and q_{m} vanish at some root of d1m",
                ),
            )
        else:
            outcomes.append(
                CriterionOutcome(Criterion.T2III, Outcome.SKIPPED, f"m = {m} is odd")
            )
            current = Criterion.T2IV
            for side, lead, linear in (("q", qm, q1), ("p", pm, p1)):
                if not _all_roots(lead, d1m, strip, nonzero, max_rounds):
                    continue
                signs = [
                    sign
                    for _, sign in sign_at_roots(
                        linear, d1m, strip, max_rounds=max_rounds
                    )
                ]
                if all(sign in at_most_zero for sign in signs):
                    detail = f"{side}_{m} != 0 and {side}_1 <= 0 at every root of d1m"
                    if Sign.NONPOSITIVE in signs:
                        detail += f" ({side}_1 certified nonpositive only)"
                    outcomes.append(
                        CriterionOutcome(Criterion.T2IV, Outcome.CERTIFIED, detail)
                    )
                    return outcomes
            outcomes.append(
                CriterionOutcome(
                    Criterion.T2IV,
                    Outcome.FAILED,
                    "neither the q-side nor the p-side sign condition holds",
                )
            )
    except RefinementError as exc:
        failure = CriterionOutcome(
            current, Outcome.FAILED, f"sign refinement exhausted: {exc.message}"
        )
        if current is Criterion.T2III:
            outcomes.insert(-1, failure)
        else:
            outcomes.append(failure)
    return outcomes


def _withhold(
    outcomes: List[CriterionOutcome], missing: Optional[str]
) -> List[CriterionOutcome]:
    """Turn certificates into skips when non-singularity is not available."""
    if missing is None:
        return outcomes
    return [
        CriterionOutcome(o.tag, Outcome.SKIPPED, f"{o.detail}, but {missing}")
        if o.outcome is Outcome.CERTIFIED
        else o
        for o in outcomes
    ]


def check_theorem2(
    F: PlanarMap,
    classification: Optional[Classification] = None,
    assume_nonsingular: bool = False,
    max_rounds: int = DEFAULT_REFINE_ROUNDS,
) -> List[CriterionOutcome]:
    shape = _leading_shape(F)
    if shape:
        return [CriterionOutcome(tag, Outcome.SKIPPED, shape) for tag in _T2_TAGS]
    classification = classification or classify(F)
    missing = _nonsingular_detail(classification, assume_nonsingular)
    outcomes = _withhold(_theorem2_conditions(F, max_rounds), missing)
    return _on_claim(outcomes, classification, assume_nonsingular)


def _theorem3_shape(F: PlanarMap) -> Tuple[Optional[str], int, int]:
    two_h = int(F.Q.y_degree) if not F.Q.is_zero else 0
    if two_h < 2 or two_h % 2 or set(F.Q.exponents()) - {0, two_h}:
        return "second component is not q_2h y^2h + q_0", 0, 0
    top = F.map_type[0]
    if top < two_h:
        return f"first component has y-degree {top} below {two_h}", 0, 0
    stray = [j for j in F.P.exponents() if j > 1 and j % two_h]
    if stray:
        return f"first component has y-powers {stray} off multiples of {two_h}", 0, 0
    return None, two_h // 2, top // two_h


def check_theorem_l2h(
    F: PlanarMap,
    classification: Optional[Classification] = None,
    assume_nonsingular: bool = False,
) -> List[CriterionOutcome]:
    reason, h, L = _theorem3_shape(F)
    if reason:
        return [CriterionOutcome(Criterion.T3, Outcome.SKIPPED, reason)]
    classification = classification or classify(F)
    missing = _nonsingular_detail(classification, assume_nonsingular)
    if missing:
        return [CriterionOutcome(Criterion.T3, Outcome.SKIPPED, missing)]
    p1 = F.P.coeff(1)
    if is_non_vanishing(p1, F.strip):
        certified = CriterionOutcome(
            Criterion.T3,
            Outcome.CERTIFIED,
            f"h = {h}, L = {L}, p1 = {format_unipoly(p1)} has no root on {F.strip}",
        )
        return _on_claim([certified], classification, assume_nonsingular)
    return [
        CriterionOutcome(
            Criterion.T3,
            Outcome.FAILED,
            f"h = {h}, L = {L}, p1 = {format_unipoly(p1)} vanishes on {F.strip}",
        )
    ]


class _Sampler:
    """Dyadic points ``X/scale`` in the strip window, biased to small height."""

    def __init__(self, strip: Interval, rng: random.Random) -> None:
        lo = Fraction(-FALSIFY_WINDOW) if strip.lower is None else strip.lower
        hi = Fraction(FALSIFY_WINDOW) if strip.upper is None else strip.upper
        lo, hi = max(lo, -FALSIFY_WINDOW), min(hi, FALSIFY_WINDOW)
        if not lo < hi:
            # strip lies beyond the window; use a window of the same width at its edge
            if strip.lower is not None and strip.lower >= FALSIFY_WINDOW:
                lo = strip.lower
                hi = lo + 2 * FALSIFY_WINDOW if strip.upper is None else strip.upper
            else:
                hi = strip.upper
                lo = hi - 2 * FALSIFY_WINDOW if strip.lower is None else strip.lower
        scale = FALSIFY_DENOMINATOR
        while math.floor(lo * scale) + 1 > math.ceil(hi * scale) - 1:
            scale *= 2
        self.scale = scale
        self.rng = rng
        self._x = (lo, hi)
        self._y = (Fraction(-FALSIFY_WINDOW), Fraction(FALSIFY_WINDOW))

    def _draw(self, bounds: Tuple[Fraction, Fraction]) -> int:
        lo, hi = bounds
        levels = self.scale.bit_length() - 1
        while True:
            k = self.rng.randint(0, levels)
            step = self.scale >> k
            first = math.floor(lo * 2**k) + 1
            last = math.ceil(hi * 2**k) - 1
            if first <= last:
                return self.rng.randint(first, last) * step

    def draw(self) -> Tuple[int, int]:
        return self._draw(self._x), self._draw(self._y)


def _integer_terms(f: BiPoly, common: int) -> List[Tuple[int, int, int]]:
    return [(int(c * common), i, j) for i, j, c in f.terms()]


def falsify(
    F: PlanarMap,
    budget: int = DEFAULT_FALSIFY_BUDGET,
    seed: int = DEFAULT_FALSIFY_SEED,
) -> Optional[Tuple[Point, Point]]:
    """Search for two distinct rational points with the same image."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = random.Random(seed)
    sampler = _Sampler(F.strip, rng)
    scale = sampler.scale
    terms = F.P.terms() + F.Q.terms()
    common = math.lcm(*(c.denominator for _, _, c in terms)) if terms else 1
    degree = max((i + j for i, j, _ in terms), default=0)
    components = [_integer_terms(F.P, common), _integer_terms(F.Q, common)]
    weights = [scale**k for k in range(degree + 1)]

    seen: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for _ in range(budget):
        X, Y = sampler.draw()
        # every image is scaled by common * scale**degree, so keys compare exactly
        key = tuple(
            sum(c * X**i * Y**j * weights[degree - i - j] for c, i, j in comp)
            for comp in components
        )
        previous = seen.get(key)
        if previous is None:
            seen[key] = (X, Y)
        elif previous != (X, Y):
            a = (Fraction(previous[0], scale), Fraction(previous[1], scale))
            b = (Fraction(X, scale), Fraction(Y, scale))
            logger.info("collision found for %s: %s and %s", F, a, b)
            return a, b
    logger.debug("no collision for %s in %d samples, %d images", F, budget, len(seen))
    return None


def _fiber_collapse(
    F: PlanarMap, classification: Classification
) -> Optional[Tuple[Point, Point]]:
    witness = classification.non_singularity.witness
    x0 = witness.x
    if x0 is None or x0 not in F.strip:
        return None
    if F.P.at_x(x0).is_constant and F.Q.at_x(x0).is_constant:
        return (x0, Fraction(0)), (x0, Fraction(1))
    return None


def check_injectivity(
    F: PlanarMap,
    budget: int = DEFAULT_FALSIFY_BUDGET,
    seed: int = DEFAULT_FALSIFY_SEED,
    assume_nonsingular: bool = False,
    max_rounds: int = DEFAULT_REFINE_ROUNDS,
) -> InjectivityVerdict:
    classification = classify(F)
    criteria: List[CriterionOutcome] = []

    if classification.is_singular:
        pair = _fiber_collapse(F, classification)
        if pair is not None:
            criteria.append(
                CriterionOutcome(
                    Criterion.FIBER_COLLAPSE,
                    Outcome.WITNESS,
                    f"the fiber x = {pair[0][0]} maps to a single point",
                )
            )
            return InjectivityVerdict(NotInjective(*pair), tuple(criteria))
        if assume_nonsingular:
            refuted = _describe_singularity(classification)
            logger.warning("non-singularity claim refuted for %s: %s", F, refuted)
            criteria.append(
                CriterionOutcome(
                    Criterion.NONSINGULARITY_CLAIM, Outcome.CONTRADICTION, refuted
                )
            )
            assume_nonsingular = False

    certificate: Optional[CriterionOutcome] = None
    lemma3 = check_lemma3(F, classification, assume_nonsingular)
    criteria.extend(lemma3)
    contradiction = next(
        (o for o in lemma3 if o.outcome is Outcome.CONTRADICTION), None
    )
    if contradiction is not None:
        if classification.is_non_singular:
            raise InternalContradiction(
                f"non-singularity was certified but {contradiction.detail}"
            )
        logger.warning(
            "non-singularity claim refuted for %s: %s", F, contradiction.detail
        )
        # the claim is refuted, so nothing below may rely on it
        assume_nonsingular = False
    else:
        certificate = _certifying(lemma3)

    if certificate is None:
        theorem2 = check_theorem2(F, classification, assume_nonsingular, max_rounds)
        criteria.extend(theorem2)
        certificate = _certifying(theorem2)
    if certificate is None:
        theorem3 = check_theorem_l2h(F, classification, assume_nonsingular)
        criteria.extend(theorem3)
        certificate = _certifying(theorem3)
    if certificate is None:
        try:
            report = decompose_dispatch(F)
        except YtriError as exc:
            criteria.append(
                CriterionOutcome(
                    Criterion.DECOMPOSITION_CHAIN, Outcome.FAILED, exc.message
                )
            )
        else:
            certificate = CriterionOutcome(
                Criterion.DECOMPOSITION_CHAIN,
                Outcome.CERTIFIED,
                f"{report.theorem.value}: {report.triangular_count} triangular + "
                f"{report.quasi_triangular_count} quasi-triangular factors",
            )
            criteria.append(certificate)

    pair = falsify(F, budget, seed)
    if pair is None:
        criteria.append(
            CriterionOutcome(
                Criterion.FALSIFIER,
                Outcome.NO_WITNESS,
                f"no collision in {budget} samples",
            )
        )
    else:
        criteria.append(
            CriterionOutcome(
                Criterion.FALSIFIER,
                Outcome.WITNESS,
                f"F{pair[0]} = F{pair[1]}",
            )
        )
        if certificate is not None:
            raise InternalContradiction(
                f"{certificate.tag.value} certified injectivity but "
                f"F{pair[0]} = F{pair[1]}"
            )
        return InjectivityVerdict(NotInjective(*pair), tuple(criteria))

    if certificate is not None:
        return InjectivityVerdict(InjectiveCertified(certificate.tag), tuple(criteria))
    reasons = {
        o.tag.value: o.detail
        for o in criteria
        if o.outcome in (Outcome.FAILED, Outcome.SKIPPED, Outcome.CONTRADICTION)
    }
    return InjectivityVerdict(Inconclusive(reasons), tuple(criteria))
