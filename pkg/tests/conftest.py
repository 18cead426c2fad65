from __future__ import annotations

import random
import sys
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Callable, List, NamedTuple, Optional

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from ytri.factors import (  # noqa: E402
    AtomicMap,
    Chain,
    QuasiTriangularX,
    ShearX,
    TriangularX,
    terminal_factor,
)
from ytri.mapalg import PlanarMap, compose_chain  # noqa: E402
from ytri.polycore import UniPoly  # noqa: E402


class GeneratedMap(NamedTuple):
    F: PlanarMap
    chain: Chain
    triangular: int
    quasi: int


def rational(rng: random.Random, nonzero: bool = False, height: int = 10) -> Fraction:
    while True:
        value = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if value or not nonzero:
            return value


def positive(rng: random.Random, height: int = 10) -> Fraction:
    return Fraction(rng.randint(1, height), rng.randint(1, height))


def random_unipoly(rng: random.Random, degree: int, height: int = 10) -> UniPoly:
    return UniPoly([rational(rng, height=height) for _ in range(degree + 1)])


def monotone_cubic(rng: random.Random) -> UniPoly:
    """``a0 + a1 x + a3 x^3`` with ``a1 * a3 > 0``, so the derivative never vanishes."""
    sign = rng.choice([1, -1])
    return UniPoly([rational(rng), sign * positive(rng), 0, sign * positive(rng)])


def nonvanishing_scale(rng: random.Random, scaled: bool) -> UniPoly:
    b = rational(rng, nonzero=True)
    if not scaled:
        return UniPoly.constant(b)
    return UniPoly([positive(rng), 0, 1]) * b


def _generated(factors: List[AtomicMap]) -> GeneratedMap:
    chain = Chain(tuple(factors))
    return GeneratedMap(
        compose_chain(chain),
        chain,
        chain.triangular_count,
        chain.quasi_triangular_count,
    )


def theorem4_instance(
    rng: random.Random, m: int, scaled: Optional[bool] = None
) -> GeneratedMap:
    """Type (m,1) delta-map: shears of exponent m..1 over a quasi-triangular map."""
    scaled = rng.random() < 0.5 if scaled is None else scaled
    terminal = terminal_factor(
        monotone_cubic(rng),
        nonvanishing_scale(rng, scaled),
        random_unipoly(rng, rng.randint(0, 4)),
    )
    shears = [ShearX(-rational(rng, nonzero=True), j) for j in range(m, 0, -1)]
    return _generated(shears + [terminal])


def _corollary_base(
    rng: random.Random, m: int, c: Fraction, k: Fraction, c1: Fraction, scaled: bool
) -> List[AtomicMap]:
    alpha = monotone_cubic(rng)
    w = nonvanishing_scale(rng, scaled)
    # beta is chosen so that alpha + c1*beta is the constant k
    beta = (UniPoly.constant(k) - alpha) * (1 / c1)
    mirrored = [
        TriangularX(1, 1, UniPoly.monomial(c * comb(m, j) * (-k) ** (m - j), j))
        for j in range(m, 1, -1)
    ]
    return mirrored + [ShearX(-c1, 1), terminal_factor(alpha, w, beta)]


def corollary1_instance(rng: random.Random, m: int) -> GeneratedMap:
    """Type (m,m) delta-map whose y-powers lie in {0, 1, m}."""
    c = rational(rng, nonzero=True)
    k = rational(rng, nonzero=True)
    c1 = rational(rng, nonzero=True)
    base = _corollary_base(rng, m, c, k, c1, rng.random() < 0.5)
    return _generated([ShearX(-rational(rng, nonzero=True), 1)] + base)


def theorem5_instance(rng: random.Random, L: int, m: int) -> GeneratedMap:
    """``Q = q_m y^m + q_0`` and P with y-powers 0, 1 and multiples of m up to L*m."""
    c = rational(rng, nonzero=True)
    k = rational(rng, nonzero=True)
    # this c1 cancels the y-coefficient of Q
    c1 = 1 / (c * m * (-k) ** (m - 1))
    base = _corollary_base(rng, m, c, k, c1, rng.random() < 0.5)
    outer = [ShearX(-rational(rng, nonzero=True), l) for l in range(L, 1, -1)]
    return _generated(outer + [ShearX(-rational(rng, nonzero=True), 1)] + base)


def jacobian_instance(
    rng: random.Random, m: int, through_origin: bool = True
) -> GeneratedMap:
    """Polynomial automorphism of type (m,1), or (1,1) when m is 1."""
    beta = random_unipoly(rng, rng.randint(0, 4))
    a = rational(rng, nonzero=True)
    b = rational(rng, nonzero=True)
    if through_origin:
        terminal: AtomicMap = TriangularX(a, b, beta - beta.coeff(0))
    else:
        shift = rational(rng, nonzero=True)
        terminal = QuasiTriangularX(UniPoly([shift, a]), b, beta + 1)
    shears = [ShearX(-rational(rng, nonzero=True), j) for j in range(m, 0, -1)]
    return _generated(shears + [terminal])


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def theorem4_map() -> Callable[..., GeneratedMap]:
    return theorem4_instance


@pytest.fixture
def corollary1_map() -> Callable[..., GeneratedMap]:
    return corollary1_instance


@pytest.fixture
def theorem5_map() -> Callable[..., GeneratedMap]:
    return theorem5_instance


@pytest.fixture
def jacobian_map() -> Callable[..., GeneratedMap]:
    return jacobian_instance


@pytest.fixture
def poly_factory() -> Callable[..., UniPoly]:
    return random_unipoly
