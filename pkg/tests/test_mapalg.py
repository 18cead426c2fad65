import random
from fractions import Fraction
from unittest import TestCase

import pytest

from ytri.errors import HypothesisViolated, StripError
from ytri.factors import Chain, ShearX, TriangularX, terminal_factor
from ytri.mapalg import (
    NonSingular,
    PlanarMap,
    Singular,
    Unknown,
    classify,
    compose_chain,
    eval_map,
    jacobian_det,
    leading_pair_data,
    map_type,
)
from ytri.parsing import parse_map
from ytri.polycore import BiPoly, UniPoly, substitute

X = UniPoly.x()

TYPE11 = "(x^2+1)*y + 2*x ; (x^2+1)*y + x"
SQUARE = "x^2 ; x^2*y"
COMPOSITE = "x^3*y^2 + x ; x^3*y^2 + x + y"


class MapTypeTests(TestCase):
    def test_examples(self) -> None:
        self.assertEqual(map_type(parse_map(TYPE11)), (1, 1))
        self.assertEqual(map_type(parse_map(SQUARE)), (0, 1))
        self.assertEqual(map_type(parse_map(COMPOSITE)), (2, 2))

    def test_zero_component_has_degree_zero(self) -> None:
        self.assertEqual(map_type(parse_map("0 ; y")), (0, 1))


class JacobianTests(TestCase):
    def test_type11_determinant(self) -> None:
        dF = jacobian_det(parse_map(TYPE11))
        self.assertEqual(dF, BiPoly.from_x(X**2 + 1))

    def test_composite_determinant(self) -> None:
        dF = jacobian_det(parse_map(COMPOSITE))
        self.assertEqual(dF, parse_map("3*x^2*y^2 + 1 ; 0").P)

    def test_identity(self) -> None:
        self.assertEqual(jacobian_det(PlanarMap.identity()), BiPoly.constant(1))


class ClassifyTests(TestCase):
    def test_type11_is_nonsingular_delta_map(self) -> None:
        result = classify(parse_map(TYPE11))
        self.assertTrue(result.is_delta_map)
        self.assertEqual(result.delta, X**2 + 1)
        self.assertFalse(result.is_jacobian_map)
        self.assertIsInstance(result.non_singularity, NonSingular)

    def test_square_map_on_half_line(self) -> None:
        result = classify(parse_map(f"{SQUARE} on (0, inf)"))
        self.assertEqual(result.delta, X**3 * 2)
        self.assertTrue(result.is_non_singular)

    def test_square_map_on_full_line_has_witness_at_zero(self) -> None:
        result = classify(parse_map(SQUARE))
        self.assertIsInstance(result.non_singularity, Singular)
        witness = result.non_singularity.witness
        self.assertEqual(witness.x, 0)
        self.assertTrue(witness.any_y)

    def test_irrational_root_is_boxed(self) -> None:
        # delta = x^2 - 2
        result = classify(parse_map("1/3*x^3 - 2*x ; y"))
        witness = result.non_singularity.witness
        self.assertIsNone(witness.x)
        self.assertLess(witness.x_box.lower ** 2, 2)
        self.assertGreater(witness.x_box.upper ** 2, 2)

    def test_even_y_degree_stays_unknown(self) -> None:
        result = classify(parse_map(COMPOSITE))
        self.assertFalse(result.is_delta_map)
        self.assertIsInstance(result.non_singularity, Unknown)

    def test_odd_y_degree_yields_slice_witness(self) -> None:
        result = classify(parse_map("x ; y^2"))
        self.assertTrue(result.is_singular)
        witness = result.non_singularity.witness
        self.assertEqual(witness.y, 0)

    def test_jacobian_map(self) -> None:
        result = classify(parse_map("x + y ; 3*y"))
        self.assertTrue(result.is_jacobian_map)
        self.assertTrue(result.is_non_singular)


class LeadingPairTests(TestCase):
    def test_composite_map(self) -> None:
        data = leading_pair_data(parse_map(COMPOSITE))
        self.assertEqual(data.m, 2)
        self.assertEqual(data.d1m, -(X**3))
        self.assertTrue(data.d1m_star.is_zero)

    def test_unit_leading_pair(self) -> None:
        # p1 = q2 = 1, q1 = p2 = 0
        data = leading_pair_data(parse_map("y + x ; y^2 + x"))
        self.assertEqual(data.d1m, UniPoly.constant(1))

    def test_equal_rows_give_zero(self) -> None:
        data = leading_pair_data(parse_map("x*y^2 + x*y ; x*y^2 + x*y + 1"))
        self.assertTrue(data.d1m.is_zero)

    def test_y_free_map_has_no_leading_pair(self) -> None:
        with self.assertRaises(HypothesisViolated):
            leading_pair_data(parse_map("x ; x^2"))


class ComposeChainTests(TestCase):
    def test_single_shear(self) -> None:
        F = compose_chain(Chain((ShearX(1, 1),)))
        self.assertTrue(F.same_components(parse_map("x - y ; y")))

    def test_type11_reassembles(self) -> None:
        chain = Chain((ShearX(-1, 1), terminal_factor(X, X**2 + 1, X)))
        self.assertTrue(compose_chain(chain).same_components(parse_map(TYPE11)))

    def test_strip_is_carried(self) -> None:
        strip = parse_map(f"{SQUARE} on (0, inf)").strip
        chain = Chain((TriangularX(1, 1),), strip=strip)
        self.assertEqual(str(compose_chain(chain).strip), "(0, inf)")


@pytest.mark.parametrize("seed", range(10))
def test_compose_chain_matches_nested_substitution(seed: int) -> None:
    rng = random.Random(seed)
    factors = (
        ShearX(Fraction(rng.randint(1, 5), rng.randint(1, 3)), rng.randint(1, 3)),
        TriangularX(
            rng.randint(1, 4), -rng.randint(1, 4), UniPoly([rng.randint(-3, 3), 0, 1])
        ),
        terminal_factor(
            UniPoly([0, 1, 0, 2]), X**2 + 1, UniPoly([1, rng.randint(-2, 2)])
        ),
    )
    outer, middle, inner = (f.components() for f in factors)
    P = substitute(middle[0], *inner)
    Q = substitute(middle[1], *inner)
    expected = (substitute(outer[0], P, Q), substitute(outer[1], P, Q))
    F = compose_chain(Chain(factors))
    assert (F.P, F.Q) == expected


class EvalMapTests(TestCase):
    def test_examples(self) -> None:
        self.assertEqual(eval_map(parse_map(SQUARE), (2, 1)), (4, 4))
        self.assertEqual(eval_map(parse_map(TYPE11), (0, 0)), (0, 0))
        self.assertEqual(eval_map(parse_map(COMPOSITE), (1, 2)), (5, 7))

    def test_rational_point(self) -> None:
        value = eval_map(parse_map(SQUARE), (Fraction(1, 2), 3))
        self.assertEqual(value, (Fraction(1, 4), Fraction(3, 4)))

    def test_point_outside_strip(self) -> None:
        with self.assertRaises(StripError):
            eval_map(parse_map(f"{SQUARE} on (0, inf)"), (-1, 0))


class PlanarMapTests(TestCase):
    def test_translated_moves_origin_to_origin(self) -> None:
        shifted, shift = parse_map("x + 3 ; y - 1/2").translated()
        self.assertEqual(shift, (3, Fraction(-1, 2)))
        self.assertEqual(eval_map(shifted, (0, 0)), (0, 0))

    def test_text_form_parses_back(self) -> None:
        F = parse_map(f"{COMPOSITE} on (-1/2, 3)")
        again = parse_map(str(F))
        self.assertTrue(again.same_components(F))
        self.assertEqual(again.strip, F.strip)
