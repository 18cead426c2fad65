import random
from fractions import Fraction
from unittest import TestCase

import pytest

from ytri.errors import UndefinedGcd
from ytri.parsing import parse_map
from ytri.polycore import (
    BiPoly,
    UniPoly,
    bi_eval,
    format_bipoly,
    poly_arith,
    poly_derivative,
    poly_eval,
    poly_gcd,
    square_free_decomposition,
    substitute,
)

X = UniPoly.x()


def bipoly(text: str) -> BiPoly:
    return parse_map(f"{text} ; 0").P


class ArithmeticTests(TestCase):
    def test_difference_of_squares(self) -> None:
        self.assertEqual((X + 1) * (X - 1), UniPoly([-1, 0, 1]))

    def test_zero_power_is_one(self) -> None:
        self.assertEqual((X**2 + 1) ** 0, UniPoly.constant(1))

    def test_subtracting_the_type11_components_leaves_x(self) -> None:
        P = bipoly("(x^2+1)*y + 2*x")
        Q = bipoly("(x^2+1)*y + x")
        self.assertEqual(poly_arith(P, Q, "sub"), BiPoly.x())

    def test_canonical_form_drops_trailing_zeros(self) -> None:
        self.assertEqual(UniPoly([1, 2, 0, 0]), UniPoly([1, 2]))
        self.assertTrue((X - X).is_zero)
        self.assertEqual((X - X).degree, float("-inf"))

    def test_x_degree_of_bivariate(self) -> None:
        self.assertEqual(bipoly("x^3*y^2 + x*y + x^4").x_degree, 4)
        self.assertEqual(BiPoly.zero().x_degree, float("-inf"))

    def test_divmod_reconstructs_dividend(self) -> None:
        a = UniPoly([3, 0, -2, 5, 1])
        b = UniPoly([1, Fraction(1, 2), 2])
        quotient, remainder = divmod(a, b)
        self.assertEqual(quotient * b + remainder, a)
        self.assertLess(remainder.degree, b.degree)


class DerivativeAndEvaluationTests(TestCase):
    def test_derivative_in_x(self) -> None:
        self.assertEqual(poly_derivative(X**3 + X), UniPoly([1, 0, 3]))

    def test_derivative_in_y(self) -> None:
        self.assertEqual(
            poly_derivative(bipoly("x^3*y^2 + x"), "y"), bipoly("2*x^3*y")
        )

    def test_derivative_of_constant_vanishes(self) -> None:
        self.assertTrue(poly_derivative(UniPoly.constant(7)).is_zero)

    def test_evaluation(self) -> None:
        self.assertEqual(poly_eval(X**2 + 1, 2), 5)
        self.assertEqual(poly_eval(X**3 * 2, 0), 0)
        self.assertEqual(bi_eval(bipoly("3*x^2*y^2 + 1"), (1, 1)), 4)


class GcdTests(TestCase):
    def test_examples(self) -> None:
        self.assertEqual(poly_gcd(X**2 - 1, X - 1), X - 1)
        self.assertEqual(poly_gcd(X**2, X * 2), X)
        self.assertEqual(poly_gcd(X**2 + 1, X**2 + 2), UniPoly.constant(1))

    def test_gcd_with_zero_is_monic_other(self) -> None:
        self.assertEqual(poly_gcd(X * 3 + 6, UniPoly.zero()), X + 2)

    def test_gcd_of_two_zeros_is_undefined(self) -> None:
        with self.assertRaises(UndefinedGcd):
            poly_gcd(UniPoly.zero(), UniPoly.zero())

    def test_square_free_layers_multiply_back(self) -> None:
        p = (X - 1) * (X + 2) ** 2 * (X**2 + 1) ** 3
        layers = square_free_decomposition(p)
        product = UniPoly.constant(1)
        for power, layer in enumerate(layers, start=1):
            product = product * layer**power
        self.assertEqual(product.monic(), p.monic())


class SubstituteTests(TestCase):
    def test_u_minus_v_on_type11_map(self) -> None:
        P = bipoly("(x^2+1)*y + 2*x")
        Q = bipoly("(x^2+1)*y + x")
        self.assertEqual(substitute(bipoly("x - y"), P, Q), BiPoly.x())

    def test_projection(self) -> None:
        P, Q = bipoly("x^3 + y"), bipoly("x*y^2 - 4")
        self.assertEqual(substitute(BiPoly.y(), P, Q), Q)

    def test_power_shear_expansion(self) -> None:
        # L = 2, m = 2 with degree-1 coefficients
        P = bipoly("(x+1)*y^4 + x*y^2 + y + 2*x")
        Q = bipoly("(2*x+1)*y^2 + x")
        shear = bipoly("x + 3*y^2")
        expected = P + Q**2 * 3
        self.assertEqual(substitute(shear, P, Q), expected)


@pytest.mark.parametrize("seed", range(20))
def test_ring_axioms_hold_for_random_bipolys(seed: int) -> None:
    rng = random.Random(seed)

    def random_bipoly() -> BiPoly:
        return BiPoly.from_terms(
            (
                rng.randint(0, 3),
                rng.randint(0, 3),
                Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
            )
            for _ in range(rng.randint(1, 6))
        )

    a, b, c = random_bipoly(), random_bipoly(), random_bipoly()
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == BiPoly.zero()
    assert a**3 == a * a * a


@pytest.mark.parametrize("seed", range(10))
def test_substitute_composes_associatively(seed: int) -> None:
    rng = random.Random(seed)

    def random_bipoly() -> BiPoly:
        return BiPoly.from_terms(
            (rng.randint(0, 2), rng.randint(0, 2), rng.randint(-3, 3))
            for _ in range(rng.randint(1, 4))
        )

    f, g1, g2, h1, h2 = (random_bipoly() for _ in range(5))
    inner = (substitute(g1, h1, h2), substitute(g2, h1, h2))
    assert substitute(substitute(f, g1, g2), h1, h2) == substitute(f, *inner)


def test_format_bipoly_is_canonical() -> None:
    f = BiPoly.from_terms([(2, 1, Fraction(5, 2)), (0, 0, -1), (1, 2, -1)])
    assert format_bipoly(f) == "-x*y^2 + 5/2*x^2*y - 1"
    assert format_bipoly(BiPoly.zero()) == "0"
