import random
from fractions import Fraction
from unittest import TestCase

import pytest

from ytri.errors import ParseError
from ytri.parsing import MapSource, parse_map, parse_point, tokenize
from ytri.polycore import BiPoly, format_bipoly
from ytri.realroots import Interval


def component(text: str) -> BiPoly:
    return parse_map(f"{text} ; 0").P


class TokenizeTests(TestCase):
    def test_rational_literal_is_one_token(self) -> None:
        tokens = list(tokenize("5/2*x"))
        self.assertEqual([t.text for t in tokens], ["5/2", "*", "x"])
        self.assertEqual(tokens[0].value, Fraction(5, 2))

    def test_columns_and_lines(self) -> None:
        tokens = list(tokenize("x +\n  y"))
        self.assertEqual((tokens[2].line, tokens[2].column), (2, 3))

    def test_division_is_rejected(self) -> None:
        with self.assertRaises(ParseError) as ctx:
            tokenize("x / 2")
        self.assertEqual(ctx.exception.column, 3)

    def test_zero_denominator(self) -> None:
        with self.assertRaises(ParseError):
            tokenize("1/0")


class ParseMapTests(TestCase):
    def test_type11_map(self) -> None:
        F = parse_map("(x^2+1)*y + 2*x ; (x^2+1)*y + x")
        self.assertEqual(F.map_type, (1, 1))
        self.assertTrue(F.strip.is_real_line)
        self.assertEqual(F.P(1, 1), 4)

    def test_strip(self) -> None:
        F = parse_map("x^2 ; x^2*y on (0, inf)")
        self.assertEqual(F.strip, Interval(0, None))
        G = parse_map("x ; y on (-inf, -1/2)")
        self.assertEqual(G.strip, Interval(None, Fraction(-1, 2)))

    def test_precedence(self) -> None:
        self.assertEqual(component("2^3^2"), BiPoly.constant(512))
        self.assertEqual(component("-2^2"), BiPoly.constant(-4))
        self.assertEqual(component("1 - 2 - 3"), BiPoly.constant(-4))
        self.assertEqual(component("-x^2 + x"), BiPoly.x() - BiPoly.x() ** 2)

    def test_parenthesised_power(self) -> None:
        expected = BiPoly.x() ** 2 + BiPoly.x() * 2 + 1
        self.assertEqual(component("(x+1)^2"), expected)

    def test_map_source_text(self) -> None:
        source = MapSource("x", "y^3 + x", "(0, inf)")
        self.assertEqual(source.text, "x ; y^3 + x on (0, inf)")
        self.assertEqual(parse_map(source).strip, Interval(0, None))


class ParseErrorTests(TestCase):
    def assertParseError(self, text: str, line: int, column: int) -> ParseError:
        with self.assertRaises(ParseError) as ctx:
            parse_map(text)
        self.assertEqual((ctx.exception.line, ctx.exception.column), (line, column))
        return ctx.exception

    def test_dangling_power(self) -> None:
        error = self.assertParseError("y ; x^", 1, 6)
        self.assertIn("end of input", error.reason)

    def test_implicit_multiplication(self) -> None:
        error = self.assertParseError("2x ; y", 1, 2)
        self.assertIn("implicit multiplication", error.reason)

    def test_unknown_variable(self) -> None:
        self.assertParseError("x ; z + 1", 1, 5)

    def test_non_integer_exponent(self) -> None:
        self.assertParseError("x^(1/2) ; y", 1, 2)
        self.assertParseError("x^y ; y", 1, 2)
        self.assertParseError("x ; y^-1", 1, 6)

    def test_missing_separator(self) -> None:
        self.assertParseError("x + y", 1, 5)

    def test_error_on_second_line(self) -> None:
        self.assertParseError("x ;\n 2y", 2, 3)

    def test_bad_strips(self) -> None:
        with self.assertRaises(ParseError):
            parse_map("x ; y on (0, -inf)")
        with self.assertRaises(ParseError):
            parse_map("x ; y on (2, 1)")
        with self.assertRaises(ParseError):
            parse_map("x ; y on (0, 1")
        with self.assertRaises(ParseError):
            parse_map("x ; y on (a, 1)")


class ParsePointTests(TestCase):
    def test_examples(self) -> None:
        self.assertEqual(parse_point("1,2"), (1, 2))
        self.assertEqual(parse_point("1/2, -3"), (Fraction(1, 2), -3))

    def test_malformed(self) -> None:
        for text in ("1", "1,2,3", "a,b", "1/0,1"):
            with self.assertRaises(ParseError):
                parse_point(text)


@pytest.mark.parametrize("seed", range(25))
def test_formatted_polynomials_parse_back(seed: int) -> None:
    rng = random.Random(seed)
    f = BiPoly.from_terms(
        (
            rng.randint(0, 4),
            rng.randint(0, 3),
            Fraction(rng.randint(-9, 9), rng.randint(1, 6)),
        )
        for _ in range(rng.randint(1, 6))
    )
    text = format_bipoly(f)
    assert component(text) == f
    assert format_bipoly(component(text)) == text
