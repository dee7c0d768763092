from fractions import Fraction

import pytest

from src.poly_parser import parse_polynomial, parse_variables, tokenize
from src.polynomial import Ring
from utils.errors import PolynomialSyntaxError, UnknownVariableError, VariableIndexError, ZeroDenominatorError

XYZ = Ring(("x", "y", "z"))


class TestParse:
    def test_simple(self):
        x, y, z = XYZ.gens()
        assert parse_polynomial("x*y - z^3", "x,y,z").parsed == x * y - z ** 3

    def test_rationals_and_parentheses(self):
        x, y, _ = XYZ.gens()
        parsed = parse_polynomial("3/2*(x + y)^2 - 1/3", XYZ).parsed
        assert parsed == Fraction(3, 2) * (x + y) ** 2 - Fraction(1, 3)

    def test_leading_sign(self):
        x = XYZ.gen("x")
        assert parse_polynomial("-x^2 + 1", XYZ).parsed == 1 - x ** 2
        assert parse_polynomial("+x", XYZ).parsed == x

    def test_whitespace_ignored(self):
        assert parse_polynomial("  x *  y ", XYZ).parsed == parse_polynomial("x*y", XYZ).parsed

    def test_result_keeps_source(self):
        expr = parse_polynomial("x + 1", "x")
        assert expr.source == "x + 1"
        assert expr.ring == Ring(("x",))


class TestErrors:
    def test_unknown_variable_column(self):
        with pytest.raises(UnknownVariableError) as info:
            parse_polynomial("x + w", XYZ)
        assert info.value.details["column"] == 5

    def test_implicit_multiplication_rejected(self):
        with pytest.raises(PolynomialSyntaxError):
            parse_polynomial("2x", XYZ)

    def test_zero_denominator_column(self):
        with pytest.raises(ZeroDenominatorError) as info:
            parse_polynomial("x + 1/0", XYZ)
        assert info.value.details["column"] == 7

    def test_bad_character(self):
        with pytest.raises(PolynomialSyntaxError):
            parse_polynomial("x % y", XYZ)

    @pytest.mark.parametrize("source", ["", "x +", "(x + y", "x^", "x^y", "x ** 2", "1/x", "x^²", "²*x", "x + ³"])
    def test_malformed(self, source):
        with pytest.raises(PolynomialSyntaxError):
            parse_polynomial(source, XYZ)

    def test_bad_variable_list(self):
        with pytest.raises(VariableIndexError):
            parse_variables("x,x")


def test_tokenize_columns():
    tokens = tokenize("x^12 + y")
    assert [(t.text, t.column) for t in tokens[:-1]] == [("x", 1), ("^", 2), ("12", 3), ("+", 6), ("y", 8)]
