from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.monomial_order import DEGREVLEX, LEX, LOCAL, MonomialOrder
from src.poly_parser import parse_polynomial
from src.polynomial import Polynomial, Ring, exponent_lcm, polynomial_product
from utils.errors import InvalidArgumentError, RingMismatchError, VariableIndexError

RING = Ring(("x", "y", "z"))

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exponents = st.tuples(*[st.integers(0, 3)] * 3)
polynomials = st.dictionaries(exponents, coefficients, max_size=5).map(lambda t: Polynomial(RING, t))


class TestRing:
    def test_duplicate_names_rejected(self):
        with pytest.raises(VariableIndexError):
            Ring(("x", "x"))

    def test_invalid_identifier_rejected(self):
        with pytest.raises(VariableIndexError):
            Ring(("1x",))

    def test_unknown_variable(self):
        with pytest.raises(VariableIndexError):
            RING.index("w")

    def test_fresh_name_avoids_clash(self):
        ring = Ring(("_t", "_t1"))
        assert ring.fresh_name("_t") == "_t2"


class TestArithmetic:
    def test_binomial_square(self):
        x, y, _ = RING.gens()
        assert (x + y) ** 2 == x ** 2 + 2 * x * y + y ** 2

    def test_zero_after_cancellation(self):
        x = RING.gen("x")
        assert (x - x).is_zero()
        assert (x - x).total_degree() == -1

    def test_ring_mismatch(self):
        other = Ring(("u", "v"))
        with pytest.raises(RingMismatchError):
            RING.gen("x") + other.gen("u")

    def test_exact_divide(self):
        x, y, _ = RING.gens()
        assert (x ** 2 - y ** 2).exact_divide(x - y) == x + y
        with pytest.raises(ValueError):
            (x ** 2 + y).exact_divide(x)

    def test_substitute_and_change_ring(self):
        x, y, z = RING.gens()
        f = x * y - z ** 2
        assert f.substitute({"z": x + 1}) == x * y - x ** 2 - 2 * x - 1
        bigger = RING.extend("t")
        assert f.change_ring(bigger).ring == bigger
        with pytest.raises(RingMismatchError):
            f.change_ring(Ring(("x", "y")))

    def test_evaluate_and_order(self):
        x, y, z = RING.gens()
        f = x * y - z ** 3 + Fraction(1, 2) * z ** 2
        assert f.evaluate([1, 2, 1]) == Fraction(3, 2)
        assert f.order() == 2
        assert f.total_degree() == 3
        assert not f.is_homogeneous()

    def test_polynomial_product(self):
        x, y, _ = RING.gens()
        assert polynomial_product([x, y, x], RING) == x ** 2 * y

    @given(polynomials, polynomials, polynomials)
    @settings(max_examples=40, deadline=None)
    def test_ring_axioms(self, f, g, h):
        assert f * (g + h) == f * g + f * h
        assert f * g == g * f
        assert (f + g) - g == f

    @given(polynomials, polynomials)
    @settings(max_examples=40, deadline=None)
    def test_leibniz_rule(self, f, g):
        for var in RING.names:
            assert (f * g).derivative(var) == f.derivative(var) * g + f * g.derivative(var)

    @given(polynomials)
    @settings(max_examples=50, deadline=None)
    def test_printed_form_parses_back(self, f):
        assert parse_polynomial(f.to_string(), RING).parsed == f


class TestPrinting:
    def test_negative_leading_term(self):
        x, y, _ = RING.gens()
        f = -x ** 2 + Fraction(3, 2) * y - 1
        assert f.to_string() == "-x^2 + 3/2*y - 1"

    def test_zero(self):
        assert RING.zero().to_string() == "0"


class TestMonomialOrder:
    def test_degrevlex(self):
        # x*z < y^2 в degrevlex
        assert DEGREVLEX.key((0, 2, 0)) > DEGREVLEX.key((1, 0, 1))

    def test_lex(self):
        assert LEX.key((1, 0, 0)) > LEX.key((0, 5, 5))

    def test_local_order_puts_one_first(self):
        exps = [(0, 0, 0), (1, 0, 0), (0, 2, 0)]
        assert LOCAL.leading_exponent(exps) == (0, 0, 0)
        assert LOCAL.is_local

    def test_elimination_blocks(self):
        order = MonomialOrder.elimination(1, 2)
        assert order.key((1, 0, 0)) > order.key((0, 5, 5))
        with pytest.raises(InvalidArgumentError):
            MonomialOrder.elimination(0, 3)

    def test_unknown_kind(self):
        with pytest.raises(InvalidArgumentError):
            MonomialOrder("grlex")

    def test_key_cache_is_bounded(self):
        order = MonomialOrder("degrevlex")
        order.CACHE_SIZE = 8
        for a in range(5):
            for b in range(5):
                assert order.key((a, b)) == (a + b, (-b, -a))
        assert len(order._cache) <= 8

    def test_lcm(self):
        assert exponent_lcm((2, 0, 1), (1, 3, 0)) == (2, 3, 1)
