import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from config.settings import RunConfig
from src.monomial_order import DEGREVLEX, LEX, LOCAL
from src.polynomial import Polynomial, Ring, exponent_divides
from src.standard_basis import Ideal, StandardBasisEngine, enumerate_standard_monomials
from utils.errors import InfiniteColengthError, ResourceLimitError, RingMismatchError

XY = Ring(("x", "y"))
XYZ = Ring(("x", "y", "z"))

small_polys = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)),
    st.integers(-3, 3),
    min_size=1,
    max_size=3,
).map(lambda t: Polynomial(XY, t))


class TestIdeal:
    def test_zero_generators_dropped(self):
        x, y = XY.gens()
        ideal = Ideal(XY, (x, XY.zero(), y))
        assert len(ideal) == 2
        assert Ideal(XY, (XY.zero(),)).is_zero()

    def test_ring_mismatch(self):
        with pytest.raises(RingMismatchError):
            Ideal(XY, (XYZ.gen("z"),))

    def test_str(self):
        x, y = XY.gens()
        assert str(Ideal.of(XY, x * y - 1, y)) == "(x*y - 1, y)"


class TestGlobalBasis:
    def test_generators_reduce_to_zero(self, engine):
        x, y = XY.gens()
        ideal = Ideal.of(XY, x ** 2 - y, x * y - 1)
        basis = engine.standard_basis(ideal)
        for g in ideal.generators:
            assert engine.reduce(g, basis).is_zero()
        assert basis.reduced

    def test_lex_basis_is_triangular(self, engine):
        x, y = XY.gens()
        basis = engine.standard_basis(Ideal.of(XY, x ** 2 - y, x * y - 1), LEX)
        # y^3 = 1: единственный элемент только от y
        only_y = [g for g in basis.elements if g.degree_in("x") <= 0]
        assert only_y == [y ** 3 - 1]

    def test_same_ideal(self, engine):
        x, y = XY.gens()
        assert engine.same_ideal(Ideal.of(XY, x + y, x - y), Ideal.of(XY, x, y))
        assert not engine.same_ideal(Ideal.of(XY, x), Ideal.of(XY, x, y))

    def test_colength_and_monomials(self, engine):
        x, y = XY.gens()
        ideal = Ideal.of(XY, x ** 2, y ** 3)
        assert engine.colength(ideal) == 6
        monomials = engine.standard_monomials(ideal)
        assert monomials[0] == (0, 0)
        assert set(monomials) == {(a, b) for a in range(2) for b in range(3)}

    def test_infinite_colength(self, engine):
        x, _ = XY.gens()
        ideal = Ideal.of(XY, x)
        assert engine.colength(ideal) == math.inf
        with pytest.raises(InfiniteColengthError):
            engine.standard_monomials(ideal)

    def test_dimension(self, engine):
        x, y, z = XYZ.gens()
        assert engine.dimension(Ideal.of(XYZ, x * y)) == 2
        assert engine.dimension(Ideal.of(XYZ, x, y)) == 1
        assert engine.dimension(Ideal(XYZ)) == 3
        assert engine.dimension(Ideal.of(XYZ, x - 1, x)) == -1

    def test_unit_ideal(self, engine):
        x, _ = XY.gens()
        ideal = Ideal.of(XY, x, x + 1)
        assert engine.is_unit_ideal(ideal)
        assert engine.colength(ideal) == 0

    def test_cache_returns_same_basis(self, engine):
        x, y = XY.gens()
        ideal = Ideal.of(XY, x ** 2 - y, x * y - 1)
        assert engine.standard_basis(ideal) is engine.standard_basis(ideal)

    def test_resource_limit(self):
        engine = StandardBasisEngine(RunConfig().with_overrides(MAX_BASIS_ELEMENTS=2))
        x, y, z = XYZ.gens()
        with pytest.raises(ResourceLimitError):
            engine.standard_basis(Ideal.of(XYZ, x ** 2 - y, x * y - z))

    @given(small_polys, small_polys)
    @settings(max_examples=25, deadline=None)
    def test_basis_is_minimal_and_complete(self, f, g):
        engine = StandardBasisEngine()
        ideal = Ideal.of(XY, f, g)
        basis = engine.standard_basis(ideal)
        for h in ideal.generators:
            assert engine.reduce(h, basis).is_zero()
        lms = basis.leading_exponents()
        for i, a in enumerate(lms):
            assert not any(exponent_divides(b, a) for j, b in enumerate(lms) if j != i)


class TestLocalBasis:
    def test_unit_factor_ignored(self, engine):
        x = Ring(("x",)).gen("x")
        ideal = Ideal.of(x.ring, x - x ** 2)
        assert engine.colength(ideal, DEGREVLEX) == 2
        assert engine.colength(ideal, LOCAL) == 1

    def test_milnor_algebra_of_cusp(self, engine):
        x, y = XY.gens()
        ideal = Ideal.of(XY, 2 * x, 3 * y ** 2 - 4 * y ** 3)
        assert engine.colength(ideal, LOCAL) == 2
        assert engine.standard_monomials(ideal, LOCAL) == [(0, 0), (0, 1)]

    def test_local_basis_not_reduced(self, engine):
        x, y = XY.gens()
        basis = engine.standard_basis(Ideal.of(XY, x ** 2 + y ** 3, x * y), LOCAL)
        assert not basis.reduced

    def test_local_dimension(self, engine):
        x, y, z = XYZ.gens()
        assert engine.dimension(Ideal.of(XYZ, x * y - z ** 2), LOCAL) == 2
        assert engine.dimension(Ideal.of(XYZ, x - 1), LOCAL) == -1

    def test_truncated_monomials(self, engine):
        x, y = XY.gens()
        ideal = Ideal.of(XY, 2 * x, 3 * y ** 2 - 4 * y ** 3)
        assert sorted(engine.truncated_standard_monomials(ideal, 4, LOCAL)) == [(0, 0), (0, 1)]
        # m^N не лежит в идеале: длина растет вместе с N
        assert len(engine.truncated_standard_monomials(Ideal.of(XY, x), 4, LOCAL)) == 4
        assert len(engine.truncated_standard_monomials(Ideal.of(XY, x), 5, LOCAL)) == 5

    def test_non_isolated_local_colength(self, engine):
        x, y, z = XYZ.gens()
        assert engine.colength(Ideal.of(XYZ, x, y), LOCAL) == math.inf

    def test_weak_normal_form_step_budget(self):
        config = RunConfig()
        config.MAX_BASIS_ELEMENTS = 1
        engine = StandardBasisEngine(config)
        ring = Ring(("x",))
        x = ring.gen("x")
        basis = engine.standard_basis(Ideal.of(ring, x), LOCAL)
        long_poly = ring.zero()
        for k in range(1, 21):
            long_poly = long_poly + x ** k
        with pytest.raises(ResourceLimitError):
            engine.reduce(long_poly, basis)


def test_enumerate_standard_monomials():
    assert enumerate_standard_monomials([(2, 0), (0, 2)], 2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert enumerate_standard_monomials([(1, 0)], 2) is None
    assert enumerate_standard_monomials([(0, 0)], 2) == []
