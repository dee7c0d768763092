from fractions import Fraction

import pytest

from config.settings import RunConfig
from src.ideal_ops import (
    IdealOperations,
    Verdict,
    determinant,
    hessian_at_origin,
    jacobian_matrix,
    rational_rank,
)
from src.polynomial import Ring
from src.standard_basis import Ideal
from utils.errors import InvalidArgumentError, RingMismatchError, SaturationLimitError

XY = Ring(("x", "y"))
XYZ = Ring(("x", "y", "z"))


class TestElimination:
    def test_twisted_cubic_projection(self, ops, engine):
        ring = Ring(("t", "x", "y"))
        t, x, y = ring.gens()
        result = ops.eliminate(Ideal.of(ring, x - t ** 2, y - t ** 3), ["t"])
        assert engine.same_ideal(result, Ideal.of(ring, x ** 3 - y ** 2))

    def test_nothing_to_eliminate(self, ops, engine):
        x, y = XY.gens()
        ideal = Ideal.of(XY, x + y, x - y)
        assert engine.same_ideal(ops.eliminate(ideal, []), Ideal.of(XY, x, y))


class TestQuotients:
    def test_intersection(self, ops, engine):
        x, y = XY.gens()
        meet = ops.intersect(Ideal.of(XY, x), Ideal.of(XY, y))
        assert engine.same_ideal(meet, Ideal.of(XY, x * y))

    def test_intersection_ring_mismatch(self, ops):
        with pytest.raises(RingMismatchError):
            ops.intersect(Ideal.of(XY, XY.gen("x")), Ideal.of(XYZ, XYZ.gen("x")))

    def test_quotient(self, ops, engine):
        x, y = XY.gens()
        result = ops.quotient(Ideal.of(XY, x * y, y ** 2), Ideal.of(XY, y))
        assert engine.same_ideal(result, Ideal.of(XY, x, y))

    def test_quotient_by_zero_ideal(self, ops, engine):
        x, _ = XY.gens()
        assert engine.is_unit_ideal(ops.quotient(Ideal.of(XY, x), Ideal(XY)))

    def test_saturation(self, ops, engine):
        x, y = XY.gens()
        result = ops.saturate(Ideal.of(XY, x ** 3 * y), Ideal.of(XY, x))
        assert engine.same_ideal(result, Ideal.of(XY, y))

    def test_saturation_limit(self, engine):
        ops = IdealOperations(RunConfig().with_overrides(MAX_SATURATION_ITERATIONS=1), engine)
        x, y = XY.gens()
        with pytest.raises(SaturationLimitError):
            ops.saturate(Ideal.of(XY, x ** 3 * y), Ideal.of(XY, x))


class TestSmoothness:
    def test_node_is_singular(self, ops, engine):
        x, y, z = XYZ.gens()
        certificate = ops.is_smooth(Ideal.of(XYZ, x * y - z ** 2), 2)
        assert certificate.verdict == Verdict.SINGULAR
        assert not certificate.is_smooth
        assert engine.same_ideal(certificate.witness, Ideal.of(XYZ, x, y, z))

    def test_hyperbola_is_smooth(self, ops, engine):
        x, y = XY.gens()
        certificate = ops.is_smooth(Ideal.of(XY, x * y - 1), 1)
        assert certificate.is_smooth
        assert engine.is_unit_ideal(certificate.witness)

    def test_graph_is_stripped(self, ops):
        x, y, z = XYZ.gens()
        certificate = ops.is_smooth(Ideal.of(XYZ, z - x ** 2 - y ** 2), 2)
        assert certificate.is_smooth
        assert certificate.eliminated == ("z",)

    def test_dimension_mismatch_is_inconclusive(self, ops):
        x, y, z = XYZ.gens()
        certificate = ops.is_smooth(Ideal.of(XYZ, x * y - z ** 2), 1)
        assert certificate.verdict == Verdict.INCONCLUSIVE
        assert certificate.witness.is_zero()

    def test_singular_locus_codim(self, ops):
        with pytest.raises(InvalidArgumentError):
            ops.singular_locus_ideal(Ideal.of(XY, XY.gen("x")), 0)


class TestMatrices:
    def test_jacobian_and_hessian(self):
        x, y = XY.gens()
        f = x ** 2 + 3 * x * y + y ** 3
        assert jacobian_matrix([f]) == [[2 * x + 3 * y, 3 * x + 3 * y ** 2]]
        assert hessian_at_origin(f) == [[2, 3], [3, 0]]

    def test_determinant(self):
        x, y, z = XYZ.gens()
        zero = XYZ.zero()
        matrix = [[x, zero, zero], [zero, y, zero], [zero, zero, z]]
        assert determinant(matrix) == x * y * z

    def test_rational_rank(self):
        assert rational_rank([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 1
        assert rational_rank([]) == 0
