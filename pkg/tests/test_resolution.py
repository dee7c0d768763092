from fractions import Fraction

import pytest

from config.settings import RunConfig
from src.deformation import DeformationBuilder
from src.ideal_ops import Verdict
from src.polynomial import Ring
from src.resolution import ResolutionBuilder
from src.standard_basis import Ideal
from utils.errors import ChartCapExceededError, InvalidArgumentError


class TestRootBase:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_roots_sum_to_zero(self, resolutions, n):
        base, _ = resolutions.an_base_change(n)
        assert base.relation_holds()
        assert base.elementary_symmetric(1).is_zero()
        assert len(base.alphas()) == n + 1

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_family_pulls_back_to_product(self, resolutions, n):
        assert resolutions.elementary_symmetric_identity(n)

    def test_alpha_index(self, resolutions):
        base, _ = resolutions.an_base_change(2)
        with pytest.raises(InvalidArgumentError):
            base.alpha(4)


class TestAnResolution:
    def test_a1_charts_smooth(self, resolutions):
        variety = resolutions.an_simultaneous_resolution(1)
        assert [c.name for c in variety.charts] == ["p1", "q1"]
        assert variety.all_smooth
        assert variety.base_parameters == ("a1",)

    def test_a2_charts_smooth(self, resolutions):
        variety = resolutions.an_simultaneous_resolution(2)
        assert len(variety.charts) == 4
        assert variety.all_smooth

    @pytest.mark.slow
    def test_a3_charts_smooth(self, resolutions):
        variety = resolutions.an_simultaneous_resolution(3)
        assert len(variety.charts) == 8
        assert variety.all_smooth

    def test_chart_cap(self, resolutions):
        with pytest.raises(ChartCapExceededError):
            resolutions.an_simultaneous_resolution(4)

    def test_cap_is_configurable(self):
        resolutions = ResolutionBuilder(RunConfig().with_overrides(CHART_CAP=1), DeformationBuilder())
        with pytest.raises(ChartCapExceededError):
            resolutions.an_simultaneous_resolution(2)

    def test_exceptional_curve(self, resolutions):
        variety = resolutions.an_simultaneous_resolution(1)
        _, dim = resolutions.exceptional_locus(variety, "p1")
        assert dim == 1

    def test_fiber_drops_parameters(self, resolutions):
        variety = resolutions.an_simultaneous_resolution(1)
        fiber = variety.fiber("p1", {"a1": Fraction(0)})
        assert fiber.ring == Ring(("x", "y", "z", "p1"))

    def test_sampled_fibers_smooth(self, resolutions):
        variety = resolutions.an_simultaneous_resolution(1)
        samples = resolutions.sample_fibers(variety, count=4, seed=3)
        assert len(samples) == 8
        assert all(cert.is_smooth for _, _, cert in samples)

    def test_unknown_chart(self, resolutions):
        variety = resolutions.an_simultaneous_resolution(1)
        with pytest.raises(InvalidArgumentError):
            variety.chart("r1")


class TestNode:
    def test_small_resolutions_smooth(self, resolutions):
        first, second = resolutions.node_small_resolutions()
        assert [c.name for c in first.charts] == ["xi", "xi_inv"]
        assert [c.name for c in second.charts] == ["eta", "eta_inv"]
        assert first.all_smooth and second.all_smooth

    def test_total_space_is_singular(self, ops):
        ring = Ring(("u", "v", "w", "tau"))
        u, v, w, tau = ring.gens()
        certificate = ops.is_smooth(Ideal.of(ring, w ** 2 - u * v - tau ** 2), 3)
        assert certificate.verdict == Verdict.SINGULAR

    def test_flop_indeterminacy(self, resolutions, engine):
        locus = resolutions.flop_indeterminacy()
        u, tau, _ = locus.ring.gens()
        assert engine.same_ideal(locus, Ideal.of(locus.ring, u, tau))
        assert engine.dimension(locus) == 1

    def test_flop_biregular_off_center(self, resolutions):
        assert resolutions.flop_is_biregular_off_center()

    def test_swap_tau(self, resolutions):
        ring = Ring(("u", "v", "w", "tau"))
        u, v, w, tau = ring.gens()
        swapped = resolutions.swap_tau(Ideal.of(ring, w - tau), ring)
        assert swapped.generators == (w + tau,)
