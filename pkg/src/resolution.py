import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from config.settings import SETTINGS, RunConfig
from src.deformation import DeformationBuilder
from src.ideal_ops import IdealOperations, SmoothnessCertificate
from src.monomial_order import MonomialOrder
from src.polynomial import Polynomial, Ring, polynomial_product
from src.singular import SingularityAnalyzer
from src.standard_basis import Ideal
from src.weyl import ADEType
from utils.errors import ChartCapExceededError, InvalidArgumentError
from utils.helpers import SystemHelpers

logger = logging.getLogger(__name__)

NODE_CHART_VARS = ("u", "v", "w", "tau")


@dataclass(frozen=True)
class Chart:
    name: str
    ideal: Ideal
    expected_dim: int
    certificate: Optional[SmoothnessCertificate] = None


@dataclass(frozen=True)
class ChartedVariety:
    """Разрешение как набор аффинных карт (склейка описана текстом)"""

    charts: Tuple[Chart, ...]
    gluing_note: str
    base_parameters: Tuple[str, ...] = ()

    def chart(self, name: str) -> Chart:
        for chart in self.charts:
            if chart.name == name:
                return chart
        raise InvalidArgumentError(f"Карта {name!r} не найдена", {'available': [c.name for c in self.charts]})

    @property
    def all_smooth(self) -> bool:
        return all(c.certificate is not None and c.certificate.is_smooth for c in self.charts)

    def fiber(self, name: str, values: Dict[str, Fraction]) -> Ideal:
        """Подстановка значений параметров базы; результат в кольце без них"""
        chart = self.chart(name)
        ring = chart.ideal.ring
        fixed = chart.ideal.substitute({k: Fraction(v) for k, v in values.items()})
        target = Ring(tuple(n for n in ring.names if n not in values))
        return fixed.change_ring(target)


@dataclass(frozen=True)
class RootBase:
    """База корней α_1..α_{n+1}, Σα_j = 0, свободные параметры α_1..α_n"""

    n: int
    ring: Ring
    root_vars: Tuple[str, ...]

    def alpha(self, j: int) -> Polynomial:
        if not 1 <= j <= self.n + 1:
            raise InvalidArgumentError(f"Индекс корня {j} вне 1..{self.n + 1}")
        if j <= self.n:
            return self.ring.gen(self.root_vars[j - 1])
        total = self.ring.zero()
        for name in self.root_vars:
            total = total - self.ring.gen(name)
        return total

    def alphas(self) -> List[Polynomial]:
        return [self.alpha(j) for j in range(1, self.n + 2)]

    def relation_holds(self) -> bool:
        total = self.ring.zero()
        for a in self.alphas():
            total = total + a
        return total.is_zero()

    def elementary_symmetric(self, k: int) -> Polynomial:
        total = self.ring.zero()
        for combo in itertools.combinations(self.alphas(), k):
            total = total + polynomial_product(combo, self.ring)
        return total

    def partial_product(self, i: int, ring: Optional[Ring] = None) -> Polynomial:
        """P_i = ∏_{j≤i} (z − α_j)"""
        ring = ring or self.ring
        z = ring.gen("z")
        return polynomial_product((z - a.change_ring(ring) for a in self.alphas()[:i]), ring)


class ResolutionBuilder:
    """Одновременное разрешение A_n и малые разрешения узла"""

    def __init__(self, config: Optional[RunConfig] = None, deformations: Optional[DeformationBuilder] = None):
        self.config = config or SETTINGS
        self.deformations = deformations or DeformationBuilder(self.config)
        self.ops: IdealOperations = self.deformations.ops
        self.engine = self.ops.engine

    # ------------------------------------------------------------ A_n

    def an_base_change(self, n: int) -> Tuple[RootBase, Ideal]:
        """xy = ∏ (z − α_j) после замены базы, α_{n+1} = −(α_1 + … + α_n)"""
        if n < 1:
            raise InvalidArgumentError("Для замены базы нужно n ≥ 1")
        roots = tuple(f"a{j}" for j in range(1, n + 1))
        ring = Ring(("x", "y", "z") + roots)
        base = RootBase(n, ring, roots)
        x, y = ring.gen("x"), ring.gen("y")
        equation = x * y - base.partial_product(n + 1)
        return base, Ideal(ring, (equation,))

    def elementary_symmetric_identity(self, n: int) -> bool:
        """t_i = (−1)^{k+1} e_k(α), k = n+2−i, переводит семейство в xy − ∏(z − α_j)"""
        base, total = self.an_base_change(n)
        normal = SingularityAnalyzer.normal_form(ADEType("A", n))
        family = self.deformations.semiuniversal_family([normal])
        mapping = {}
        for i, name in enumerate(family.parameters, start=1):
            k = n + 2 - i
            mapping[name] = base.elementary_symmetric(k).scale((-1) ** (k + 1))
        specialized = family.equations[0].substitute(mapping, target=base.ring)
        return specialized == total.generators[0]

    @SystemHelpers.timer
    def an_simultaneous_resolution(self, n: int) -> ChartedVariety:
        if n < 1:
            raise InvalidArgumentError("Для разрешения нужно n ≥ 1")
        if n > self.config.CHART_CAP:
            raise ChartCapExceededError(
                f"n = {n} превышает ограничение CHART_CAP = {self.config.CHART_CAP}",
                {'cap': self.config.CHART_CAP},
            )
        base, total = self.an_base_change(n)
        charts = []
        for choice in itertools.product((0, 1), repeat=n):
            names = [f"p{i}" if side == 0 else f"q{i}" for i, side in enumerate(choice, start=1)]
            ring = base.ring.extend(*names)
            x = ring.gen("x")
            gens = [total.generators[0].change_ring(ring)]
            for i, (name, side) in enumerate(zip(names, choice), start=1):
                coord = ring.gen(name)
                P = base.partial_product(i, ring)
                gens.append(x * coord - P if side == 0 else P * coord - x)
            ideal = Ideal(ring, tuple(gens))
            for i in range(1, n + 1):
                ideal = self.ops.saturate(ideal, Ideal(ring, (x, base.partial_product(i, ring))))
            certificate = self.ops.is_smooth(ideal, n + 2)
            logger.info(f"Карта {','.join(names)}: {certificate.verdict.value}")
            charts.append(Chart(",".join(names), ideal, n + 2, certificate))

        note = (
            f"Для каждого i = 1..{n} отображение φ_i = (x : P_i), P_i = ∏_{{j≤i}} (z − α_j); "
            "карта p_i: p_i = P_i/x, карта q_i: q_i = x/P_i; на пересечении p_i·q_i = 1."
        )
        return ChartedVariety(tuple(charts), note, base.root_vars)

    def exceptional_locus(self, variety: ChartedVariety, name: str) -> Tuple[Ideal, int]:
        """Прообраз начала координат над α = 0 в карте и его размерность"""
        chart = variety.chart(name)
        ring = chart.ideal.ring
        zeros = [ring.gen(v) for v in ("x", "y", "z") + variety.base_parameters if v in ring.names]
        locus = self.engine.reduced_ideal(chart.ideal.extended(zeros))
        return locus, self.engine.dimension(locus)

    def sample_fibers(
        self, variety: ChartedVariety, count: int = 10, seed: Optional[int] = None
    ) -> List[Tuple[str, Tuple[Fraction, ...], SmoothnessCertificate]]:
        """Гладкость слоев над α = 0 и count−1 случайными рациональными точками базы"""
        rng = np.random.default_rng(self.config.SEED if seed is None else seed)
        params = variety.base_parameters
        points = [tuple(Fraction(0) for _ in params)]
        while len(points) < count:
            points.append(tuple(Fraction(int(v)) for v in rng.integers(-3, 4, size=len(params))))
        results = []
        for chart in variety.charts:
            for point in points:
                fiber = variety.fiber(chart.name, dict(zip(params, point)))
                certificate = self.ops.is_smooth(fiber, chart.expected_dim - len(params))
                results.append((chart.name, point, certificate))
        return results

    # ------------------------------------------------------------ узел

    @staticmethod
    def _node_chart(chart_var: str, sign: int, inverse: bool) -> Ideal:
        """Карта малого разрешения; sign = +1 для 𝒮, −1 для 𝒮′"""
        ring = Ring(NODE_CHART_VARS + (chart_var,))
        u, v, w, tau, c = ring.gens()
        minus, plus = w - tau * sign, w + tau * sign
        if inverse:
            gens = (u - minus * c, plus - v * c)
        else:
            gens = (u * c - minus, plus * c - v)
        return Ideal(ring, gens)

    def node_small_resolutions(self) -> Tuple[ChartedVariety, ChartedVariety]:
        varieties = []
        for sign, var, note in (
            (1, "xi", "ξ = (w−τ)/u = v/(w+τ); карта xi_inv: xi_inv = 1/ξ"),
            (-1, "eta", "η = (w+τ)/u = v/(w−τ); карта eta_inv: eta_inv = 1/η"),
        ):
            charts = []
            for name, inverse in ((var, False), (f"{var}_inv", True)):
                ideal = self._node_chart(name, sign, inverse)
                certificate = self.ops.is_smooth(ideal, 3)
                charts.append(Chart(name, ideal, 3, certificate))
            varieties.append(ChartedVariety(tuple(charts), note, ("tau",)))
        return varieties[0], varieties[1]

    @staticmethod
    def swap_tau(ideal: Ideal, target: Ring) -> Ideal:
        """Подстановка τ ↦ −τ с позиционным переименованием координат"""
        tau = ideal.ring.gen("tau")
        swapped = ideal.substitute({"tau": -tau})
        return Ideal(target, tuple(g.with_ring(target) for g in swapped.generators))

    def _xi_chart_parametrization(self) -> Dict[str, Polynomial]:
        """w и v как многочлены от (u, τ, ξ) на ξ-карте 𝒮"""
        chart = self._node_chart("xi", 1, False)
        work = Ring(("v", "w", "u", "tau", "xi"))
        basis = self.engine.standard_basis(chart.change_ring(work), MonomialOrder.elimination(2, 3))
        target = Ring(("u", "tau", "xi"))
        return {
            name: self.engine.reduce(work.gen(name), basis).change_ring(target)
            for name in ("v", "w")
        }

    def flop_indeterminacy(self) -> Ideal:
        """Общие нули числителей и знаменателей всех записей η = (w+τ)/u = v/(w−τ) на ξ-карте"""
        target = Ring(("u", "tau", "xi"))
        u, tau, _ = target.gens()
        param = self._xi_chart_parametrization()
        w, v = param["w"], param["v"]
        first = (w + tau, u)
        second = (v, w - tau)
        locus = self.engine.reduced_ideal(Ideal(target, first + second))
        logger.info(f"Неопределенность флопа: {locus}")
        return locus

    def flop_is_biregular_off_center(self) -> bool:
        locus = self.flop_indeterminacy()
        tau = locus.ring.gen("tau")
        return self.engine.is_unit_ideal(self.ops.saturate(locus, Ideal(locus.ring, (tau,))))
