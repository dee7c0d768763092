import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from config.settings import SETTINGS, RunConfig
from src.ideal_ops import IdealOperations
from src.monomial_order import LEX
from src.polynomial import Polynomial, Ring
from src.singular import SingularityAnalyzer, SingularityReport, T1Presentation
from src.standard_basis import Ideal
from utils.errors import (
    InvalidArgumentError,
    ParameterCountError,
    PositiveDimensionalLocusError,
    ResourceLimitError,
    RingMismatchError,
)
from utils.helpers import SystemHelpers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeformationFamily:
    """F_j(x, t) = f_j(x) + Σ t_i g^i_j(x)"""

    ambient: Ring
    parameters: Tuple[str, ...]
    ring: Ring
    equations: Tuple[Polynomial, ...]
    originals: Tuple[Polynomial, ...]
    basis: Tuple[Tuple[Polynomial, ...], ...]

    @property
    def tau(self) -> int:
        return len(self.parameters)

    def describe(self) -> str:
        lines = [f"Переменные: {', '.join(self.ambient.names)}"]
        lines.append(f"Параметры: {', '.join(self.parameters) or '—'}")
        for j, equation in enumerate(self.equations, start=1):
            lines.append(f"F_{j} = {equation}")
        return "\n".join(lines)


@dataclass(frozen=True)
class ScannedPoint:
    """Особая точка слоя: рациональная (с отчетом) или кластер сопряженных точек"""

    ring: Ring
    coordinates: Optional[Tuple[Fraction, ...]] = None
    report: Optional[SingularityReport] = None
    t1: Optional[T1Presentation] = None
    cluster: Optional[Ideal] = None
    residue_degree: int = 1
    length: int = 1

    @property
    def is_rational(self) -> bool:
        return self.coordinates is not None

    @property
    def tau(self) -> Optional[int]:
        if self.report is not None:
            return self.report.tau
        if self.t1 is not None:
            return self.t1.tau
        return None

    @property
    def point_ideal(self) -> Ideal:
        if self.cluster is not None:
            return self.cluster
        gens = [self.ring.gen(i) - c for i, c in enumerate(self.coordinates)]
        return Ideal(self.ring, tuple(gens))


def parameter_names(ambient: Ring, count: int) -> Tuple[str, ...]:
    taken = set(ambient.names)
    names = []
    for i in range(1, count + 1):
        name = f"t{i}"
        while name in taken:
            name = "_" + name
        names.append(name)
    return tuple(names)


def reversed_coefficients(n: int) -> List[Tuple[str, str, int]]:
    """Соответствие t_i = −a_k, k = n+2−i, для семейства xy = z^{n+1} + a_2 z^{n−1} + … + a_{n+1}"""
    if n < 1:
        raise InvalidArgumentError("n должно быть не меньше 1")
    return [(f"t{i}", f"a{n + 2 - i}", -1) for i in range(1, n + 1)]


class DeformationBuilder:
    """Полууниверсальные деформации и сканирование особых точек слоев"""

    def __init__(self, config: Optional[RunConfig] = None, analyzer: Optional[SingularityAnalyzer] = None):
        self.config = config or SETTINGS
        self.analyzer = analyzer or SingularityAnalyzer(self.config)
        self.ops: IdealOperations = self.analyzer.ops
        self.engine = self.ops.engine

    def semiuniversal_family(self, fs: Sequence[Polynomial]) -> DeformationFamily:
        if not fs:
            raise InvalidArgumentError("Нужен хотя бы один многочлен")
        ambient = fs[0].ring
        if any(f.ring != ambient for f in fs):
            raise RingMismatchError("Уравнения семейства лежат в разных кольцах")

        if len(fs) == 1:
            report = self.analyzer.tjurina(fs[0])
            basis = tuple((m,) for m in report.t1_monomials())
        else:
            presentation = self.analyzer.t1_complete_intersection(fs)
            basis = tuple(presentation.representatives())

        params = parameter_names(ambient, len(basis))
        ring = ambient.extend(*params)
        equations = []
        for j, f in enumerate(fs):
            F = f.change_ring(ring)
            for name, vector in zip(params, basis):
                if not vector[j].is_zero():
                    F = F + ring.gen(name) * vector[j].change_ring(ring)
            equations.append(F)
        logger.info(f"Полууниверсальное семейство: {len(params)} параметров")
        return DeformationFamily(ambient, params, ring, tuple(equations), tuple(fs), basis)

    def fiber_at(self, family: DeformationFamily, values: Sequence) -> Ideal:
        if len(values) != family.tau:
            raise ParameterCountError(
                f"Ожидалось {family.tau} значений параметров, получено {len(values)}",
                {'expected': family.tau, 'actual': len(values)},
            )
        mapping = {name: Fraction(v) for name, v in zip(family.parameters, values)}
        gens = [F.substitute(mapping).change_ring(family.ambient) for F in family.equations]
        return Ideal(family.ambient, tuple(gens))

    @SystemHelpers.timer
    def fiber_singularity_scan(self, family: DeformationFamily, values: Sequence) -> List[ScannedPoint]:
        fiber = self.fiber_at(family, values)
        ring = family.ambient
        codim = len(family.equations)
        if fiber.is_zero():
            raise PositiveDimensionalLocusError("Слой совпадает со всем пространством")
        singular = self.ops.singular_locus_ideal(fiber, codim)
        if self.engine.is_unit_ideal(singular):
            return []
        if self.engine.dimension(singular) > 0:
            raise PositiveDimensionalLocusError(
                f"Особое множество слоя при t={list(values)} положительной размерности"
            )

        points: List[Tuple[Fraction, ...]] = []
        clusters: List[Tuple[Ideal, int]] = []
        self._isolate(list(singular.generators), ring, list(range(ring.nvars)), {}, points, clusters)

        scanned = []
        for coords in sorted(points):
            shift = {i: ring.gen(i) + c for i, c in enumerate(coords)}
            translated = [g.substitute(shift) for g in fiber.generators]
            if codim == 1:
                f = translated[0]
                report = self.analyzer.analyze(f) if ring.nvars == 3 else self.analyzer.tjurina(f)
                scanned.append(ScannedPoint(ring, coords, report=report))
            else:
                t1 = self.analyzer.t1_complete_intersection(translated)
                scanned.append(ScannedPoint(ring, coords, t1=t1))
        for cluster, degree in clusters:
            length = self._cluster_length(singular, cluster)
            scanned.append(ScannedPoint(ring, cluster=cluster, residue_degree=degree, length=length))
        logger.info(f"Слой t={list(values)}: {len(points)} рациональных точек, {len(clusters)} кластеров")
        return scanned

    def _cluster_length(self, singular: Ideal, cluster: Ideal) -> int:
        """Длина компоненты особого множества над кластером

        Компонента равна I + (g^s) для образующих g кластера при достаточно большом s;
        s удваивается, пока длина не перестанет расти.
        """
        power, previous = 1, None
        while power <= self.config.JET_DEGREE_CAP:
            component = singular.extended(g ** power for g in cluster.generators)
            length = self.engine.colength(component)
            if length == previous:
                return int(length)
            previous = length
            power *= 2
        raise ResourceLimitError(
            f"Длина кластера не стабилизировалась до степени {self.config.JET_DEGREE_CAP}",
            {'cluster': str(cluster)},
        )

    def _isolate(
        self,
        gens: List[Polynomial],
        ring: Ring,
        free: List[int],
        fixed: Dict[int, Fraction],
        points: List[Tuple[Fraction, ...]],
        clusters: List[Tuple[Ideal, int]],
    ) -> None:
        """Рекурсивное решение нульмерной системы по лексикографическому базису"""
        ideal = Ideal(ring, tuple(gens))
        if self.engine.is_unit_ideal(ideal):
            return
        if not free:
            points.append(tuple(fixed[i] for i in range(ring.nvars)))
            return
        basis = self.engine.standard_basis(ideal, LEX)
        last = free[-1]
        univariate = [
            g for g in basis.elements
            if not g.is_constant() and all(not any(e for k, e in enumerate(m) if k != last) for m in g.terms)
        ]
        if not univariate:
            raise PositiveDimensionalLocusError("Особое множество не нульмерно")

        for factor in self._factor_univariate(univariate[0], last):
            degree = factor.degree_in(last)
            if degree == 1:
                unit = ring.unit_exponent(last)
                root = -factor.constant_term() / factor.coefficient(unit)
                reduced = [g.substitute({last: root}) for g in basis.elements]
                self._isolate(
                    [g for g in reduced if not g.is_zero()], ring, free[:-1], {**fixed, last: root}, points, clusters
                )
            else:
                pinned = [ring.gen(i) - v for i, v in fixed.items()]
                clusters.append((Ideal(ring, basis.elements + (factor,) + tuple(pinned)), degree))

    @staticmethod
    def _factor_univariate(q: Polynomial, var: int) -> List[Polynomial]:
        """Неприводимые множители над ℚ (sympy)"""
        symbol = sympy.Symbol("X")
        coeffs = {(m[var],): sympy.Rational(c.numerator, c.denominator) for m, c in q.terms.items()}
        poly = sympy.Poly.from_dict(coeffs, symbol, domain=sympy.QQ)
        _, factors = poly.factor_list()
        result = []
        for factor, _ in factors:
            terms = {}
            for (power,), coeff in factor.as_dict().items():
                rational = sympy.Rational(coeff)
                exp = tuple(power if i == var else 0 for i in range(q.ring.nvars))
                terms[exp] = Fraction(int(rational.p), int(rational.q))
            result.append(Polynomial(q.ring, terms))
        return result

    @staticmethod
    def total_tau(scan: Sequence[ScannedPoint]) -> int:
        """Сумма чисел Тюриной по слою (кластер дает свою длину)"""
        total = 0
        for point in scan:
            total += point.tau if point.tau is not None else point.length
        return total
