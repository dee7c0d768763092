import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import polars as pl
import sympy

from config.settings import SETTINGS, RunConfig
from src.ideal_ops import IdealOperations, determinant
from src.jet_oracle import monomials_below
from src.polynomial import Polynomial, Ring
from src.singular import BurnsWahlData, SingularityAnalyzer
from src.standard_basis import Ideal
from src.weyl import ADEType
from utils.errors import (
    CatalogParameterError,
    DivisibilityError,
    DivisibilityObstructionError,
    GenericityError,
    InvalidArgumentError,
    PositiveDimensionalLocusError,
)
from utils.helpers import SystemHelpers

logger = logging.getLogger(__name__)

PROJECTIVE_RING = Ring(("x", "y", "z", "w"))

# рекордные числа узлов μ(d) для малых степеней
NODAL_RECORDS = {
    2: (1, "quadric cone"),
    3: (4, "Cayley's cubic"),
    4: (16, "Kummer surfaces"),
    5: (31, "Togliatti quintics"),
    6: (65, "Barth's sextic"),
}

CHMUTOV_COEFFICIENT = Fraction(5, 12)
MIYAOKA_COEFFICIENT = Fraction(4, 9)
SEGRE_COEFFICIENT_RANGE = 3


@dataclass(frozen=True)
class SurfaceInvariants:
    """χ(O_S) = chi, K² = k2 и необязательные p_g, q, h⁰(Θ)"""

    chi: int
    k2: int
    pg: Optional[int] = None
    q: Optional[int] = None
    h0_theta: int = 0

    def __post_init__(self):
        if self.chi < 1 or self.k2 < 1:
            raise InvalidArgumentError(
                f"Для минимальной поверхности общего типа нужно χ ≥ 1 и K² ≥ 1, получено ({self.chi}, {self.k2})"
            )
        if self.h0_theta < 0:
            raise InvalidArgumentError("h⁰(Θ) не может быть отрицательным")


@dataclass(frozen=True)
class NodalRecord:
    d: int
    mu_known: Optional[int]
    witness_name: str


@dataclass(frozen=True)
class NodalBounds:
    d: int
    severi: int
    segre: Optional[int]
    chmutov_low: Fraction
    miyaoka_high: Fraction
    record: Optional[NodalRecord]

    @property
    def severi_caveat(self) -> bool:
        """Оценка Севери сформулирована для d ≥ 4"""
        return self.d < 4


@dataclass(frozen=True)
class SegreSurface:
    """L₁⋯L_d − M² в P³"""

    d: int
    ring: Ring
    linear_forms: Tuple[Polynomial, ...]
    half_form: Polynomial
    equation: Polynomial
    seed: Optional[int] = None
    attempts: int = 1

    @classmethod
    def from_forms(cls, linear_forms: Sequence[Polynomial], half_form: Polynomial, seed: Optional[int] = None, attempts: int = 1) -> "SegreSurface":
        d = len(linear_forms)
        if d < 2 or d % 2:
            raise InvalidArgumentError(f"Степень Сегре должна быть четной и ≥ 2, получено {d}")
        ring = half_form.ring
        if ring.nvars != 4:
            raise InvalidArgumentError("Поверхность Сегре задается в P³ (4 переменные)")
        for L in linear_forms:
            if L.ring != ring or not L.is_homogeneous() or L.total_degree() != 1:
                raise InvalidArgumentError(f"{L} не линейная форма")
        if not half_form.is_homogeneous() or half_form.total_degree() != d // 2:
            raise InvalidArgumentError(f"M должна быть формой степени {d // 2}")
        product = ring.one()
        for L in linear_forms:
            product = product * L
        equation = product - half_form * half_form
        return cls(d, ring, tuple(linear_forms), half_form, equation, seed, attempts)

    @property
    def expected_nodes(self) -> int:
        return self.d * self.d * (self.d - 1) // 4


@dataclass(frozen=True)
class NodeCount:
    """Особые точки поверхности; count = None, если схема неприведенная (есть точки не A1)"""

    count: Optional[int]
    all_a1: bool
    raw_colength: int
    per_chart: Tuple[int, ...] = ()

    @property
    def reduced(self) -> bool:
        return self.all_a1


@dataclass(frozen=True)
class DoubleCoverInvariants:
    invariants: SurfaceInvariants
    moduli_dim: int


@dataclass(frozen=True)
class CatalogQuery:
    family: int
    k: int
    p: Optional[int] = None
    r: Optional[int] = None


@dataclass(frozen=True)
class WeightedCatalogEntry:
    family: int
    weights: Tuple[int, int, int, int]
    degree: int
    singularities: Tuple[ADEType, ...]
    parameters: Dict[str, int] = field(default_factory=dict, compare=False, hash=False)

    def burns_wahl(self, analyzer: Optional[SingularityAnalyzer] = None) -> BurnsWahlData:
        analyzer = analyzer or SingularityAnalyzer()
        return analyzer.burns_wahl_data(self.singularities)


def _line_basis(forms: Sequence[Polynomial]) -> List[List[Fraction]]:
    """Базис ядра системы линейных форм (точки пересечения плоскостей)"""
    rows = []
    for L in forms:
        coeffs = [L.coefficient(L.ring.unit_exponent(i)) for i in range(L.ring.nvars)]
        rows.append([sympy.Rational(c.numerator, c.denominator) for c in coeffs])
    matrix = sympy.Matrix(rows)
    kernel = matrix.nullspace()
    result = []
    for vector in kernel:
        row = []
        for entry in vector:
            value = sympy.Rational(entry)
            row.append(Fraction(int(value.p), int(value.q)))
        result.append(row)
    return result


def _restrict_to_span(form: Polynomial, basis: List[List[Fraction]], ring: Ring) -> Polynomial:
    gens = ring.gens()
    mapping = {}
    for i in range(form.ring.nvars):
        image = ring.zero()
        for vector, g in zip(basis, gens):
            image = image + g * vector[i]
        mapping[i] = image
    return form.substitute(mapping, target=ring)


def _is_squarefree_binary(form: Polynomial) -> bool:
    if form.is_constant():
        return not form.is_zero()
    ds, dt = form.derivative(0), form.derivative(1)
    s, t = sympy.symbols("s t")

    def to_sympy(p: Polynomial):
        return sum(
            sympy.Rational(c.numerator, c.denominator) * s ** m[0] * t ** m[1] for m, c in p.terms.items()
        )

    common = sympy.gcd(to_sympy(ds), to_sympy(dt))
    return sympy.Poly(common, s, t).total_degree() == 0


class SurfaceCalculator:
    """Численные инварианты поверхностей общего типа и узловые поверхности"""

    def __init__(self, config: Optional[RunConfig] = None, ops: Optional[IdealOperations] = None):
        self.config = config or SETTINGS
        self.ops = ops or IdealOperations(self.config)
        self.engine = self.ops.engine

    # ------------------------------------------------------------ формулы

    @staticmethod
    def hilbert_polynomial(inv: SurfaceInvariants, m: int) -> int:
        """P(m) = h⁰(5mK) = χ + (5m−1)·5m·K²/2"""
        if m < 1:
            raise InvalidArgumentError(f"m должно быть ≥ 1, получено {m}")
        return inv.chi + (5 * m - 1) * 5 * m * inv.k2 // 2

    @classmethod
    def p5(cls, inv: SurfaceInvariants) -> int:
        """h⁰(5K) = χ + 10K², N + 1 для 5-канонического вложения"""
        return cls.hilbert_polynomial(inv, 1)

    @staticmethod
    def enriques_lower_bound(inv: SurfaceInvariants) -> int:
        return 10 * inv.chi - 2 * inv.k2 + inv.h0_theta

    @staticmethod
    def nodal_bounds(d: int) -> NodalBounds:
        if d < 2:
            raise InvalidArgumentError(f"Степень поверхности должна быть ≥ 2, получено {d}")
        severi = (d + 3) * (d + 2) * (d + 1) // 6 - 16
        segre = d * d * (d - 1) // 4 if d % 2 == 0 else None
        record = None
        if d in NODAL_RECORDS:
            mu, name = NODAL_RECORDS[d]
            record = NodalRecord(d, mu, name)
        return NodalBounds(d, severi, segre, CHMUTOV_COEFFICIENT * d ** 3, MIYAOKA_COEFFICIENT * d ** 3, record)

    @classmethod
    def smallest_segre_excess(cls, d_max: int = 40) -> Optional[int]:
        """Наименьшая четная степень, где число узлов Сегре больше оценки Севери"""
        for d in range(2, d_max + 1, 2):
            bounds = cls.nodal_bounds(d)
            if bounds.segre > bounds.severi:
                return d
        return None

    @classmethod
    def nodal_table(cls, d_max: int) -> pl.DataFrame:
        rows = [cls.nodal_bounds(d) for d in range(2, d_max + 1)]
        return pl.DataFrame({
            'd': [b.d for b in rows],
            'severi': [b.severi for b in rows],
            'segre': [b.segre for b in rows],
            'chmutov_low': [str(b.chmutov_low) for b in rows],
            'miyaoka_high': [str(b.miyaoka_high) for b in rows],
            'record': [b.record.mu_known if b.record else None for b in rows],
            'witness': [b.record.witness_name if b.record else "" for b in rows],
        })

    @staticmethod
    def isogenous_euler(g1: int, g2: int, order: int) -> int:
        """e(S) = 4(g₁−1)(g₂−1)/|G|"""
        if g1 < 2 or g2 < 2 or order < 1:
            raise InvalidArgumentError(f"Нужно g₁, g₂ ≥ 2 и |G| ≥ 1, получено ({g1}, {g2}, {order})")
        numerator = 4 * (g1 - 1) * (g2 - 1)
        if numerator % order:
            raise DivisibilityObstructionError(
                f"{numerator}/{order} не целое: свободного действия с такими данными нет",
                {'numerator': numerator, 'order': order},
            )
        return numerator // order

    @staticmethod
    def double_cover_invariants(d1: int, d2: int) -> DoubleCoverInvariants:
        if d1 < 1 or d2 < 1 or d2 % d1:
            raise DivisibilityError(f"Нужно d₁ ≥ 1 и d₁ | d₂, получено ({d1}, {d2})")
        pg = d1 * d2 + 1
        q = 2
        chi = pg - q + 1
        invariants = SurfaceInvariants(chi=chi, k2=4 * chi, pg=pg, q=q)
        return DoubleCoverInvariants(invariants, 4 * chi + 2)

    # ------------------------------------------------------------ каталог

    @staticmethod
    def weighted_catalog(query: CatalogQuery) -> List[WeightedCatalogEntry]:
        family, k = query.family, query.k
        if k < 1:
            raise CatalogParameterError(f"k должно быть ≥ 1, получено {k}")
        if family == 1:
            weights, degree = (1, 1, 2, 3), 1 + 6 * k
            singularities = (ADEType("A", 1), ADEType("A", 2))
            params = {'k': k}
        elif family == 2:
            p = query.p
            if p is None or p < 1:
                raise CatalogParameterError("Для семейства 2 нужно p ≥ 1")
            weights, degree = (1, 1, p, p + 1), p * (k * (p + 1) - 1)
            singularities = (ADEType("A", p),)
            params = {'k': k, 'p': p}
        elif family == 3:
            p, r = query.p, query.r
            if p is None or r is None or p < 2:
                raise CatalogParameterError("Для семейства 3 нужны p ≥ 2 и r")
            if r <= p - 2:
                raise CatalogParameterError(f"Нарушено условие r > p − 2: r={r}, p={p}")
            weights, degree = (1, 1, p, r * p - 1), (k * p - 1) * (r * p - 1)
            singularities = (ADEType("A", p - 1),)
            params = {'k': k, 'p': p, 'r': r}
        else:
            raise CatalogParameterError(f"Неизвестное семейство {family}; допустимы 1, 2, 3")

        p_weight, q_weight = weights[2], weights[3]
        if not degree > 2 + p_weight + q_weight:
            raise CatalogParameterError(
                f"Нарушено условие d > 2 + p + q: d={degree}, p={p_weight}, q={q_weight}",
                {'degree': degree, 'bound': 2 + p_weight + q_weight},
            )
        return [WeightedCatalogEntry(family, weights, degree, singularities, params)]

    @classmethod
    def enumerate_catalog(cls, family: int, k_max: int, p_max: int = 4, r_max: int = 4) -> Iterator[WeightedCatalogEntry]:
        """Все допустимые записи с параметрами не выше заданных"""
        p_values = [None] if family == 1 else range(1 if family == 2 else 2, p_max + 1)
        r_values = range(1, r_max + 1) if family == 3 else [None]
        for p, r, k in itertools.product(p_values, r_values, range(1, k_max + 1)):
            try:
                yield from cls.weighted_catalog(CatalogQuery(family, k, p, r))
            except CatalogParameterError:
                continue

    @staticmethod
    def catalog_table(entries: Sequence[WeightedCatalogEntry]) -> pl.DataFrame:
        return pl.DataFrame({
            'family': [e.family for e in entries],
            'weights': [str(e.weights) for e in entries],
            'd': [e.degree for e in entries],
            'singularities': [", ".join(str(t) for t in e.singularities) for e in entries],
        })

    # ------------------------------------------------------------ поверхности Сегре

    def _random_form(self, rng: np.random.Generator, degree: int) -> Polynomial:
        bound = SEGRE_COEFFICIENT_RANGE
        terms = {}
        for m in monomials_below(4, degree + 1):
            if sum(m) == degree:
                terms[m] = int(rng.integers(-bound, bound + 1))
        return Polynomial(PROJECTIVE_RING, terms)

    @staticmethod
    def genericity_failure(linear_forms: Sequence[Polynomial], half_form: Polynomial) -> Optional[str]:
        """Причина негенеричности набора (L_i, M) или None"""
        for L in linear_forms:
            if L.is_zero():
                return "нулевая линейная форма"
        binary = Ring(("s", "t"))
        for i, j in itertools.combinations(range(len(linear_forms)), 2):
            line = _line_basis([linear_forms[i], linear_forms[j]])
            if len(line) != 2:
                return f"формы L{i + 1} и L{j + 1} пропорциональны"
            restricted = _restrict_to_span(half_form, line, binary)
            if restricted.is_zero():
                return f"M тождественно равна нулю на прямой L{i + 1} = L{j + 1} = 0"
            if not _is_squarefree_binary(restricted):
                return f"M касается прямой L{i + 1} = L{j + 1} = 0"
        for triple in itertools.combinations(range(len(linear_forms)), 3):
            kernel = _line_basis([linear_forms[k] for k in triple])
            if len(kernel) != 1:
                return f"формы {', '.join(f'L{k + 1}' for k in triple)} проходят через общую прямую"
            if half_form.evaluate(kernel[0]) == 0:
                return f"M обращается в ноль в тройной точке {', '.join(f'L{k + 1}' for k in triple)}"
        return None

    def build_segre_surface(self, d: int, seed: Optional[int] = None) -> SegreSurface:
        if d < 2 or d % 2:
            raise InvalidArgumentError(f"Степень Сегре должна быть четной и ≥ 2, получено {d}")
        seed = self.config.SEED if seed is None else seed
        rng = np.random.default_rng(seed)
        reason = None
        for attempt in range(1, self.config.SEGRE_RETRIES + 1):
            forms = [self._random_form(rng, 1) for _ in range(d)]
            half = self._random_form(rng, d // 2)
            reason = self.genericity_failure(forms, half)
            if reason is None:
                logger.info(f"Поверхность Сегре степени {d} построена с попытки {attempt}")
                return SegreSurface.from_forms(forms, half, seed, attempt)
            logger.debug(f"Попытка {attempt} отвергнута: {reason}")
        raise GenericityError(
            f"Не удалось подобрать генеричные формы за {self.config.SEGRE_RETRIES} попыток: {reason}",
            {'last_failure': reason},
        )

    @SystemHelpers.timer
    def count_nodes(self, surface: SegreSurface) -> NodeCount:
        """Число особых точек с кратностью по аффинным картам P³ без повторов"""
        F = surface.equation
        ring = F.ring
        if ring.nvars != 4 or not F.is_homogeneous():
            raise InvalidArgumentError("Нужно однородное уравнение в P³")
        projective = [F] + [F.derivative(i) for i in range(4)]

        per_chart = []
        all_a1 = True
        for i in range(4):
            chart_ring = Ring(tuple(n for k, n in enumerate(ring.names) if k != i))
            gens = [g.substitute({i: 1}).change_ring(chart_ring) for g in projective]
            ideal = Ideal(chart_ring, tuple(gens))
            earlier = [chart_ring.gen(ring.names[k]) for k in range(i)]
            if earlier and self.engine.is_unit_ideal(ideal.extended(earlier)):
                per_chart.append(0)
                continue
            total = self.engine.colength(ideal)
            if total == math.inf:
                raise PositiveDimensionalLocusError(
                    f"Особое множество поверхности положительной размерности (карта {ring.names[i]} ≠ 0)"
                )
            if earlier:
                remote = self.engine.colength(self.ops.saturate(ideal, Ideal(chart_ring, tuple(earlier))))
                per_chart.append(int(total - remote))
            else:
                per_chart.append(int(total))

            if per_chart[-1] and not self._chart_all_a1(gens[0], ideal):
                all_a1 = False

        raw = sum(per_chart)
        logger.info(f"Узлы поверхности степени {surface.d}: {raw} (по картам {per_chart}), все A1: {all_a1}")
        return NodeCount(raw if all_a1 else None, all_a1, raw, tuple(per_chart))

    def _chart_all_a1(self, f: Polynomial, singular: Ideal) -> bool:
        """Все особые точки карты невырождены: I_sing + (det Hess) = (1)"""
        n = f.ring.nvars
        hessian = [[f.derivative(a).derivative(b) for b in range(n)] for a in range(n)]
        return self.engine.is_unit_ideal(singular.extended([determinant(hessian)]))
