import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy

from config.settings import SETTINGS, RunConfig
from src.monomial_order import MonomialOrder
from src.polynomial import Polynomial, Ring
from src.standard_basis import Ideal, StandardBasisEngine
from utils.errors import InvalidArgumentError, RingMismatchError, SaturationLimitError

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    SMOOTH = "smooth"
    SINGULAR = "singular-locus-nonempty"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SmoothnessCertificate:
    """Вердикт о гладкости и вычисленный идеал особого множества"""

    verdict: Verdict
    witness: Ideal
    eliminated: Tuple[str, ...] = ()
    note: str = ""

    @property
    def is_smooth(self) -> bool:
        return self.verdict == Verdict.SMOOTH


def jacobian_matrix(gens: Sequence[Polynomial], variables: Optional[Sequence[int]] = None) -> List[List[Polynomial]]:
    """Строки соответствуют образующим, столбцы частным производным"""
    if not gens:
        return []
    ring = gens[0].ring
    variables = list(range(ring.nvars)) if variables is None else list(variables)
    return [[g.derivative(i) for i in variables] for g in gens]


def hessian_at_origin(f: Polynomial) -> List[List[Fraction]]:
    """Матрица Гессе в нуле: коэффициенты квадратичной части"""
    n = f.ring.nvars
    hess = [[Fraction(0)] * n for _ in range(n)]
    for m, c in f.homogeneous_part(2).terms.items():
        idx = [i for i, e in enumerate(m) if e]
        if len(idx) == 1:
            i = idx[0]
            hess[i][i] = 2 * c
        else:
            i, j = idx
            hess[i][j] = c
            hess[j][i] = c
    return hess


def determinant(matrix: List[List[Polynomial]]) -> Polynomial:
    """Определитель разложением Лапласа (матрицы малого размера)"""
    size = len(matrix)
    if size == 1:
        return matrix[0][0]
    if size == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    ring = matrix[0][0].ring
    total = ring.zero()
    for col in range(size):
        entry = matrix[0][col]
        if entry.is_zero():
            continue
        minor = [row[:col] + row[col + 1:] for row in matrix[1:]]
        term = entry * determinant(minor)
        total = total + term if col % 2 == 0 else total - term
    return total


def iter_minors(matrix: List[List[Polynomial]], size: int):
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    for row_set in itertools.combinations(range(rows), size):
        for col_set in itertools.combinations(range(cols), size):
            yield determinant([[matrix[r][c] for c in col_set] for r in row_set])


def rational_rank(matrix: List[List[Fraction]]) -> int:
    if not matrix or not matrix[0]:
        return 0
    return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in matrix]).rank()


class IdealOperations:
    """Операции над идеалами поверх движка стандартных базисов"""

    def __init__(self, config: Optional[RunConfig] = None, engine: Optional[StandardBasisEngine] = None):
        self.config = config or SETTINGS
        self.engine = engine or StandardBasisEngine(self.config)

    @staticmethod
    def _same_ring(first: Ideal, second: Ideal) -> None:
        if first.ring != second.ring:
            raise RingMismatchError(f"Идеалы из разных колец: {first.ring} и {second.ring}")

    # ------------------------------------------------------------ исключение

    def eliminate(self, ideal: Ideal, names: Sequence[str]) -> Ideal:
        """I ∩ ℚ[оставшиеся переменные] (в исходном кольце)"""
        ring = ideal.ring
        drop = [ring.names[ring.index(n)] for n in names]
        if not drop:
            return self.engine.reduced_ideal(ideal)
        keep = [n for n in ring.names if n not in drop]
        work_ring = Ring(tuple(drop) + tuple(keep))
        order = MonomialOrder.elimination(*(b for b in (len(drop), len(keep)) if b))
        basis = self.engine.standard_basis(ideal.change_ring(work_ring), order)
        k = len(drop)
        kept = [g for g in basis.elements if all(not any(m[:k]) for m in g.terms)]
        logger.debug(f"Исключение {drop}: осталось {len(kept)} из {len(basis.elements)} образующих")
        return Ideal(ring, tuple(g.change_ring(ring) for g in kept))

    # ------------------------------------------------------------ пересечение и частное

    def intersect(self, first: Ideal, second: Ideal) -> Ideal:
        self._same_ring(first, second)
        ring = first.ring
        if first.is_zero() or second.is_zero():
            return Ideal(ring)
        t_name = ring.fresh_name("_t")
        big = Ring((t_name,) + ring.names)
        t = big.gen(t_name)
        gens = [t * g.change_ring(big) for g in first.generators]
        gens += [(1 - t) * g.change_ring(big) for g in second.generators]
        eliminated = self.eliminate(Ideal(big, tuple(gens)), [t_name])
        return eliminated.change_ring(ring)

    def quotient_by_polynomial(self, ideal: Ideal, g: Polynomial) -> Ideal:
        """I : (g)"""
        ring = ideal.ring
        if g.is_zero():
            return Ideal(ring, (ring.one(),))
        if g.is_constant():
            return ideal
        meet = self.intersect(ideal, Ideal(ring, (g,)))
        return Ideal(ring, tuple(h.exact_divide(g) for h in meet.generators))

    def quotient(self, ideal: Ideal, other: Ideal) -> Ideal:
        """Частное идеалов I : J = ∩ I : (g_j)"""
        self._same_ring(ideal, other)
        if other.is_zero():
            return Ideal(ideal.ring, (ideal.ring.one(),))
        result: Optional[Ideal] = None
        for g in other.generators:
            part = self.quotient_by_polynomial(ideal, g)
            result = part if result is None else self.intersect(result, part)
        return self.engine.reduced_ideal(result)

    def saturate(self, ideal: Ideal, other: Ideal) -> Ideal:
        """I : J^∞ итерацией частных до стабилизации"""
        self._same_ring(ideal, other)
        current = self.engine.reduced_ideal(ideal)
        for round_no in range(1, self.config.MAX_SATURATION_ITERATIONS + 1):
            following = self.quotient(current, other)
            # I ⊆ I:J всегда, поэтому достаточно обратного включения
            if self.engine.contains_ideal(current, following):
                logger.debug(f"Насыщение стабилизировалось за {round_no} итераций")
                return current
            current = following
        raise SaturationLimitError(
            f"Насыщение не стабилизировалось за {self.config.MAX_SATURATION_ITERATIONS} итераций",
            {'limit': self.config.MAX_SATURATION_ITERATIONS},
        )

    # ------------------------------------------------------------ особые множества

    def singular_locus_ideal(self, ideal: Ideal, codim: int) -> Ideal:
        """I + миноры порядка codim матрицы Якоби образующих"""
        if codim <= 0:
            raise InvalidArgumentError(f"Коразмерность должна быть положительной, получено {codim}")
        matrix = jacobian_matrix(list(ideal.generators))
        minors = [m for m in iter_minors(matrix, codim) if not m.is_zero()]
        return ideal.extended(minors)

    @staticmethod
    def _graph_generator(g: Polynomial) -> Optional[Tuple[int, Polynomial]]:
        """Ищет g = c·v + h с константой c ≠ 0 и h без v; возвращает (v, −h/c)"""
        for v in reversed(range(g.ring.nvars)):
            carrying = [m for m in g.terms if m[v]]
            if len(carrying) != 1:
                continue
            m = carrying[0]
            if m[v] != 1 or sum(m) != 1:
                continue
            c = g.terms[m]
            rest = Polynomial(g.ring, {e: k for e, k in g.terms.items() if e != m}, _trusted=True)
            return v, rest.scale(Fraction(-1) / c)
        return None

    def is_smooth(self, ideal: Ideal, expected_dim: int) -> SmoothnessCertificate:
        """Якобиев критерий гладкости с предварительным исключением графиков

        Образующие вида c·v + h (v не входит в h) задают изоморфизм на
        кольцо без v, поэтому их снимают подстановкой до проверки миноров.
        """
        ring = ideal.ring
        dim = self.engine.dimension(ideal)
        if dim != expected_dim:
            return SmoothnessCertificate(
                Verdict.INCONCLUSIVE,
                Ideal(ring),
                note=f"размерность {dim} вместо ожидаемой {expected_dim}",
            )

        gens = list(ideal.generators)
        eliminated: List[str] = []
        changed = True
        while changed:
            changed = False
            for idx, g in enumerate(gens):
                found = self._graph_generator(g)
                if found is None:
                    continue
                v, image = found
                eliminated.append(ring.names[v])
                gens = [h.substitute({v: image}) for k, h in enumerate(gens) if k != idx]
                gens = [h for h in gens if not h.is_zero()]
                changed = True
                break

        remaining = [i for i in range(ring.nvars) if ring.names[i] not in eliminated]
        codim = len(remaining) - expected_dim
        if not gens:
            witness = Ideal(ring, (ring.one(),))
            return SmoothnessCertificate(Verdict.SMOOTH, witness, tuple(eliminated), "график многочленного отображения")
        if codim <= 0:
            return SmoothnessCertificate(
                Verdict.INCONCLUSIVE, Ideal(ring), tuple(eliminated), "неположительная коразмерность"
            )

        matrix = jacobian_matrix(gens, remaining)
        minors = []
        for minor in iter_minors(matrix, codim):
            if minor.is_zero():
                continue
            if minor.is_constant():
                witness = Ideal(ring, (ring.one(),))
                return SmoothnessCertificate(Verdict.SMOOTH, witness, tuple(eliminated), "постоянный минор")
            minors.append(minor)

        witness = self.engine.reduced_ideal(Ideal(ring, tuple(gens) + tuple(minors)))
        verdict = Verdict.SMOOTH if self.engine.is_unit_ideal(witness) else Verdict.SINGULAR
        logger.debug(f"is_smooth: исключено {eliminated}, миноров {len(minors)}, вердикт {verdict.value}")
        return SmoothnessCertificate(verdict, witness, tuple(eliminated))
