import itertools
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from config.settings import SETTINGS, RunConfig
from src.monomial_order import DEGREVLEX
from src.polynomial import Exponent, Polynomial, exponent_add
from src.standard_basis import Ideal

logger = logging.getLogger(__name__)

Column = Tuple[Exponent, int]


class SparseEchelon:
    """Точное приведение строк к ступенчатому виду (разреженные строки)"""

    def __init__(self):
        self.pivots: Dict[int, Dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: Dict[int, Fraction]) -> bool:
        """Добавляет строку; True, если ранг вырос"""
        row = {c: v for c, v in row.items() if v}
        while row:
            col = min(row)
            pivot_row = self.pivots.get(col)
            if pivot_row is None:
                inv = 1 / row[col]
                self.pivots[col] = {c: v * inv for c, v in row.items()}
                return True
            factor = row[col]
            for c, v in pivot_row.items():
                updated = row.get(c, 0) - factor * v
                if updated:
                    row[c] = updated
                else:
                    row.pop(c, None)
        return False


def monomials_below(nvars: int, degree: int) -> List[Exponent]:
    """Все мономы степени < degree"""
    result = []
    for d in range(degree):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            exp = [0] * nvars
            for i in combo:
                exp[i] += 1
            result.append(tuple(exp))
    return result


class JetColengthOracle:
    """Коразмерность через линейную алгебру на струях O/(I + m^N)"""

    START_DEGREE = 4

    def __init__(self, config: Optional[RunConfig] = None):
        self.config = config or SETTINGS

    def truncated_module_colength(
        self, vectors: Sequence[Sequence[Polynomial]], components: int, nvars: int, degree: int
    ) -> Tuple[int, List[Column]]:
        """dim O^p / (подмодуль + m^N O^p) и базис из нестолбцов-пивотов"""
        monomials = monomials_below(nvars, degree)
        monomials.sort(key=DEGREVLEX.key, reverse=True)
        columns: List[Column] = [(m, j) for m in monomials for j in range(components)]
        index = {col: k for k, col in enumerate(columns)}

        echelon = SparseEchelon()
        for vector in vectors:
            orders = [p.order() for p in vector if not p.is_zero()]
            if not orders:
                continue
            bound = degree - min(orders)
            for shift in monomials:
                if sum(shift) >= bound:
                    continue
                row: Dict[int, Fraction] = {}
                for j, poly in enumerate(vector):
                    for e, c in poly.terms.items():
                        target = exponent_add(e, shift)
                        if sum(target) < degree:
                            k = index[(target, j)]
                            row[k] = row.get(k, 0) + c
                if row:
                    echelon.add(row)

        basis = [columns[k] for k in range(len(columns)) if k not in echelon.pivots]
        return len(columns) - echelon.rank, basis

    def truncated_colength(self, ideal: Ideal, degree: int) -> int:
        vectors = [[g] for g in ideal.generators]
        value, _ = self.truncated_module_colength(vectors, 1, ideal.ring.nvars, degree)
        return value

    def colength(self, ideal: Ideal, degree_cap: Optional[int] = None) -> Optional[int]:
        """Удвоение степени отсечения до совпадения двух значений; None означает «unstable»"""
        degree = degree_cap or self.START_DEGREE
        previous = None
        while degree <= self.config.JET_DEGREE_CAP:
            value = self.truncated_colength(ideal, degree)
            logger.debug(f"Струйная коразмерность при N={degree}: {value}")
            if previous is not None and value == previous:
                return value
            previous = value
            degree *= 2
        return None

    def stable_module_colength(
        self, vectors: Sequence[Sequence[Polynomial]], components: int, nvars: int, start: int = 1
    ) -> Optional[Tuple[int, List[Column]]]:
        """Наращивание N на единицу до совпадения двух соседних значений"""
        previous = None
        for degree in range(start, self.config.JET_DEGREE_CAP + 1):
            value, basis = self.truncated_module_colength(vectors, components, nvars, degree)
            if previous is not None and value == previous:
                return value, basis
            previous = value
        return None
