import functools
import logging
import math
import re
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from utils.errors import InvalidArgumentError, ResourceLimitError

logger = logging.getLogger(__name__)

# ранг, до которого порядок группы Вейля подтверждается перебором
BRUTE_FORCE_MAX_RANK = 6
BRUTE_FORCE_LIMIT = 1_000_000

_E_ORDERS = {6: 51840, 7: 2903040, 8: 696729600}


@dataclass(frozen=True, order=True)
class ADEType:
    """Метка диаграммы Дынкина: A_n (n≥1), D_n (n≥4), E_n (n=6,7,8)"""

    family: str
    rank: int

    def __post_init__(self):
        if self.family == "A" and self.rank >= 1:
            return
        if self.family == "D" and self.rank >= 4:
            return
        if self.family == "E" and self.rank in (6, 7, 8):
            return
        raise InvalidArgumentError(f"Недопустимый тип ADE: {self.family}{self.rank}")

    @classmethod
    def parse(cls, label: str) -> "ADEType":
        match = re.fullmatch(r"\s*([ADEade])_?\{?(\d+)\}?\s*", label)
        if not match:
            raise InvalidArgumentError(f"Не удалось разобрать тип ADE: {label!r}")
        return cls(match.group(1).upper(), int(match.group(2)))

    def __str__(self):
        return f"{self.family}{self.rank}"


def dynkin_edges(t: ADEType) -> List[Tuple[int, int]]:
    n = t.rank
    if t.family == "A":
        return [(i, i + 1) for i in range(n - 1)]
    if t.family == "D":
        chain = [(i, i + 1) for i in range(n - 2)]
        return chain + [(n - 3, n - 1)]
    # E_n: цепочка из n-1 вершин и ветвь у третьей вершины
    chain = [(i, i + 1) for i in range(n - 2)]
    return chain + [(2, n - 1)]


def cartan_matrix(t: ADEType) -> np.ndarray:
    """2·I − матрица смежности диаграммы"""
    matrix = 2 * np.eye(t.rank, dtype=np.int64)
    for i, j in dynkin_edges(t):
        matrix[i, j] = matrix[j, i] = -1
    return matrix


def closed_form_weyl_order(t: ADEType) -> int:
    if t.family == "A":
        return math.factorial(t.rank + 1)
    if t.family == "D":
        return 2 ** (t.rank - 1) * math.factorial(t.rank)
    return _E_ORDERS[t.rank]


def weyl_group_name(t: ADEType) -> str:
    if t.family == "A":
        return f"S_{{{t.rank + 1}}}"
    if t.family == "D":
        return f"(Z/2)^{{{t.rank - 1}}} ⋊ S_{{{t.rank}}}"
    return f"W(E_{t.rank})"


def simple_reflections(cartan: np.ndarray) -> List[np.ndarray]:
    """Матрицы отражений в базисе простых корней: s_i(α_j) = α_j − A_ij α_i"""
    rank = cartan.shape[0]
    identity = np.eye(rank, dtype=np.int64)
    reflections = []
    for i in range(rank):
        s = identity.copy()
        s[i, :] -= cartan[i, :]
        reflections.append(s)
    return reflections


@functools.lru_cache(maxsize=None)
def brute_force_weyl_order(t: ADEType, limit: int = BRUTE_FORCE_LIMIT) -> int:
    """Порождение группы Вейля простыми отражениями (обход в ширину)"""
    generators = simple_reflections(cartan_matrix(t))
    identity = np.eye(t.rank, dtype=np.int64)
    seen = {identity.tobytes()}
    frontier = [identity]
    while frontier:
        following = []
        for element in frontier:
            for s in generators:
                product = element @ s
                key = product.tobytes()
                if key not in seen:
                    seen.add(key)
                    following.append(product)
        if len(seen) > limit:
            raise ResourceLimitError(
                f"Перебор группы Вейля {t} превысил {limit} элементов", {'limit': limit}
            )
        frontier = following
    logger.debug(f"Группа Вейля {t}: перечислено {len(seen)} элементов")
    return len(seen)
