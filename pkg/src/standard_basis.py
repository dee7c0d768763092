import heapq
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from config.settings import SETTINGS, RunConfig
from src.monomial_order import DEGREVLEX, MonomialOrder
from src.polynomial import (
    Exponent,
    Polynomial,
    Ring,
    exponent_add,
    exponent_coprime,
    exponent_divides,
    exponent_lcm,
    exponent_sub,
)
from utils.errors import InfiniteColengthError, ResourceLimitError, RingMismatchError
from utils.helpers import SystemHelpers

logger = logging.getLogger(__name__)

Terms = Dict[Exponent, Fraction]
Colength = Union[int, float]


@dataclass(frozen=True)
class Ideal:
    """Идеал, заданный конечным списком образующих (нули отбрасываются)"""

    ring: Ring
    generators: Tuple[Polynomial, ...] = ()

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero())
        for g in gens:
            if g.ring != self.ring:
                raise RingMismatchError(
                    f"Образующая {g} лежит в {g.ring}, а идеал задан в {self.ring}"
                )
        object.__setattr__(self, 'generators', gens)

    @classmethod
    def of(cls, ring: Ring, *polys: Polynomial) -> "Ideal":
        return cls(ring, tuple(polys))

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatchError(f"Сумма идеалов из разных колец: {self.ring} и {other.ring}")
        return Ideal(self.ring, self.generators + other.generators)

    def extended(self, polys: Iterable[Polynomial]) -> "Ideal":
        return Ideal(self.ring, self.generators + tuple(polys))

    def is_zero(self) -> bool:
        return not self.generators

    def change_ring(self, target: Ring) -> "Ideal":
        return Ideal(target, tuple(g.change_ring(target) for g in self.generators))

    def substitute(self, mapping: Mapping, target: Optional[Ring] = None) -> "Ideal":
        target = target or self.ring
        return Ideal(target, tuple(g.substitute(mapping, target) for g in self.generators))

    def to_strings(self) -> List[str]:
        return [g.to_string() for g in self.generators]

    def __len__(self):
        return len(self.generators)

    def __str__(self):
        return "(" + ", ".join(self.to_strings()) + ")"


@dataclass(frozen=True)
class StandardBasis:
    ring: Ring
    order: MonomialOrder
    elements: Tuple[Polynomial, ...]
    reduced: bool

    def leading_exponents(self) -> List[Exponent]:
        return [self.order.leading_exponent(g.terms) for g in self.elements]

    def is_unit(self) -> bool:
        return any(not any(lm) for lm in self.leading_exponents())

    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.elements)


class _Entry:
    """Элемент базиса во время вычисления: члены, старший моном, эксцентриситет"""

    __slots__ = ("terms", "lm", "lc", "ecart")

    def __init__(self, terms: Terms, order: MonomialOrder):
        self.terms = terms
        self.lm = order.leading_exponent(terms)
        self.lc = terms[self.lm]
        self.ecart = max(sum(e) for e in terms) - sum(self.lm)

    @classmethod
    def monic(cls, terms: Terms, order: MonomialOrder) -> "_Entry":
        entry = cls(terms, order)
        if entry.lc != 1:
            inv = 1 / entry.lc
            entry.terms = {m: c * inv for m, c in terms.items()}
            entry.lc = Fraction(1)
        return entry


def _subtract_multiple(
    target: Terms, source: Terms, shift: Exponent, factor: Fraction, limit: Optional[int] = None
) -> None:
    """target -= factor * x^shift * source (на месте); члены степени >= limit отбрасываются"""
    for e, c in source.items():
        key = exponent_add(e, shift)
        if limit is not None and sum(key) >= limit:
            continue
        v = target.get(key, 0) - factor * c
        if v:
            target[key] = v
        else:
            target.pop(key, None)


def _truncate(terms: Terms, limit: Optional[int]) -> Terms:
    if limit is None:
        return dict(terms)
    return {e: c for e, c in terms.items() if sum(e) < limit}


def _s_polynomial(a: _Entry, b: _Entry, limit: Optional[int] = None) -> Terms:
    lcm = exponent_lcm(a.lm, b.lm)
    result: Terms = {}
    _subtract_multiple(result, a.terms, exponent_sub(lcm, a.lm), -1 / a.lc, limit)
    _subtract_multiple(result, b.terms, exponent_sub(lcm, b.lm), 1 / b.lc, limit)
    return result


def enumerate_standard_monomials(lms: Sequence[Exponent], nvars: int) -> Optional[List[Exponent]]:
    """Мономы вне старшего идеала; None, если их бесконечно много"""
    if any(not any(m) for m in lms):
        return []
    bounds = []
    for i in range(nvars):
        pure = [m[i] for m in lms if m[i] > 0 and all(m[j] == 0 for j in range(nvars) if j != i)]
        if not pure:
            return None
        bounds.append(min(pure))

    found: List[Exponent] = []

    def walk(prefix: List[int]):
        exp = tuple(prefix) + (0,) * (nvars - len(prefix))
        # продолжения не уменьшают показатели: если делится сейчас, делится и дальше
        if any(exponent_divides(m, exp) for m in lms):
            return
        if len(prefix) == nvars:
            found.append(exp)
            return
        for e in range(bounds[len(prefix)]):
            walk(prefix + [e])

    walk([])
    return found


def monomials_outside(lms: Sequence[Exponent], nvars: int, degree: int) -> List[Exponent]:
    """Мономы степени < degree, не делящиеся ни на один из lms"""
    found: List[Exponent] = []

    def walk(prefix: List[int], budget: int):
        exp = tuple(prefix) + (0,) * (nvars - len(prefix))
        if any(exponent_divides(m, exp) for m in lms):
            return
        if len(prefix) == nvars:
            found.append(exp)
            return
        for e in range(budget):
            walk(prefix + [e], budget - e)

    walk([], degree)
    return found


class StandardBasisEngine:
    """Стандартные базисы: алгоритм Бухбергера (глобальные порядки) и Моры (локальный)"""

    CACHE_SIZE = 512
    REDUCTION_STEPS_PER_ELEMENT = 10
    TRUNCATION_START = 4

    def __init__(self, config: Optional[RunConfig] = None):
        self.config = config or SETTINGS
        self._cache: Dict[Tuple, StandardBasis] = {}
        self._truncated: Dict[Tuple, List[Exponent]] = {}

    # ------------------------------------------------------------ базисы

    @SystemHelpers.timer
    def standard_basis(self, ideal: Ideal, order: MonomialOrder = DEGREVLEX, reduced: bool = True) -> StandardBasis:
        key = (ideal.ring, ideal.generators, order, reduced)
        cached = self._cache.get(key)
        if cached is not None:
            return cached

        if ideal.is_zero():
            basis = StandardBasis(ideal.ring, order, (), reduced)
        elif order.is_local:
            entries = self._mora(ideal, order)
            entries = self._minimalize(entries)
            basis = self._assemble(ideal.ring, order, entries, reduced=False)
        else:
            entries = self._buchberger(ideal, order)
            entries = self._minimalize(entries)
            if reduced:
                entries = self._interreduce(entries, order)
            basis = self._assemble(ideal.ring, order, entries, reduced=reduced)

        if len(self._cache) >= self.CACHE_SIZE:
            self._cache.clear()
        self._cache[key] = basis
        return basis

    def _budget_check(self, size: int) -> None:
        if size > self.config.MAX_BASIS_ELEMENTS:
            raise ResourceLimitError(
                f"Стандартный базис превысил лимит в {self.config.MAX_BASIS_ELEMENTS} элементов",
                {'limit': self.config.MAX_BASIS_ELEMENTS},
            )

    def _buchberger(self, ideal: Ideal, order: MonomialOrder, limit: Optional[int] = None) -> List[_Entry]:
        basis: List[_Entry] = []
        for g in ideal.generators:
            reduced = self._full_normal_form(_truncate(g.terms, limit), basis, order, limit)
            if reduced:
                basis.append(_Entry.monic(reduced, order))

        queue: List[Tuple] = []
        pending = set()

        def push_pairs(new_index: int):
            lm_new = basis[new_index].lm
            for i in range(new_index):
                lcm = exponent_lcm(basis[i].lm, lm_new)
                heapq.heappush(queue, (sum(lcm), order.key(lcm), i, new_index))
                pending.add((i, new_index))

        for j in range(len(basis)):
            push_pairs(j)

        processed = 0
        while queue:
            _, _, i, j = heapq.heappop(queue)
            pending.discard((i, j))
            a, b = basis[i], basis[j]
            if exponent_coprime(a.lm, b.lm):
                continue
            lcm = exponent_lcm(a.lm, b.lm)
            if self._chain_criterion(basis, pending, i, j, lcm):
                continue
            processed += 1
            h = self._full_normal_form(_s_polynomial(a, b, limit), basis, order, limit)
            if h:
                basis.append(_Entry.monic(h, order))
                self._budget_check(len(basis))
                push_pairs(len(basis) - 1)

        logger.debug(f"Бухбергер: обработано пар {processed}, элементов базиса {len(basis)}")
        return basis

    @staticmethod
    def _chain_criterion(basis: List[_Entry], pending: set, i: int, j: int, lcm: Exponent) -> bool:
        for k, entry in enumerate(basis):
            if k in (i, j) or not exponent_divides(entry.lm, lcm):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                return True
        return False

    def _mora(self, ideal: Ideal, order: MonomialOrder) -> List[_Entry]:
        basis: List[_Entry] = [_Entry.monic(dict(g.terms), order) for g in ideal.generators]
        queue: List[Tuple] = []

        def push_pairs(new_index: int):
            lm_new = basis[new_index].lm
            for i in range(new_index):
                lcm = exponent_lcm(basis[i].lm, lm_new)
                heapq.heappush(queue, (sum(lcm), i, new_index))

        for j in range(len(basis)):
            push_pairs(j)

        processed = 0
        while queue:
            _, i, j = heapq.heappop(queue)
            processed += 1
            h = self._mora_normal_form(_s_polynomial(basis[i], basis[j]), basis, order)
            if h:
                basis.append(_Entry.monic(h, order))
                self._budget_check(len(basis))
                push_pairs(len(basis) - 1)

        logger.debug(f"Мора: обработано пар {processed}, элементов базиса {len(basis)}")
        return basis

    @staticmethod
    def _minimalize(entries: List[_Entry]) -> List[_Entry]:
        minimal: List[_Entry] = []
        for idx, entry in enumerate(entries):
            redundant = False
            for jdx, other in enumerate(entries):
                if jdx == idx or not exponent_divides(other.lm, entry.lm):
                    continue
                if other.lm != entry.lm or jdx < idx:
                    redundant = True
                    break
            if not redundant:
                minimal.append(entry)
        return minimal

    def _interreduce(self, entries: List[_Entry], order: MonomialOrder) -> List[_Entry]:
        result = []
        for idx, entry in enumerate(entries):
            others = [e for j, e in enumerate(entries) if j != idx]
            tail = dict(entry.terms)
            del tail[entry.lm]
            tail = self._full_normal_form(tail, others, order)
            tail[entry.lm] = Fraction(1)
            result.append(_Entry(tail, order))
        return result

    @staticmethod
    def _assemble(ring: Ring, order: MonomialOrder, entries: List[_Entry], reduced: bool) -> StandardBasis:
        entries = sorted(entries, key=lambda e: order.key(e.lm), reverse=True)
        elements = tuple(Polynomial(ring, e.terms, _trusted=True) for e in entries)
        return StandardBasis(ring, order, elements, reduced)

    # ------------------------------------------------------------ нормальные формы

    @staticmethod
    def _full_normal_form(
        terms: Terms, basis: List[_Entry], order: MonomialOrder, limit: Optional[int] = None
    ) -> Terms:
        rest = _truncate(terms, limit)
        remainder: Terms = {}
        while rest:
            m = order.leading_exponent(rest)
            c = rest[m]
            for entry in basis:
                if exponent_divides(entry.lm, m):
                    _subtract_multiple(rest, entry.terms, exponent_sub(m, entry.lm), c / entry.lc, limit)
                    break
            else:
                remainder[m] = c
                del rest[m]
        return remainder

    def _mora_normal_form(self, terms: Terms, basis: List[_Entry], order: MonomialOrder) -> Terms:
        """Слабая нормальная форма Моры (выбор делителя с минимальным эксцентриситетом)"""
        h = dict(terms)
        pool = list(basis)
        steps = 0
        limit = self.config.MAX_BASIS_ELEMENTS * self.REDUCTION_STEPS_PER_ELEMENT
        while h:
            lm = order.leading_exponent(h)
            best = None
            for entry in pool:
                if exponent_divides(entry.lm, lm) and (best is None or entry.ecart < best.ecart):
                    best = entry
                    if best.ecart == 0:
                        break
            if best is None:
                return h
            steps += 1
            if steps > limit:
                raise ResourceLimitError(
                    f"Нормальная форма Моры не сошлась за {limit} шагов",
                    {'limit': limit, 'terms': len(h)},
                )
            ecart_h = max(sum(e) for e in h) - sum(lm)
            if best.ecart > ecart_h:
                pool.append(_Entry(dict(h), order))
            _subtract_multiple(h, best.terms, exponent_sub(lm, best.lm), h[lm] / best.lc)
        return h

    def reduce(self, f: Polynomial, basis: StandardBasis) -> Polynomial:
        """Нормальная форма (глобальный порядок) или слабая нормальная форма (локальный)"""
        if f.ring != basis.ring:
            raise RingMismatchError(f"Многочлен из {f.ring}, базис из {basis.ring}")
        entries = [_Entry(dict(g.terms), basis.order) for g in basis.elements]
        if basis.order.is_local:
            terms = self._mora_normal_form(dict(f.terms), entries, basis.order)
        else:
            terms = self._full_normal_form(dict(f.terms), entries, basis.order)
        return Polynomial(f.ring, terms, _trusted=True)

    # ------------------------------------------------------------ запросы

    def truncated_standard_monomials(
        self, ideal: Ideal, degree: int, order: MonomialOrder = DEGREVLEX
    ) -> List[Exponent]:
        """Стандартные мономы I + m^degree (члены степени >= degree отбрасываются по ходу)"""
        key = (ideal.ring, ideal.generators, order, degree)
        cached = self._truncated.get(key)
        if cached is not None:
            return cached
        entries = self._minimalize(self._buchberger(ideal, order, limit=degree))
        monomials = monomials_outside([e.lm for e in entries], ideal.ring.nvars, degree)
        if len(self._truncated) >= self.CACHE_SIZE:
            self._truncated.clear()
        self._truncated[key] = monomials
        return monomials

    def _local_standard_monomials(self, ideal: Ideal, order: MonomialOrder) -> Optional[List[Exponent]]:
        """Стандартные мономы локального кольца через отсечение m^N

        Равенство длин для N и N+1 означает m^N ⊂ I + m^(N+1), то есть m^N ⊂ I
        в локальном кольце (Накаяма). None, если до JET_DEGREE_CAP равенства нет.
        """
        degree = self.TRUNCATION_START
        while degree <= self.config.JET_DEGREE_CAP:
            current = self.truncated_standard_monomials(ideal, degree, order)
            following = self.truncated_standard_monomials(ideal, degree + 1, order)
            if len(current) == len(following):
                return current
            logger.debug(f"Отсечение m^{degree}: {len(current)} != {len(following)}, удваиваем")
            degree *= 2
        return None

    def _all_standard_monomials(self, ideal: Ideal, order: MonomialOrder) -> Optional[List[Exponent]]:
        if order.is_local and not ideal.is_zero():
            monomials = self._local_standard_monomials(ideal, order)
            if monomials is not None:
                return monomials
        basis = self.standard_basis(ideal, order)
        return enumerate_standard_monomials(basis.leading_exponents(), ideal.ring.nvars)

    def colength(self, ideal: Ideal, order: MonomialOrder = DEGREVLEX) -> Colength:
        """Размерность фактора по идеалу (math.inf, если бесконечна)"""
        monomials = self._all_standard_monomials(ideal, order)
        return math.inf if monomials is None else len(monomials)

    def standard_monomials(self, ideal: Ideal, order: MonomialOrder = DEGREVLEX) -> List[Exponent]:
        """Базис фактора из стандартных мономов

        Глобальный порядок: по возрастанию. Локальный: от единицы вниз по порядку,
        то есть по убыванию ключа (по возрастанию степени ord).
        """
        monomials = self._all_standard_monomials(ideal, order)
        if monomials is None:
            raise InfiniteColengthError(
                "Бесконечная коразмерность: стандартных мономов бесконечно много",
                {'ideal': str(ideal)},
            )
        return sorted(monomials, key=order.key, reverse=order.is_local)

    def dimension(self, ideal: Ideal, order: MonomialOrder = DEGREVLEX) -> int:
        """Размерность Крулля V(I) по старшему идеалу (-1 для единичного идеала)

        Для локального порядка это размерность локального кольца в нуле.
        """
        basis = self.standard_basis(ideal, order)
        if basis.is_unit():
            return -1
        n = ideal.ring.nvars
        supports = [frozenset(i for i, e in enumerate(m) if e) for m in basis.leading_exponents()]
        for size in range(n, -1, -1):
            for subset in itertools.combinations(range(n), size):
                chosen = frozenset(subset)
                if not any(sup <= chosen for sup in supports):
                    return size
        return -1

    def contains(self, ideal: Ideal, f: Polynomial, order: MonomialOrder = DEGREVLEX) -> bool:
        return self.reduce(f, self.standard_basis(ideal, order)).is_zero()

    def contains_ideal(self, big: Ideal, small: Ideal) -> bool:
        basis = self.standard_basis(big)
        return all(self.reduce(g, basis).is_zero() for g in small.generators)

    def same_ideal(self, first: Ideal, second: Ideal) -> bool:
        """Равенство идеалов через редуцированные базисы degrevlex"""
        if first.ring != second.ring:
            raise RingMismatchError(f"Сравнение идеалов из разных колец: {first.ring} и {second.ring}")
        a = self.standard_basis(first).elements
        b = self.standard_basis(second).elements
        return set(a) == set(b)

    def is_unit_ideal(self, ideal: Ideal) -> bool:
        return self.standard_basis(ideal).is_unit()

    def reduced_ideal(self, ideal: Ideal, order: MonomialOrder = DEGREVLEX) -> Ideal:
        """Тот же идеал, заданный редуцированным базисом"""
        return self.standard_basis(ideal, order).ideal()
