import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from config.settings import SETTINGS, RunConfig
from src.ideal_ops import IdealOperations
from src.polynomial import Exponent, Polynomial, Ring, exponent_divides, exponent_sub
from src.standard_basis import Ideal
from utils.errors import IdentityElementError, InvalidArgumentError, NonInvariantGeneratorError, RingMismatchError

logger = logging.getLogger(__name__)

Signs = Tuple[int, ...]

STANDARD_SOURCE = ("u", "v", "w", "t")
STANDARD_TARGET = ("x", "y", "z", "s", "t")


@dataclass(frozen=True)
class DiagonalAction:
    """Диагональное действие (Z/2)^k: у каждой образующей вектор знаков по переменным"""

    ring: Ring
    generators: Tuple[Signs, ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        gens = tuple(tuple(g) for g in self.generators)
        object.__setattr__(self, 'generators', gens)
        for g in gens:
            if len(g) != self.ring.nvars or any(s not in (1, -1) for s in g):
                raise InvalidArgumentError(
                    f"Характер {g} должен состоять из ±1 и иметь длину {self.ring.nvars}"
                )
        if not self.labels:
            object.__setattr__(self, 'labels', tuple(f"g{i}" for i in range(1, len(gens) + 1)))

    @classmethod
    def standard_action(cls) -> "DiagonalAction":
        """σ₁(u,v,w) = (u,v,−w), σ₂(u,v,w) = (−u,−v,w); t неподвижен"""
        ring = Ring(STANDARD_SOURCE)
        return cls(ring, ((1, 1, -1, 1), (-1, -1, 1, 1)), ("sigma1", "sigma2"))

    @classmethod
    def with_tau_flip(cls) -> "DiagonalAction":
        """σ₁, σ₂ и σ₄(u,v,w,τ) = (u,v,w,−τ)"""
        ring = Ring(("u", "v", "w", "tau"))
        return cls(ring, ((1, 1, -1, 1), (-1, -1, 1, 1), (1, 1, 1, -1)), ("sigma1", "sigma2", "sigma4"))

    def element(self, word: Sequence[int]) -> Signs:
        """Произведение образующих с указанными индексами"""
        signs = [1] * self.ring.nvars
        for idx in word:
            if not 0 <= idx < len(self.generators):
                raise InvalidArgumentError(f"Нет образующей с индексом {idx}")
            signs = [a * b for a, b in zip(signs, self.generators[idx])]
        return tuple(signs)

    def elements(self) -> List[Signs]:
        seen: List[Signs] = []
        for size in range(len(self.generators) + 1):
            for word in itertools.combinations(range(len(self.generators)), size):
                element = self.element(word)
                if element not in seen:
                    seen.append(element)
        return seen

    def is_invariant_exponent(self, exponent: Exponent) -> bool:
        for g in self.generators:
            sign = 1
            for s, e in zip(g, exponent):
                if s == -1 and e % 2:
                    sign = -sign
            if sign != 1:
                return False
        return True

    def is_invariant(self, f: Polynomial) -> bool:
        return all(self.is_invariant_exponent(m) for m in f.terms)


@dataclass(frozen=True)
class InvariantRingPresentation:
    source: Ring
    target: Ring
    monomials: Tuple[Exponent, ...]
    relations: Ideal

    def generators(self) -> List[Tuple[str, Polynomial]]:
        return [(name, self.source.monomial(m)) for name, m in zip(self.target.names, self.monomials)]

    def pull_back(self, f: Polynomial) -> Polynomial:
        """Подстановка инвариантных мономов вместо координат фактора"""
        if f.ring != self.target:
            raise RingMismatchError(f"Ожидался многочлен из {self.target}")
        mapping = {i: self.source.monomial(m) for i, m in enumerate(self.monomials)}
        return f.substitute(mapping, target=self.source)


@dataclass(frozen=True)
class QuotientResult:
    ideal: Ideal
    elimination: Ideal
    certified: bool


def _hilbert_sort_key(exponent: Exponent) -> Tuple:
    support = [i for i, e in enumerate(exponent) if e]
    return (max(support), len(support) > 1, tuple(reversed(exponent)))


class BidoubleQuotient:
    """Кольца инвариантов и факторы семейств по диагональным действиям"""

    def __init__(self, config: Optional[RunConfig] = None, ops: Optional[IdealOperations] = None):
        self.config = config or SETTINGS
        self.ops = ops or IdealOperations(self.config)
        self.engine = self.ops.engine

    def hilbert_basis(self, act: DiagonalAction) -> List[Exponent]:
        """Неразложимые инвариантные показатели (все показатели ≤ 2)"""
        n = act.ring.nvars
        invariant = [
            e for e in itertools.product(range(3), repeat=n)
            if any(e) and act.is_invariant_exponent(e)
        ]
        irreducible = []
        for e in invariant:
            reducible = any(
                d != e and exponent_divides(d, e) and act.is_invariant_exponent(exponent_sub(e, d))
                for d in invariant
            )
            if not reducible:
                irreducible.append(e)
        return sorted(irreducible, key=_hilbert_sort_key)

    def _internal_rings(self, source: Ring, count: int) -> Tuple[Ring, Ring, Ring]:
        src = Ring(tuple(f"_s{i}" for i in range(source.nvars)))
        tgt = Ring(tuple(f"_y{k}" for k in range(count)))
        return src, tgt, Ring(src.names + tgt.names)

    def _graph_ideal(self, source: Ring, monomials: Sequence[Exponent]) -> Tuple[Ring, Ring, Ring, List[Polynomial]]:
        src, tgt, big = self._internal_rings(source, len(monomials))
        gens = []
        for k, m in enumerate(monomials):
            gens.append(big.gen(f"_y{k}") - big.monomial(tuple(m) + (0,) * len(monomials)))
        return src, tgt, big, gens

    def invariant_ring(self, act: DiagonalAction, names: Optional[Sequence[str]] = None) -> InvariantRingPresentation:
        monomials = self.hilbert_basis(act)
        if names is None:
            names = [f"y{k}" for k in range(1, len(monomials) + 1)]
        if len(names) != len(monomials):
            raise InvalidArgumentError(
                f"Нужно {len(monomials)} имен для образующих кольца инвариантов, получено {len(names)}"
            )
        target = Ring(tuple(names))
        src, tgt, big, gens = self._graph_ideal(act.ring, monomials)
        eliminated = self.ops.eliminate(Ideal(big, tuple(gens)), src.names)
        relations = Ideal(target, tuple(g.change_ring(tgt).with_ring(target) for g in eliminated.generators))
        logger.info(f"Кольцо инвариантов: {len(monomials)} образующих, {len(relations)} соотношений")
        return InvariantRingPresentation(act.ring, target, tuple(monomials), relations)

    def rewrite(self, f: Polynomial, presentation: InvariantRingPresentation) -> Polynomial:
        """Запись инвариантного многочлена в координатах фактора"""
        target = presentation.target
        result = target.zero()
        for m, c in f.terms.items():
            exponent = [0] * target.nvars
            rest = m
            while any(rest):
                for k, g in enumerate(presentation.monomials):
                    if exponent_divides(g, rest):
                        exponent[k] += 1
                        rest = exponent_sub(rest, g)
                        break
                else:
                    raise NonInvariantGeneratorError(f"Моном {f.ring.monomial(m)} не инвариантен")
            result = result + target.monomial(tuple(exponent), c)
        return result

    def quotient_family(
        self, total: Ideal, act: DiagonalAction, presentation: Optional[InvariantRingPresentation] = None
    ) -> QuotientResult:
        if total.ring != act.ring:
            raise RingMismatchError(f"Идеал из {total.ring}, действие на {act.ring}")
        for g in total.generators:
            if not act.is_invariant(g):
                raise NonInvariantGeneratorError(f"Образующая {g} не инвариантна", {'generator': g})
        presentation = presentation or self.invariant_ring(act)
        rewritten = [self.rewrite(g, presentation) for g in total.generators]
        ideal = Ideal(presentation.target, tuple(rewritten) + presentation.relations.generators)
        image = self.image_ideal(total, presentation)
        certified = self.engine.same_ideal(ideal, image)
        return QuotientResult(ideal, image, certified)

    def image_ideal(self, ideal: Ideal, presentation: InvariantRingPresentation) -> Ideal:
        """Образ V(I) в факторе: (I + (y_k − m_k)) ∩ ℚ[y]"""
        src, tgt, big, gens = self._graph_ideal(presentation.source, presentation.monomials)
        pulled = [g.with_ring(src).change_ring(big) for g in ideal.generators]
        eliminated = self.ops.eliminate(Ideal(big, tuple(gens + pulled)), src.names)
        target = presentation.target
        return Ideal(target, tuple(g.change_ring(tgt).with_ring(target) for g in eliminated.generators))

    def fixed_locus(self, act: DiagonalAction, g: Signs, on: Ideal) -> Ideal:
        """Переменные с характером −1 плюс уравнения on"""
        g = tuple(g)
        if len(g) != act.ring.nvars:
            raise InvalidArgumentError(f"Элемент группы {g} не подходит к {act.ring}")
        if all(s == 1 for s in g):
            raise IdentityElementError("Неподвижное множество тождественного элемента совпадает со всем пространством")
        moved = [act.ring.gen(i) for i, s in enumerate(g) if s == -1]
        return self.engine.reduced_ideal(on.extended(moved))

    def fixed_locus_image(
        self, act: DiagonalAction, g: Signs, on: Ideal, presentation: Optional[InvariantRingPresentation] = None
    ) -> Ideal:
        presentation = presentation or self.invariant_ring(act)
        return self.engine.reduced_ideal(self.image_ideal(self.fixed_locus(act, g, on), presentation))
