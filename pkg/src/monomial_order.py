from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from src.polynomial import Exponent
from utils.errors import InvalidArgumentError

ORDER_KINDS = ("degrevlex", "lex", "negdegrevlex", "elimination")


def _degrevlex_key(exp: Exponent) -> Tuple:
    return (sum(exp), tuple(-e for e in reversed(exp)))


class MonomialOrder:
    """Мономиальный порядок: ключ сравнения для экспонент

    Больший ключ означает больший моном. Для локального порядка negdegrevlex
    единица является наибольшим мономом.
    """

    CACHE_SIZE = 65536

    def __init__(self, kind: str, blocks: Optional[Sequence[int]] = None):
        if kind not in ORDER_KINDS:
            raise InvalidArgumentError(f"Неизвестный мономиальный порядок: {kind}")
        if kind == "elimination":
            if not blocks or any(b <= 0 for b in blocks):
                raise InvalidArgumentError("Порядок исключения требует положительные размеры блоков")
            blocks = tuple(blocks)
        else:
            blocks = None
        self.kind = kind
        self.blocks = blocks
        self._cache: Dict[Exponent, Tuple] = {}

    @classmethod
    def elimination(cls, *blocks: int) -> "MonomialOrder":
        return cls("elimination", blocks)

    @property
    def is_local(self) -> bool:
        return self.kind == "negdegrevlex"

    def key(self, exp: Exponent) -> Tuple:
        cached = self._cache.get(exp)
        if cached is not None:
            return cached
        if self.kind == "degrevlex":
            value = _degrevlex_key(exp)
        elif self.kind == "lex":
            value = exp
        elif self.kind == "negdegrevlex":
            value = (-sum(exp), tuple(-e for e in reversed(exp)))
        else:
            if sum(self.blocks) != len(exp):
                raise InvalidArgumentError(
                    f"Блоки {self.blocks} не покрывают {len(exp)} переменных"
                )
            parts = []
            start = 0
            for size in self.blocks:
                parts.append(_degrevlex_key(exp[start:start + size]))
                start += size
            value = tuple(parts)
        if len(self._cache) >= self.CACHE_SIZE:
            self._cache.clear()
        self._cache[exp] = value
        return value

    def leading_exponent(self, exps: Iterable[Exponent]) -> Exponent:
        return max(exps, key=self.key)

    def sorted_exponents(self, exps: Iterable[Exponent], descending: bool = False) -> List[Exponent]:
        return sorted(exps, key=self.key, reverse=descending)

    def leading_term(self, terms: Mapping[Exponent, object]) -> Tuple[Exponent, object]:
        lead = self.leading_exponent(terms)
        return lead, terms[lead]

    def __eq__(self, other):
        if not isinstance(other, MonomialOrder):
            return NotImplemented
        return (self.kind, self.blocks) == (other.kind, other.blocks)

    def __hash__(self):
        return hash((self.kind, self.blocks))

    def __repr__(self):
        if self.blocks:
            return f"MonomialOrder({self.kind}, blocks={self.blocks})"
        return f"MonomialOrder({self.kind})"


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")
LOCAL = MonomialOrder("negdegrevlex")
