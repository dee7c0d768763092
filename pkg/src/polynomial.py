import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from utils.errors import RingMismatchError, VariableIndexError

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def exponent_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def exponent_sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def exponent_divides(a: Exponent, b: Exponent) -> bool:
    """a | b для мономов"""
    return all(x <= y for x, y in zip(a, b))


def exponent_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def exponent_coprime(a: Exponent, b: Exponent) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


@dataclass(frozen=True)
class Ring:
    """Кольцо ℚ[x₁,…,xₙ]: упорядоченный список имен переменных"""

    names: Tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, 'names', names)
        if len(set(names)) != len(names):
            raise VariableIndexError(f"Повторяющиеся имена переменных: {names}")
        for name in names:
            if not _IDENTIFIER.match(name):
                raise VariableIndexError(f"Недопустимое имя переменной: {name!r}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, var: Union[int, str]) -> int:
        if isinstance(var, str):
            try:
                return self.names.index(var)
            except ValueError:
                raise VariableIndexError(f"Переменная {var!r} отсутствует в кольце {self.names}") from None
        if not 0 <= var < self.nvars:
            raise VariableIndexError(f"Индекс переменной {var} вне диапазона 0..{self.nvars - 1}")
        return var

    def zero_exponent(self) -> Exponent:
        return (0,) * self.nvars

    def unit_exponent(self, var: Union[int, str]) -> Exponent:
        i = self.index(var)
        return tuple(1 if j == i else 0 for j in range(self.nvars))

    def gen(self, var: Union[int, str]) -> "Polynomial":
        return Polynomial(self, {self.unit_exponent(var): Fraction(1)}, _trusted=True)

    def gens(self) -> List["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def const(self, value: Scalar) -> "Polynomial":
        return Polynomial(self, {self.zero_exponent(): Fraction(value)})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {}, _trusted=True)

    def one(self) -> "Polynomial":
        return self.const(1)

    def monomial(self, exponent: Exponent, coeff: Scalar = 1) -> "Polynomial":
        return Polynomial(self, {tuple(exponent): Fraction(coeff)})

    def extend(self, *names: str) -> "Ring":
        return Ring(self.names + tuple(names))

    def fresh_name(self, stem: str) -> str:
        """Имя, не занятое в кольце"""
        candidate, k = stem, 0
        while candidate in self.names:
            k += 1
            candidate = f"{stem}{k}"
        return candidate

    def __str__(self):
        return f"QQ[{','.join(self.names)}]"


class Polynomial:
    """Разреженный многочлен с точными рациональными коэффициентами

    terms: {экспонента -> Fraction}; нулевые коэффициенты не хранятся,
    у нулевого многочлена словарь пуст.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Optional[Mapping[Exponent, Scalar]] = None, _trusted: bool = False):
        self.ring = ring
        if _trusted:
            self.terms: Dict[Exponent, Fraction] = dict(terms) if terms else {}
        else:
            self.terms = {}
            for exp, coeff in (terms or {}).items():
                coeff = Fraction(coeff)
                if coeff != 0:
                    exp = tuple(exp)
                    if len(exp) != ring.nvars or any(e < 0 for e in exp):
                        raise VariableIndexError(f"Экспонента {exp} не подходит к кольцу {ring}")
                    self.terms[exp] = coeff
        self._hash = None

    # ------------------------------------------------------------ приведение

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(
                    f"Многочлены из разных колец: {self.ring} и {other.ring}",
                    {'left': self.ring, 'right': other.ring},
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # ------------------------------------------------------------ арифметика

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        res = dict(self.terms)
        for m, c in other.terms.items():
            v = res.get(m, 0) + c
            if v:
                res[m] = v
            else:
                res.pop(m, None)
        return Polynomial(self.ring, res, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        res: Dict[Exponent, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = exponent_add(m1, m2)
                v = res.get(m, 0) + c1 * c2
                if v:
                    res[m] = v
                else:
                    res.pop(m, None)
        return Polynomial(self.ring, res, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if not isinstance(power, int) or power < 0:
            raise ValueError("Степень должна быть натуральным числом")
        result = self.ring.one()
        base = self
        while power:
            if power & 1:
                result = result * base
            power >>= 1
            if power:
                base = base * base
        return result

    def scale(self, factor: Scalar) -> "Polynomial":
        factor = Fraction(factor)
        if factor == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {m: c * factor for m, c in self.terms.items()}, _trusted=True)

    def mul_term(self, exponent: Exponent, coeff: Scalar) -> "Polynomial":
        coeff = Fraction(coeff)
        if coeff == 0:
            return self.ring.zero()
        return Polynomial(
            self.ring,
            {exponent_add(m, exponent): c * coeff for m, c in self.terms.items()},
            _trusted=True,
        )

    # ------------------------------------------------------------ сравнение

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # ------------------------------------------------------------ свойства

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(self.ring.zero_exponent(), Fraction(0))

    def total_degree(self) -> int:
        """Полная степень; у нулевого многочлена -1"""
        return max((sum(m) for m in self.terms), default=-1)

    def order(self) -> int:
        """Наименьшая степень монома (порядок в нуле); у нуля -1"""
        return min((sum(m) for m in self.terms), default=-1)

    def degree_in(self, var: Union[int, str]) -> int:
        i = self.ring.index(var)
        return max((m[i] for m in self.terms), default=-1)

    def support(self) -> List[int]:
        """Индексы переменных, реально входящих в многочлен"""
        return [i for i in range(self.ring.nvars) if any(m[i] for m in self.terms)]

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial(
            self.ring, {m: c for m, c in self.terms.items() if sum(m) == degree}, _trusted=True
        )

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    # ------------------------------------------------------------ анализ

    def derivative(self, var: Union[int, str]) -> "Polynomial":
        i = self.ring.index(var)
        res = {}
        for m, c in self.terms.items():
            if m[i]:
                dm = m[:i] + (m[i] - 1,) + m[i + 1:]
                res[dm] = c * m[i]
        return Polynomial(self.ring, res, _trusted=True)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.ring.nvars:
            raise VariableIndexError(f"Ожидалось {self.ring.nvars} координат, получено {len(point)}")
        point = [Fraction(p) for p in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            value = c
            for x, e in zip(point, m):
                if e:
                    value *= x ** e
            total += value
        return total

    def substitute(
        self,
        mapping: Mapping[Union[int, str], Union["Polynomial", Scalar]],
        target: Optional[Ring] = None,
    ) -> "Polynomial":
        """Подстановка многочленов вместо переменных

        Переменные без подстановки переходят в одноименные переменные
        целевого кольца (по умолчанию того же самого).
        """
        target = target or self.ring
        images: List[Optional[Polynomial]] = [None] * self.ring.nvars
        for var, value in mapping.items():
            i = self.ring.index(var)
            if isinstance(value, Polynomial):
                if value.ring != target:
                    raise RingMismatchError(f"Подстановка из кольца {value.ring}, ожидалось {target}")
                images[i] = value
            else:
                images[i] = target.const(value)
        for i in range(self.ring.nvars):
            if images[i] is None and any(m[i] for m in self.terms):
                images[i] = target.gen(self.ring.names[i])

        power_cache: Dict[Tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = images[i] ** e
            return power_cache[key]

        result = target.zero()
        for m, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def change_ring(self, target: Ring) -> "Polynomial":
        """Перенос в другое кольцо по именам переменных"""
        if target == self.ring:
            return self
        index_map = []
        for i, name in enumerate(self.ring.names):
            if name in target.names:
                index_map.append(target.names.index(name))
            elif any(m[i] for m in self.terms):
                raise RingMismatchError(f"Переменная {name!r} отсутствует в кольце {target}")
            else:
                index_map.append(None)
        res = {}
        for m, c in self.terms.items():
            new = [0] * target.nvars
            for i, e in enumerate(m):
                if e:
                    new[index_map[i]] = e
            res[tuple(new)] = c
        return Polynomial(target, res, _trusted=True)

    def with_ring(self, target: Ring) -> "Polynomial":
        """Позиционное переименование переменных (то же число переменных)"""
        if target.nvars != self.ring.nvars:
            raise RingMismatchError(f"Разное число переменных: {self.ring} и {target}")
        return Polynomial(target, self.terms, _trusted=True)

    def exact_divide(self, divisor: "Polynomial") -> "Polynomial":
        """Деление нацело; ValueError, если не делится"""
        from src.monomial_order import DEGREVLEX

        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("Деление многочлена на ноль")
        lead = DEGREVLEX.leading_exponent(divisor.terms)
        lead_coeff = divisor.terms[lead]
        rest = dict(self.terms)
        quotient: Dict[Exponent, Fraction] = {}
        while rest:
            m = DEGREVLEX.leading_exponent(rest)
            if not exponent_divides(lead, m):
                raise ValueError("Многочлен не делится нацело")
            q_exp = exponent_sub(m, lead)
            q_coeff = rest[m] / lead_coeff
            quotient[q_exp] = q_coeff
            for e, c in divisor.terms.items():
                key = exponent_add(e, q_exp)
                v = rest.get(key, 0) - q_coeff * c
                if v:
                    rest[key] = v
                else:
                    rest.pop(key, None)
        return Polynomial(self.ring, quotient, _trusted=True)

    # ------------------------------------------------------------ печать

    def to_string(self) -> str:
        """Запись в грамматике CLI (обратимо разбирается parse_polynomial)"""
        from src.monomial_order import DEGREVLEX

        if not self.terms:
            return "0"
        parts = []
        for idx, m in enumerate(DEGREVLEX.sorted_exponents(self.terms, descending=True)):
            c = self.terms[m]
            body = _format_term(abs(c), m, self.ring.names)
            if idx == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.to_string()!r}, {self.ring})"


def _format_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _format_term(coeff: Fraction, exponent: Exponent, names: Sequence[str]) -> str:
    factors = []
    for name, e in zip(names, exponent):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    if not factors:
        return _format_rational(coeff)
    if coeff == 1:
        return "*".join(factors)
    return "*".join([_format_rational(coeff)] + factors)


def polynomial_product(factors: Iterable[Polynomial], ring: Ring) -> Polynomial:
    result = ring.one()
    for f in factors:
        result = result * f
    return result
