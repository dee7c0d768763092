import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy

from config.settings import SETTINGS, RunConfig
from src.ideal_ops import IdealOperations, hessian_at_origin, jacobian_matrix, rational_rank
from src.jet_oracle import Column, JetColengthOracle
from src.monomial_order import LOCAL
from src.polynomial import Exponent, Polynomial, Ring
from src.standard_basis import Colength, Ideal
from src.weyl import (
    BRUTE_FORCE_MAX_RANK,
    ADEType,
    brute_force_weyl_order,
    closed_form_weyl_order,
    weyl_group_name,
)
from utils.errors import (
    ConstantPolynomialError,
    DegenerateInputError,
    InvalidArgumentError,
    NonIsolatedSingularityError,
    NotCompleteIntersectionError,
    OriginNotOnVarietyError,
    RingMismatchError,
)

logger = logging.getLogger(__name__)

DEFAULT_RING = Ring(("x", "y", "z"))


@dataclass(frozen=True)
class DynkinData:
    vertices: int
    weyl_order: int
    weyl_name: str
    certified_by_enumeration: bool = False


@dataclass(frozen=True)
class SingularityReport:
    """μ, τ, базис T¹ и (для поверхностей в ℂ³) тип ADE"""

    ring: Ring
    mu: Colength
    tau: int
    t1_basis: Tuple[Exponent, ...]
    corank: int
    ade: Optional[ADEType] = None
    dynkin: Optional[DynkinData] = None

    def t1_monomials(self) -> List[Polynomial]:
        return [self.ring.monomial(m) for m in self.t1_basis]


@dataclass(frozen=True)
class BurnsWahlData:
    singularities: Tuple[ADEType, ...]
    nu: int
    total_weyl_order: int


@dataclass(frozen=True)
class T1Presentation:
    """T¹ полного пересечения: O_X^p / (столбцы матрицы Якоби)"""

    ring: Ring
    tau: int
    components: int
    basis: Tuple[Column, ...]
    columns: Tuple[Tuple[Polynomial, ...], ...] = field(repr=False)

    @property
    def description(self) -> str:
        p, n = self.components, self.ring.nvars
        return (
            f"O_X^{p} / <{n} столбцов транспонированной матрицы Якоби>, "
            f"O_X = O_{{C^{n},0}}/(f_1..f_{p}); длина {self.tau}"
        )

    def representatives(self) -> List[Tuple[Polynomial, ...]]:
        """Векторы g^i = моном · e_j"""
        result = []
        for exponent, j in self.basis:
            vector = [self.ring.zero()] * self.components
            vector[j] = self.ring.monomial(exponent)
            result.append(tuple(vector))
        return result


class SingularityAnalyzer:
    """Анализ изолированной особенности в начале координат"""

    def __init__(self, config: Optional[RunConfig] = None, ops: Optional[IdealOperations] = None):
        self.config = config or SETTINGS
        self.ops = ops or IdealOperations(self.config)
        self.engine = self.ops.engine
        self.oracle = JetColengthOracle(self.config)

    # ------------------------------------------------------------ числа Милнора и Тюриной

    def jacobian_ideal(self, f: Polynomial) -> Ideal:
        if f.is_constant():
            raise ConstantPolynomialError(f"Идеал Якоби постоянного многочлена {f} не определен")
        return Ideal(f.ring, tuple(f.derivative(i) for i in range(f.ring.nvars)))

    def tjurina_ideal(self, f: Polynomial) -> Ideal:
        return self.jacobian_ideal(f).extended([f])

    def milnor(self, f: Polynomial) -> Colength:
        return self.engine.colength(self.jacobian_ideal(f), LOCAL)

    def _check_hypersurface(self, f: Polynomial) -> None:
        if f.is_zero() or f.is_constant():
            raise DegenerateInputError(f"Вырожденный вход: f = {f} (ноль или обратимый элемент)")
        if f.constant_term() != 0:
            raise OriginNotOnVarietyError(
                f"Начало координат не лежит на V(f): f(0) = {f.constant_term()}"
            )

    def tjurina(self, f: Polynomial) -> SingularityReport:
        """τ = dim O/(f, ∂f), базис T¹ из стандартных мономов"""
        self._check_hypersurface(f)
        ideal = self.tjurina_ideal(f)
        tau = self.engine.colength(ideal, LOCAL)
        if tau == math.inf:
            raise NonIsolatedSingularityError(
                f"Особенность {f} не изолирована: бесконечное число Тюриной"
            )
        basis = tuple(self.engine.standard_monomials(ideal, LOCAL))
        mu = self.milnor(f)
        corank = f.ring.nvars - rational_rank(hessian_at_origin(f))
        logger.info(f"Особенность {f}: μ={mu}, τ={tau}, коранг {corank}")
        return SingularityReport(f.ring, mu, int(tau), basis, corank)

    def analyze(self, f: Polynomial) -> SingularityReport:
        """Полный отчет: μ, τ, T¹, и тип ADE с данными Дынкина для трех переменных"""
        report = self.tjurina(f)
        ade = self.classify_ade(f) if f.ring.nvars == 3 else None
        dynkin = self.dynkin_data(ade) if ade else None
        return SingularityReport(report.ring, report.mu, report.tau, report.t1_basis, report.corank, ade, dynkin)

    # ------------------------------------------------------------ полные пересечения

    def t1_complete_intersection(self, fs: Sequence[Polynomial]) -> T1Presentation:
        if not fs:
            raise InvalidArgumentError("Нужен хотя бы один многочлен")
        ring = fs[0].ring
        for f in fs:
            if f.ring != ring:
                raise RingMismatchError(f"Многочлены из разных колец: {ring} и {f.ring}")
            if f.is_zero():
                raise DegenerateInputError("Нулевое уравнение в полном пересечении")
            if f.constant_term() != 0:
                raise OriginNotOnVarietyError(f"Начало координат не лежит на V({f})")
        p, n = len(fs), ring.nvars
        if p >= n:
            raise NotCompleteIntersectionError(f"Число уравнений {p} не меньше числа переменных {n}")

        ideal = Ideal(ring, tuple(fs))
        local_dim = self.engine.dimension(ideal, LOCAL)
        if local_dim != n - p:
            raise NotCompleteIntersectionError(
                f"Локальная размерность {local_dim} вместо {n - p}",
                {'expected': n - p, 'actual': local_dim},
            )
        singular = self.ops.singular_locus_ideal(ideal, p)
        if self.engine.colength(singular, LOCAL) == math.inf:
            raise NonIsolatedSingularityError("Особое множество полного пересечения положительной размерности")

        jac = jacobian_matrix(list(fs))
        columns = tuple(tuple(jac[j][i] for j in range(p)) for i in range(n))
        vectors: List[Tuple[Polynomial, ...]] = list(columns)
        for f in fs:
            for j in range(p):
                vector = [ring.zero()] * p
                vector[j] = f
                vectors.append(tuple(vector))

        stable = self.oracle.stable_module_colength(vectors, p, n)
        if stable is None:
            raise NonIsolatedSingularityError(
                f"Длина T¹ не стабилизировалась до степени {self.config.JET_DEGREE_CAP}"
            )
        tau, basis = stable
        return T1Presentation(ring, tau, p, tuple(sorted(basis, key=lambda c: (sum(c[0]), c[1]))), columns)

    # ------------------------------------------------------------ ADE

    def classify_ade(self, f: Polynomial) -> Optional[ADEType]:
        """Тип ADE по μ, корангу Гессиана и остаточной кубической форме; None вне ADE"""
        if f.ring.nvars != 3:
            raise InvalidArgumentError("Классификация ADE определена для поверхностей в C^3")
        if f.is_zero() or f.constant_term() != 0:
            return None
        if any(f.derivative(i).constant_term() != 0 for i in range(3)):
            return None

        mu = self.milnor(f)
        if mu == math.inf:
            return None
        tau = self.engine.colength(self.tjurina_ideal(f), LOCAL)
        if tau != mu:
            return None

        hessian = hessian_at_origin(f)
        corank = 3 - rational_rank(hessian)
        if corank <= 1:
            return ADEType("A", int(mu))
        if corank == 3:
            return None

        cubic = self._residual_cubic(f, hessian)
        if not cubic.is_zero() and not self._is_cube(cubic):
            return ADEType("D", int(mu)) if mu >= 4 else None
        if mu in (6, 7, 8):
            return ADEType("E", int(mu))
        return None

    @staticmethod
    def _residual_cubic(f: Polynomial, hessian: List[List[Fraction]]) -> Polynomial:
        """Кубическая часть f на ядре Гессиана (бинарная форма от s, t)"""
        matrix = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in hessian])
        kernel = matrix.nullspace()
        binary = Ring(("s", "t"))
        s, t = binary.gens()
        mapping = {}
        for i in range(3):
            a, b = (sympy.Rational(vector[i]) for vector in kernel[:2])
            mapping[i] = s * Fraction(int(a.p), int(a.q)) + t * Fraction(int(b.p), int(b.q))
        return f.homogeneous_part(3).substitute(mapping, target=binary)

    @staticmethod
    def _is_cube(cubic: Polynomial) -> bool:
        """Бинарная кубика является кубом линейной формы ⇔ ее гессиан тождественно нулевой"""
        c_ss = cubic.derivative(0).derivative(0)
        c_tt = cubic.derivative(1).derivative(1)
        c_st = cubic.derivative(0).derivative(1)
        return (c_ss * c_tt - c_st * c_st).is_zero()

    @staticmethod
    def normal_form(t: ADEType, ring: Optional[Ring] = None) -> Polynomial:
        ring = ring or DEFAULT_RING
        x, y, z = ring.gens()
        if t.family == "A":
            return x * y - z ** (t.rank + 1)
        if t.family == "D":
            return x ** 2 + y ** 2 * z + z ** (t.rank - 1)
        if t.rank == 6:
            return x ** 2 + y ** 3 + z ** 4
        if t.rank == 7:
            return x ** 2 + y ** 3 + y * z ** 3
        return x ** 2 + y ** 3 + z ** 5

    # ------------------------------------------------------------ Дынкин и Вейль

    def dynkin_data(self, t: ADEType) -> DynkinData:
        order = closed_form_weyl_order(t)
        certified = False
        if t.rank <= BRUTE_FORCE_MAX_RANK:
            enumerated = brute_force_weyl_order(t)
            if enumerated != order:
                raise InvalidArgumentError(
                    f"Перебор дал |W({t})| = {enumerated}, по формуле {order}"
                )
            certified = True
        return DynkinData(t.rank, order, weyl_group_name(t), certified)

    def burns_wahl_data(self, singularities: Sequence[ADEType]) -> BurnsWahlData:
        """ν = сумма рангов, |W| = произведение порядков групп Вейля"""
        if not singularities:
            raise InvalidArgumentError("Список особенностей пуст")
        data = [self.dynkin_data(t) for t in singularities]
        total = 1
        for d in data:
            total *= d.weyl_order
        return BurnsWahlData(tuple(singularities), sum(d.vertices for d in data), total)
