from typing import Any, Dict, Optional

# значения, которые serialization.to_json пишет как есть
_PLAIN = (str, int, float, bool, type(None))


class DefkitError(Exception):
    """Базовая ошибка предметной области (CLI превращает её в exit code 1)"""

    code = "defkit_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Структурированный объект ошибки для JSON-отчета"""
        return {
            'type': type(self).__name__,
            'code': self.code,
            'message': self.message,
            'details': {k: v if isinstance(v, _PLAIN) else str(v) for k, v in self.details.items()},
        }


# Алгебра

class RingMismatchError(DefkitError):
    code = "ring_mismatch"


class VariableIndexError(DefkitError):
    code = "variable_index"


class ResourceLimitError(DefkitError):
    code = "resource_limit"


class SaturationLimitError(ResourceLimitError):
    code = "saturation_limit"


class InfiniteColengthError(DefkitError):
    code = "infinite_colength"


# Особенности

class ConstantPolynomialError(DefkitError):
    code = "constant_polynomial"


class DegenerateInputError(DefkitError):
    code = "degenerate_input"


class NonIsolatedSingularityError(DefkitError):
    code = "non_isolated"


class OriginNotOnVarietyError(DefkitError):
    code = "origin_not_on_variety"


class NotCompleteIntersectionError(DefkitError):
    code = "not_complete_intersection"


# Деформации и разрешения

class ParameterCountError(DefkitError):
    code = "parameter_count"


class PositiveDimensionalLocusError(DefkitError):
    code = "positive_dimensional_locus"


class ChartCapExceededError(DefkitError):
    code = "chart_cap_exceeded"


# Бидвойные накрытия

class NonInvariantGeneratorError(DefkitError):
    code = "non_invariant_generator"


class IdentityElementError(DefkitError):
    code = "identity_element"


# Поверхности

class GenericityError(DefkitError):
    code = "genericity"


class DivisibilityObstructionError(DefkitError):
    code = "divisibility_obstruction"


class DivisibilityError(DefkitError):
    code = "divisibility"


class CatalogParameterError(DefkitError):
    code = "catalog_parameter"


class InvalidArgumentError(DefkitError):
    code = "invalid_argument"


# CLI и парсер

class PolynomialSyntaxError(DefkitError):
    code = "syntax_error"

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (столбец {column})", {'column': column})
        self.column = column


class UnknownVariableError(PolynomialSyntaxError):
    code = "unknown_variable"


class ZeroDenominatorError(PolynomialSyntaxError):
    code = "zero_denominator"


class ConfigurationError(DefkitError):
    code = "configuration"
