import os
from pathlib import Path
from typing import Dict, Optional

from utils.errors import ConfigurationError

# Ключи переменной окружения DEFKIT_BUDGET -> атрибуты RunConfig
BUDGET_KEYS = {
    'basis': 'MAX_BASIS_ELEMENTS',
    'saturation': 'MAX_SATURATION_ITERATIONS',
    'jet': 'JET_DEGREE_CAP',
    'charts': 'CHART_CAP',
    'retries': 'SEGRE_RETRIES',
}

OUTPUT_FORMATS = ("text", "json")


class RunConfig:
    def __init__(self):
        # Ресурсные ограничения вычислений
        self.MAX_BASIS_ELEMENTS = 2000
        self.MAX_SATURATION_ITERATIONS = 64
        self.JET_DEGREE_CAP = 32
        self.CHART_CAP = 3
        self.SEGRE_RETRIES = 25

        self.SEED = 0
        self.OUTPUT_FORMAT = "text"

        self.LOG_LEVEL = "WARNING"
        self.LOG_FILE: Optional[Path] = None

    def validate(self) -> "RunConfig":
        """Проверка, что все лимиты положительны"""
        for attr in BUDGET_KEYS.values():
            value = getattr(self, attr)
            if not isinstance(value, int) or value <= 0:
                raise ConfigurationError(
                    f"Лимит {attr} должен быть положительным целым, получено {value!r}",
                    {'field': attr},
                )
        if self.OUTPUT_FORMAT not in OUTPUT_FORMATS:
            raise ConfigurationError(
                f"Неизвестный формат вывода: {self.OUTPUT_FORMAT}",
                {'field': 'OUTPUT_FORMAT'},
            )
        return self

    def copy(self) -> "RunConfig":
        clone = RunConfig()
        clone.__dict__.update(self.__dict__)
        return clone

    @classmethod
    def from_env(cls, environ: Optional[Dict[str, str]] = None) -> "RunConfig":
        """Конфигурация по умолчанию + переопределения из DEFKIT_BUDGET

        Формат: "basis=5000,saturation=64,jet=24"
        """
        environ = os.environ if environ is None else environ
        config = cls()
        raw = environ.get("DEFKIT_BUDGET", "").strip()
        if not raw:
            return config

        for item in raw.split(","):
            item = item.strip()
            if not item:
                continue
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in BUDGET_KEYS:
                raise ConfigurationError(
                    f"Некорректный элемент DEFKIT_BUDGET: {item!r}",
                    {'allowed_keys': ",".join(BUDGET_KEYS)},
                )
            try:
                setattr(config, BUDGET_KEYS[key], int(value))
            except ValueError:
                raise ConfigurationError(
                    f"Значение {key} в DEFKIT_BUDGET не целое: {value!r}"
                ) from None
        return config.validate()

    def with_overrides(self, **overrides) -> "RunConfig":
        """Флаги командной строки имеют приоритет над окружением"""
        clone = self.copy()
        for attr, value in overrides.items():
            if value is None:
                continue
            if not hasattr(clone, attr):
                raise ConfigurationError(f"Неизвестный параметр конфигурации: {attr}")
            setattr(clone, attr, value)
        return clone.validate()

    def as_dict(self) -> Dict:
        return {
            'max_basis_elements': self.MAX_BASIS_ELEMENTS,
            'max_saturation_iterations': self.MAX_SATURATION_ITERATIONS,
            'jet_degree_cap': self.JET_DEGREE_CAP,
            'chart_cap': self.CHART_CAP,
            'segre_retries': self.SEGRE_RETRIES,
            'seed': self.SEED,
            'output_format': self.OUTPUT_FORMAT,
        }


SETTINGS = RunConfig()
