import functools
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Union

import polars as pl


class SystemHelpers:
    """Вспомогательные функции для системы"""

    @staticmethod
    def setup_logging(level: str = "WARNING", log_file: Optional[Union[str, Path]] = None):
        """Настройка логирования (диагностика всегда в stderr)"""
        handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
        if log_file:
            handlers.append(logging.FileHandler(log_file, encoding='utf-8'))

        logging.basicConfig(
            level=getattr(logging, str(level).upper(), logging.WARNING),
            format='%(asctime)s - %(levelname)s - %(message)s',
            handlers=handlers,
            force=True,
        )
        return logging.getLogger("defkit")

    @staticmethod
    def timer(func):
        """Декоратор для измерения времени выполнения"""
        logger = logging.getLogger(func.__module__)

        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            result = func(*args, **kwargs)
            elapsed = time.perf_counter() - start_time
            logger.debug(f"⏱️  {func.__qualname__} выполнено за {elapsed:.2f} секунд")
            return result
        return wrapper


class FormatHelpers:
    """Класс для форматирования вывода"""

    @staticmethod
    def format_rational(value: Union[int, Fraction]) -> str:
        """Рациональное число в виде a или a/b"""
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    @staticmethod
    def format_colength(value) -> str:
        """Натуральное число или «infinite»"""
        if value is None:
            return "unstable"
        if value == float("inf"):
            return "infinite"
        return str(int(value))

    @staticmethod
    def format_bound(raw: int) -> str:
        """Отрицательная оценка показывается как 0 (исходное значение в скобках)"""
        if raw < 0:
            return f"0 (raw {raw}, оценка пуста)"
        return str(raw)

    @staticmethod
    def format_table(rows: Sequence[Sequence], headers: Sequence[str]) -> str:
        """Выравненная текстовая таблица"""
        cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
        lines = []
        for idx, row in enumerate(cells):
            lines.append("  ".join(cell.rjust(widths[i]) for i, cell in enumerate(row)))
            if idx == 0:
                lines.append("  ".join("─" * w for w in widths))
        return "\n".join(lines)

    @staticmethod
    def format_frame(df: pl.DataFrame) -> str:
        """Таблица polars в выравненный текст"""
        if df.height == 0:
            return "📊 Пустая таблица"
        return FormatHelpers.format_table(df.rows(), df.columns)
