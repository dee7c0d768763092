import logging
from fractions import Fraction

import polars as pl
import pytest

from config.settings import RunConfig
from utils.errors import ConfigurationError, DefkitError, PolynomialSyntaxError, ResourceLimitError
from utils.helpers import FormatHelpers, SystemHelpers


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig()
        assert config.MAX_BASIS_ELEMENTS == 2000
        assert config.CHART_CAP == 3
        assert config.OUTPUT_FORMAT == "text"

    def test_budget_from_environment(self):
        config = RunConfig.from_env({'DEFKIT_BUDGET': "basis=50, jet=8"})
        assert config.MAX_BASIS_ELEMENTS == 50
        assert config.JET_DEGREE_CAP == 8
        assert config.MAX_SATURATION_ITERATIONS == 64

    @pytest.mark.parametrize("raw", ["basis", "colour=3", "basis=abc", "basis=0"])
    def test_bad_budget(self, raw):
        with pytest.raises(ConfigurationError):
            RunConfig.from_env({'DEFKIT_BUDGET': raw})

    def test_overrides_skip_none(self):
        base = RunConfig()
        config = base.with_overrides(SEED=7, CHART_CAP=None)
        assert config.SEED == 7
        assert config.CHART_CAP == 3
        assert base.SEED == 0

    def test_unknown_override(self):
        with pytest.raises(ConfigurationError):
            RunConfig().with_overrides(COLOUR=1)

    def test_bad_format(self):
        with pytest.raises(ConfigurationError):
            RunConfig().with_overrides(OUTPUT_FORMAT="xml")

    def test_as_dict(self):
        assert RunConfig().as_dict()['seed'] == 0


class TestErrors:
    def test_error_payload(self):
        error = ResourceLimitError("слишком много", {'limit': 5})
        assert isinstance(error, DefkitError)
        assert error.to_dict() == {
            'type': "ResourceLimitError",
            'code': "resource_limit",
            'message': "слишком много",
            'details': {'limit': 5},
        }

    def test_syntax_error_mentions_column(self):
        error = PolynomialSyntaxError("Ожидалась ')'", 4)
        assert "столбец 4" in error.message
        assert error.column == 4


class TestFormatHelpers:
    def test_rational(self):
        assert FormatHelpers.format_rational(Fraction(-3, 4)) == "-3/4"
        assert FormatHelpers.format_rational(5) == "5"

    def test_colength(self):
        assert FormatHelpers.format_colength(float("inf")) == "infinite"
        assert FormatHelpers.format_colength(None) == "unstable"
        assert FormatHelpers.format_colength(3) == "3"

    def test_bound(self):
        assert FormatHelpers.format_bound(-8).startswith("0 (raw -8")
        assert FormatHelpers.format_bound(8) == "8"

    def test_table(self):
        text = FormatHelpers.format_table([(1, "a"), (10, "bb")], ["n", "s"])
        lines = text.splitlines()
        assert len(lines) == 4
        assert lines[2] == " 1   a"

    def test_frame(self):
        assert "📊" in FormatHelpers.format_frame(pl.DataFrame({'a': []}))
        assert "10" in FormatHelpers.format_frame(pl.DataFrame({'a': [10]}))


def test_timer_logs_elapsed(caplog):
    @SystemHelpers.timer
    def work():
        return 42

    with caplog.at_level(logging.DEBUG):
        assert work() == 42
    assert any("выполнено за" in record.message for record in caplog.records)
