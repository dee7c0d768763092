import json
import math
from fractions import Fraction

import pytest

from src.ideal_ops import Verdict
from src.serialization import SAFE_INTEGER, dumps, to_json
from src.singular import SingularityAnalyzer
from src.standard_basis import Ideal
from src.weyl import ADEType
from tests.conftest import poly


def test_scalars():
    assert to_json(Fraction(3, 2)) == "3/2"
    assert to_json(Fraction(4, 2)) == "2"
    assert to_json(math.inf) == "infinite"
    assert to_json(True) is True
    assert to_json(None) is None
    assert to_json(Verdict.SMOOTH) == "smooth"


def test_large_integers_become_strings():
    assert to_json(SAFE_INTEGER - 1) == SAFE_INTEGER - 1
    assert to_json(SAFE_INTEGER) == str(SAFE_INTEGER)
    assert to_json(-SAFE_INTEGER) == str(-SAFE_INTEGER)


def test_algebraic_objects():
    f = poly("x*y - z^3")
    assert to_json(f) == "-z^3 + x*y"
    assert to_json(Ideal.of(f.ring, f, f.ring.gen("x"))) == ["-z^3 + x*y", "x"]
    assert to_json(ADEType("E", 8)) == "E8"


def test_report(analyzer):
    payload = to_json(analyzer.analyze(poly("x*y - z^3")))
    assert payload["tau"] == 2
    assert payload["t1_basis"] == ["1", "z"]
    assert payload["ade"] == "A2"
    assert payload["dynkin"]["weyl_order"] == "6"


def test_weyl_orders_are_strings():
    data = SingularityAnalyzer().burns_wahl_data([ADEType("E", 8)])
    assert to_json(data)["total_weyl_order"] == "696729600"


def test_unknown_type():
    with pytest.raises(TypeError):
        to_json(object())


def test_dumps_keeps_unicode():
    text = dumps({'name': "Кэли", 'values': (1, Fraction(1, 2))})
    assert "Кэли" in text
    assert json.loads(text) == {'name': "Кэли", 'values': [1, "1/2"]}
