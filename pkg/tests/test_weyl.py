import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.weyl import (
    ADEType,
    brute_force_weyl_order,
    cartan_matrix,
    closed_form_weyl_order,
    dynkin_edges,
    weyl_group_name,
)
from utils.errors import InvalidArgumentError

ade_types = st.one_of(
    st.integers(1, 8).map(lambda n: ADEType("A", n)),
    st.integers(4, 8).map(lambda n: ADEType("D", n)),
    st.sampled_from([6, 7, 8]).map(lambda n: ADEType("E", n)),
)


class TestADEType:
    @pytest.mark.parametrize("label, expected", [("A2", ADEType("A", 2)), ("A_2", ADEType("A", 2)), ("e8", ADEType("E", 8))])
    def test_parse(self, label, expected):
        assert ADEType.parse(label) == expected

    @pytest.mark.parametrize("label", ["D3", "E5", "X4", "A0", ""])
    def test_invalid_labels(self, label):
        with pytest.raises(InvalidArgumentError):
            ADEType.parse(label)

    def test_str(self):
        assert str(ADEType("D", 5)) == "D5"


class TestCartan:
    @given(ade_types)
    def test_dynkin_diagram_is_tree(self, t):
        edges = dynkin_edges(t)
        assert len(edges) == t.rank - 1
        assert len(set(edges)) == len(edges)

    @pytest.mark.parametrize("t, det", [(ADEType("A", 3), 4), (ADEType("D", 5), 4), (ADEType("E", 6), 3), (ADEType("E", 8), 1)])
    def test_determinant(self, t, det):
        assert round(np.linalg.det(cartan_matrix(t).astype(float))) == det

    @given(ade_types)
    def test_symmetric(self, t):
        matrix = cartan_matrix(t)
        assert (matrix == matrix.T).all()
        assert (np.diag(matrix) == 2).all()


class TestWeylOrders:
    @pytest.mark.parametrize(
        "t, order",
        [
            (ADEType("A", 1), 2),
            (ADEType("A", 2), 6),
            (ADEType("D", 4), 192),
            (ADEType("E", 6), 51840),
            (ADEType("E", 7), 2903040),
            (ADEType("E", 8), 696729600),
        ],
    )
    def test_closed_form(self, t, order):
        assert closed_form_weyl_order(t) == order

    @pytest.mark.parametrize("t", [ADEType("A", 3), ADEType("A", 4), ADEType("D", 4), ADEType("D", 5)])
    def test_enumeration_agrees(self, t):
        assert brute_force_weyl_order(t) == closed_form_weyl_order(t)

    @pytest.mark.slow
    def test_enumeration_e6(self):
        assert brute_force_weyl_order(ADEType("E", 6)) == 51840

    def test_group_names(self):
        assert weyl_group_name(ADEType("A", 2)) == "S_{3}"
        assert weyl_group_name(ADEType("D", 4)) == "(Z/2)^{3} ⋊ S_{4}"
        assert weyl_group_name(ADEType("E", 7)) == "W(E_7)"
