import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icfeedback.errors import UnsupportedOrder
from icfeedback.hadamard import (
    SUPPORTED_ORDERS,
    build_hadamard,
    column_rotation,
    modulation_vector,
)


def test_order_one_is_identity():
    h = build_hadamard(1)
    assert h.entries.tolist() == [[1]]


def test_order_two_canonical_form():
    h = build_hadamard(2)
    assert h.entries.tolist() == [[1, 1], [1, -1]]


def test_order_four_is_sylvester_doubling():
    h2 = build_hadamard(2).entries
    h4 = build_hadamard(4).entries
    expected = np.block([[h2, h2], [h2, -h2]])
    assert np.array_equal(h4, expected)
    assert np.array_equal(h4 @ h4.T, 4 * np.eye(4, dtype=np.int64))


@pytest.mark.parametrize("order", SUPPORTED_ORDERS)
def test_defining_identity_exact(order):
    h = build_hadamard(order)
    assert h.entries.dtype == np.int64
    assert np.array_equal(h.entries @ h.entries.T, order * np.eye(order, dtype=np.int64))
    assert np.all(np.abs(h.entries) == 1)


@pytest.mark.parametrize("order", [3, 6, 24, 28, 64])
def test_unsupported_orders_rejected(order):
    with pytest.raises(UnsupportedOrder):
        build_hadamard(order)


def test_first_column_all_ones():
    for order in SUPPORTED_ORDERS:
        h = build_hadamard(order)
        assert np.all(h.column(0) == 1)


def test_rotation_identity_at_step_one():
    h = build_hadamard(4)
    assert np.array_equal(column_rotation(h, 1), h.entries)


def test_rotation_step_two_swaps_columns_m2():
    h = build_hadamard(2)
    rot = column_rotation(h, 2)
    assert np.array_equal(rot, h.entries[:, [1, 0]])


def test_rotation_periodicity():
    h = build_hadamard(8)
    assert np.array_equal(column_rotation(h, 1), column_rotation(h, 9))


@settings(max_examples=60, deadline=None)
@given(
    order=st.sampled_from(SUPPORTED_ORDERS),
    n=st.integers(min_value=1, max_value=100),
)
def test_rotation_orthogonality(order, n):
    h = build_hadamard(order)
    rot = column_rotation(h, n)
    assert np.array_equal(rot.T @ rot, order * np.eye(order, dtype=np.int64))


@settings(max_examples=60, deadline=None)
@given(
    order=st.sampled_from(SUPPORTED_ORDERS),
    n=st.integers(min_value=1, max_value=100),
)
def test_alpha_against_next_rotation(order, n):
    # alpha_n^T H_{n+1} = (0, ..., 0, M) exactly
    h = build_hadamard(order)
    alpha = modulation_vector(h, n).values
    prod = alpha @ column_rotation(h, n + 1)
    expected = np.zeros(order, dtype=np.int64)
    expected[-1] = order
    assert np.array_equal(prod, expected)


def test_modulation_examples_m2():
    h = build_hadamard(2)
    assert modulation_vector(h, 1).values.tolist() == [1, 1]
    assert modulation_vector(h, 2).values.tolist() == [1, -1]
    assert modulation_vector(h, 3).values.tolist() == [1, 1]


@settings(max_examples=40, deadline=None)
@given(
    order=st.sampled_from(SUPPORTED_ORDERS),
    n=st.integers(min_value=1, max_value=64),
)
def test_modulation_periodicity(order, n):
    h = build_hadamard(order)
    assert np.array_equal(
        modulation_vector(h, n).values, modulation_vector(h, n + order).values
    )


def test_modulation_rejects_bad_step():
    h = build_hadamard(2)
    with pytest.raises(ValueError):
        modulation_vector(h, 0)
