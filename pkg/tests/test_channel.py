import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icfeedback.channel import ChannelParams, NoiseSource, transmit
from icfeedback.errors import DimensionMismatch

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_no_interference_no_noise_passthrough():
    p = ChannelParams(M=2, a=0.0, P=1.0)
    y = transmit(np.array([3.0, -1.0]), p, np.zeros(2))
    assert np.array_equal(y, [3.0, -1.0])


def test_unit_gain_full_sum():
    p = ChannelParams(M=2, a=1.0, P=1.0)
    y = transmit(np.array([1.0, 2.0]), p, np.zeros(2))
    assert np.allclose(y, [3.0, 3.0])


def test_three_user_direct_evaluation():
    # y_m = x_m + 0.5 * sum_{k != m} x_k + z_m with x = (2, 0, -2)
    p = ChannelParams(M=3, a=0.5, P=1.0)
    y = transmit(np.array([2.0, 0.0, -2.0]), p, np.array([0.1, 0.0, 0.0]))
    assert np.allclose(y, [1.1, 0.0, -1.0], atol=1e-15)


def test_dimension_mismatch():
    p = ChannelParams(M=3, a=0.5, P=1.0)
    with pytest.raises(DimensionMismatch):
        transmit(np.zeros(2), p, np.zeros(2))


@settings(max_examples=60, deadline=None)
@given(
    m=st.integers(min_value=1, max_value=6),
    a=st.floats(min_value=0.0, max_value=5.0),
    data=st.data(),
)
def test_linearity(m, a, data):
    p = ChannelParams(M=m, a=a, P=1.0)
    x1 = np.array(data.draw(st.lists(finite, min_size=m, max_size=m)))
    x2 = np.array(data.draw(st.lists(finite, min_size=m, max_size=m)))
    z = np.array(data.draw(st.lists(finite, min_size=m, max_size=m)))
    lhs = transmit(x1 + x2, p, z)
    rhs = transmit(x1, p, np.zeros(m)) + transmit(x2, p, z)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(
    m=st.integers(min_value=2, max_value=6),
    a=st.floats(min_value=0.0, max_value=5.0),
    data=st.data(),
)
def test_user_permutation_symmetry(m, a, data):
    p = ChannelParams(M=m, a=a, P=1.0)
    x = np.array(data.draw(st.lists(finite, min_size=m, max_size=m)))
    z = np.array(data.draw(st.lists(finite, min_size=m, max_size=m)))
    perm = np.array(data.draw(st.permutations(range(m))))
    assert np.allclose(
        transmit(x, p, z)[perm], transmit(x[perm], p, z[perm]), rtol=1e-12, atol=1e-9
    )


def test_batched_transmit_matches_loop():
    p = ChannelParams(M=3, a=0.7, P=1.0)
    rng = np.random.default_rng(0)
    x = rng.normal(size=(5, 3))
    z = rng.normal(size=(5, 3))
    batched = transmit(x, p, z)
    for i in range(5):
        assert np.allclose(batched[i], transmit(x[i], p, z[i]))


def test_noise_reproducibility():
    a = NoiseSource(seed=123, trial=7).normals(10, 3)
    b = NoiseSource(seed=123, trial=7).normals(10, 3)
    c = NoiseSource(seed=123, trial=8).normals(10, 3)
    d = NoiseSource(seed=124, trial=7).normals(10, 3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_params_validation_and_derived():
    with pytest.raises(ValueError):
        ChannelParams(M=0, a=0.5, P=1.0)
    with pytest.raises(ValueError):
        ChannelParams(M=2, a=-0.1, P=1.0)
    with pytest.raises(ValueError):
        ChannelParams(M=2, a=0.5, P=0.0)
    p = ChannelParams(M=2, a=2.0, P=100.0)
    assert p.snr == 100.0
    assert p.inr == 400.0
    assert np.isclose(p.alpha, np.log(400.0) / np.log(100.0))
    assert np.isnan(ChannelParams(M=2, a=2.0, P=1.0).alpha)
