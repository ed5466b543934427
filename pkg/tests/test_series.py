import numpy as np
import pytest
from hypothesis import given, strategies as st

from emdcast.series import Decomposition, Imf, Series, reconstruct, split_holdout

finite_arrays = st.lists(
    st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=64)


def test_series_validation():
    with pytest.raises(ValueError):
        Series(np.array([[1.0, 2.0]]))
    with pytest.raises(ValueError):
        Series(np.array([1.0, np.nan]))
    with pytest.raises(ValueError):
        Series(np.array([1.0, 2.0]), dt=0.0)


def test_series_values_read_only():
    s = Series(np.array([1.0, 2.0, 3.0]))
    with pytest.raises(ValueError):
        s.values[0] = 9.0


def test_extended_keeps_time_axis():
    s = Series(np.array([1.0, 2.0]), t0=5.0, dt=0.5)
    e = s.extended([3.0, 4.0])
    assert e.t0 == 5.0 and e.dt == 0.5 and len(e) == 4
    assert list(e.values) == [1.0, 2.0, 3.0, 4.0]


def test_imf_index_starts_at_one():
    with pytest.raises(ValueError):
        Imf(np.zeros(4), index=0)


def test_decomposition_length_checks():
    with pytest.raises(ValueError):
        Decomposition((Imf(np.zeros(3), 1),), np.zeros(4), source_length=4)
    with pytest.raises(ValueError):
        Decomposition((), np.zeros(3), source_length=4)


def test_reconstruct_sums_components():
    imfs = (Imf(np.array([1.0, -1.0]), 1), Imf(np.array([0.5, 0.5]), 2))
    d = Decomposition(imfs, np.array([2.0, 2.0]), source_length=2)
    assert np.allclose(reconstruct(d), [3.5, 1.5])
    assert len(d.components) == 3


@given(finite_arrays, st.data())
def test_split_holdout_partitions(values, data):
    s = Series(np.array(values))
    h = data.draw(st.integers(1, len(values) - 1))
    head, tail = split_holdout(s, h)
    assert len(head) + len(tail) == len(s)
    assert np.array_equal(np.concatenate([head.values, tail.values]), s.values)
    assert tail.t0 == s.t0 + len(head) * s.dt


def test_split_holdout_bounds():
    s = Series(np.arange(5, dtype=float))
    with pytest.raises(ValueError):
        split_holdout(s, 0)
    with pytest.raises(ValueError):
        split_holdout(s, 5)
