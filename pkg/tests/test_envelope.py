import numpy as np
import pytest
from hypothesis import given, strategies as st

from emdcast.endcond import extend
from emdcast.envelope import (ExtremaSet, Extremum, build_envelopes,
                              find_extrema, spline_interpolate)
from emdcast.exceptions import DegenerateEnvelopeError


# ---------------------------------------------------------------------------
# extrema detection
# ---------------------------------------------------------------------------

def test_interior_extrema_simple():
    ext = find_extrema([0.0, 1.0, 0.0, -1.0, 0.0])
    assert [(e.t, e.value) for e in ext.maxima] == [(1, 1.0)]
    assert [(e.t, e.value) for e in ext.minima] == [(3, -1.0)]


def test_endpoints_never_returned():
    ext = find_extrema([5.0, 1.0, 2.0, 1.0, 9.0])
    assert all(0 < e.t < 4 for e in ext.maxima + ext.minima)


def test_plateau_yields_floor_midpoint():
    # plateau over t = 2..3: midpoint 2.5 floors to 2
    ext = find_extrema([0.0, 1.0, 2.0, 2.0, 1.0, 0.0])
    assert [(e.t, e.value) for e in ext.maxima] == [(2, 2.0)]
    ext = find_extrema([0.0, 1.0, 2.0, 2.0, 2.0, 1.0, 0.0])
    assert [(e.t, e.value) for e in ext.maxima] == [(3, 2.0)]


def test_plateau_into_endpoint_is_not_an_extremum():
    ext = find_extrema([0.0, 1.0, 2.0, 2.0])
    assert ext.maxima == () and ext.minima == ()


def test_monotone_has_no_extrema():
    ext = find_extrema(np.arange(10.0))
    assert ext.maxima == () and ext.minima == ()


def test_too_short_raises():
    with pytest.raises(ValueError):
        find_extrema([1.0, 2.0])


@given(st.lists(st.floats(-100, 100, allow_nan=False), min_size=3,
                max_size=50))
def test_negation_swaps_maxima_and_minima(values):
    x = np.array(values)
    a = find_extrema(x)
    b = find_extrema(-x)
    assert [(e.t, -e.value) for e in a.maxima] == [
        (e.t, e.value) for e in b.minima]
    assert [(e.t, -e.value) for e in a.minima] == [
        (e.t, e.value) for e in b.maxima]


@given(st.lists(st.floats(-100, 100, allow_nan=False), min_size=3,
                max_size=50))
def test_maxima_strictly_above_neighbors(values):
    x = np.array(values)
    ext = find_extrema(x)
    for e in ext.maxima:
        assert x[int(e.t)] == e.value
    ts = [e.t for e in ext.maxima]
    assert ts == sorted(ts)


# ---------------------------------------------------------------------------
# spline interpolation
# ---------------------------------------------------------------------------

def test_natural_spline_three_knot_value():
    # natural spline through (0,0),(1,1),(2,0): interior second-derivative
    # M1 = -3, so s(0.5) = 0.6875
    assert spline_interpolate([(0, 0), (1, 1), (2, 0)],
                              [0.5])[0] == pytest.approx(0.6875)


def test_two_knots_degenerate_to_linear():
    out = spline_interpolate([(0, 1), (4, 9)], [0, 1, 2, 3, 4])
    assert np.allclose(out, [1, 3, 5, 7, 9])


def test_spline_passes_through_knots():
    knots = [(0, 2.0), (1.5, -1.0), (3, 4.0), (7, 0.0)]
    out = spline_interpolate(knots, [k[0] for k in knots])
    assert np.allclose(out, [k[1] for k in knots])


def test_query_outside_span_raises():
    with pytest.raises(ValueError):
        spline_interpolate([(0, 0), (2, 1)], [2.5])


def test_nonincreasing_knots_raise():
    with pytest.raises(ValueError):
        spline_interpolate([(0, 0), (0, 1), (2, 1)], [1.0])


# ---------------------------------------------------------------------------
# envelopes
# ---------------------------------------------------------------------------

def test_envelopes_need_two_of_each():
    ext = ExtremaSet((Extremum(1, 1.0),), (Extremum(2, -1.0), Extremum(4, -1.0)))
    with pytest.raises(DegenerateEnvelopeError):
        build_envelopes(np.zeros(6), ext)


def test_sinusoid_envelopes_near_amplitude():
    t = np.arange(128)
    x = np.sin(2 * np.pi * t / 16)
    extended = extend("rato", x, find_extrema(x))
    upper, lower = build_envelopes(x, extended)
    core = slice(13, 115)  # interior 80% of the span
    assert np.max(np.abs(upper[core] - 1.0)) < 0.02
    assert np.max(np.abs(lower[core] + 1.0)) < 0.02


def test_triangle_wave_mean_envelope_near_zero():
    t = np.arange(120)
    x = 2.0 * np.abs((t / 12.0) % 2 - 1) - 1  # symmetric triangle wave
    extended = extend("rato", x, find_extrema(x))
    upper, lower = build_envelopes(x, extended)
    mean = 0.5 * (upper + lower)
    assert np.max(np.abs(mean[12:108])) < 0.05


def test_unextended_sinusoid_envelope_sags_at_ends():
    t = np.arange(128)
    x = np.sin(2 * np.pi * t / 16)
    extended = extend("none", x, find_extrema(x))
    upper, _ = build_envelopes(x, extended)
    err = np.abs(upper - 1.0)
    edge = max(err[:13].max(), err[-13:].max())
    assert edge > err[13:-13].max()
