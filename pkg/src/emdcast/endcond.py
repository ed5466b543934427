"""Boundary-extension (end condition) methods.

Each method synthesizes extrema beyond both ends of a series so that the
envelope splines cover the full span [0, N-1]. Methods: the naive clamp
("none"), mirror reflection, typical-wave extension, slope-based
extrapolation, and value-copy reflection ("rato").
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .envelope import Extremum, ExtremaSet, find_extrema
from .exceptions import DegenerateEnvelopeError


@dataclass(frozen=True)
class ExtendedExtrema:
    maxima: tuple
    minima: tuple


def _require(ext: ExtremaSet, n_max: int, n_min: int, method: str):
    if len(ext.maxima) < n_max or len(ext.minima) < n_min:
        raise DegenerateEnvelopeError(
            f"{method} needs >= {n_max} maxima and >= {n_min} minima, got "
            f"{len(ext.maxima)}/{len(ext.minima)}")


def _reversed_ext(ext: ExtremaSet, n: int) -> ExtremaSet:
    rev = lambda lst: tuple(Extremum(n - 1 - e.t, e.value) for e in reversed(lst))
    return ExtremaSet(rev(ext.maxima), rev(ext.minima))


def _assemble(ext: ExtremaSet, start_max, start_min, end_max, end_min, n):
    """Merge method-added extrema with the interior set and guarantee the
    knot spans cover [0, n-1].

    Some methods (mirror in particular, which adds a single extremum of one
    type per end) cannot cover both spans on their own; any still-uncovered
    list gets its outermost extremum reflected across the boundary.
    """
    def merge(added_start, interior, added_end):
        merged = sorted(list(added_start) + list(interior) + list(added_end),
                        key=lambda e: e.t)
        # synthetic knots may coincide in time with interior ones; splines
        # need strictly increasing abscissae
        out = [merged[0]]
        for e in merged[1:]:
            if e.t > out[-1].t:
                out.append(e)
        return out

    maxima = merge(start_max, ext.maxima, end_max)
    minima = merge(start_min, ext.minima, end_min)
    for lst in (maxima, minima):
        if lst[0].t > 0:
            lst.insert(0, Extremum(-lst[0].t, lst[0].value))
        if lst[-1].t < n - 1:
            lst.append(Extremum(2 * (n - 1) - lst[-1].t, lst[-1].value))
    return ExtendedExtrema(tuple(maxima), tuple(minima))


def _two_sided(values, ext, start_fn, method):
    """Run a start-side extension rule at both ends via time reversal."""
    n = len(values)
    s_max, s_min = start_fn(values, ext)
    rev_values = np.asarray(values)[::-1]
    e_max_r, e_min_r = start_fn(rev_values, _reversed_ext(ext, n))
    back = lambda lst: [Extremum(n - 1 - e.t, e.value) for e in lst]
    return _assemble(ext, s_max, s_min, back(e_max_r), back(e_min_r), n)


# ---------------------------------------------------------------------------
# none: clamp the series endpoints into both knot lists
# ---------------------------------------------------------------------------

def extend_none(values, ext: ExtremaSet) -> ExtendedExtrema:
    _require(ext, 1, 1, "none")
    x = np.asarray(values, dtype=float)
    n = len(x)
    first = [Extremum(0, x[0])]
    last = [Extremum(n - 1, x[-1])]
    return _assemble(ext, first, first, last, last, n)


# ---------------------------------------------------------------------------
# mirror: reflect the first extremum of one type across the time of the
# boundary-nearest extremum of the other type
# ---------------------------------------------------------------------------

def _mirror_start(values, ext: ExtremaSet):
    mx, mn = ext.maxima[0], ext.minima[0]
    if mx.t < mn.t:
        # pivot is the first maximum; reflect the first minimum
        return [], [Extremum(2 * mx.t - mn.t, mn.value)]
    if mn.t < mx.t:
        return [Extremum(2 * mn.t - mx.t, mx.value)], []
    raise ValueError("coincident first maximum and minimum times")


def extend_mirror(values, ext: ExtremaSet) -> ExtendedExtrema:
    _require(ext, 1, 1, "mirror")
    return _two_sided(values, ext, _mirror_start, "mirror")


# ---------------------------------------------------------------------------
# coughlin: prepend one typical wave, then harvest its extrema
# ---------------------------------------------------------------------------

def _coughlin_start(values, ext: ExtremaSet):
    mx, mn = ext.maxima[0], ext.minima[0]
    amp = abs(mx.value - mn.value)
    period = 2.0 * abs(mx.t - mn.t)
    if period == 0:
        raise ValueError("coincident extrema times give a zero wave period")
    mean = 0.5 * (mx.value + mn.value)
    # anchor the wave crest (trough) at the boundary-nearest extremum so its
    # value matches there and its slope is zero
    anchor = mx if mx.t < mn.t else mn
    phase0 = np.pi / 2 if anchor is mx else -np.pi / 2
    t_lo = int(np.floor(-1.5 * period)) - 1
    ts = np.arange(t_lo, int(anchor.t) + 1)
    wave = 0.5 * amp * np.sin(2 * np.pi * (ts - anchor.t) / period + phase0) + mean
    wext = find_extrema(wave)
    keep = lambda lst: [Extremum(ts[int(e.t)], e.value) for e in lst
                        if ts[int(e.t)] <= 0]
    return keep(wext.maxima), keep(wext.minima)


def extend_coughlin(values, ext: ExtremaSet) -> ExtendedExtrema:
    _require(ext, 2, 2, "coughlin")
    return _two_sided(values, ext, _coughlin_start, "coughlin")


# ---------------------------------------------------------------------------
# slope-based: extrapolate new extrema from the first two slopes and the
# first max/min time gaps
# ---------------------------------------------------------------------------

def _sbm_start(values, ext: ExtremaSet):
    # the slope construction assumes the series enters through a maximum
    # (Max(1) < Min(1) < Max(2)), so s1 and s2 are single half-wave slopes;
    # when a minimum comes first, blindly reusing the formulas extrapolates
    # across mixed spans and produces knot values far outside the local
    # signal range. Handle that case by the max/min-exchanged rule, obtained
    # by negating the signal, applying the maximum-first rule, and negating
    # the resulting knots back.
    if ext.minima[0].t < ext.maxima[0].t:
        flip = lambda lst: tuple(Extremum(e.t, -e.value) for e in lst)
        neg_max, neg_min = _sbm_start(-np.asarray(values, dtype=float),
                                      ExtremaSet(flip(ext.minima),
                                                 flip(ext.maxima)))
        return list(flip(neg_min)), list(flip(neg_max))
    (mx1, mx2), (mn1, mn2) = ext.maxima[:2], ext.minima[:2]
    if mx2.t == mn1.t or mn1.t == mx1.t:
        raise ValueError("coincident extrema times in slope computation")
    s1 = (mx2.value - mn1.value) / (mx2.t - mn1.t)
    s2 = (mn1.value - mx1.value) / (mn1.t - mx1.t)
    dt_max = mx2.t - mx1.t
    dt_min = mn2.t - mn1.t
    t_min0 = mn1.t - dt_min
    t_max0 = mx1.t - dt_max
    q0 = mx1.value - s1 * (mx1.t - t_min0)
    p0 = q0 - s2 * (t_min0 - t_max0)
    # the construction assumes alternation of the extrapolated extrema:
    # Max(0) before Min(0), both at or beyond the boundary. Irregular
    # extrema spacing (e.g. a noise wiggle making one time gap much smaller
    # than the other) can violate that ordering, and the chained values
    # then extrapolate a slope across a span it was never measured on,
    # producing knots far outside the local signal range. Keep Min(0) only
    # when it reaches the boundary, and Max(0) only when the full ordering
    # holds; a skipped side is covered by the boundary-reflection guard.
    new_max, new_min = [], []
    if t_min0 <= 0:
        new_min = [Extremum(t_min0, q0)]
        if t_max0 < t_min0:
            new_max = [Extremum(t_max0, p0)]
    return new_max, new_min


def extend_sbm(values, ext: ExtremaSet) -> ExtendedExtrema:
    _require(ext, 2, 2, "sbm")
    return _two_sided(values, ext, _sbm_start, "sbm")


# ---------------------------------------------------------------------------
# rato: copy each first extremum's value to the reflection of the OTHER
# type's time across the boundary
# ---------------------------------------------------------------------------

def _rato_start(values, ext: ExtremaSet):
    mx, mn = ext.maxima[0], ext.minima[0]
    return [Extremum(-mn.t, mx.value)], [Extremum(-mx.t, mn.value)]


def extend_rato(values, ext: ExtremaSet) -> ExtendedExtrema:
    _require(ext, 1, 1, "rato")
    return _two_sided(values, ext, _rato_start, "rato")


METHODS = {
    "none": extend_none,
    "mirror": extend_mirror,
    "coughlin": extend_coughlin,
    "sbm": extend_sbm,
    "rato": extend_rato,
}


def extend(method: str, values, ext: ExtremaSet) -> ExtendedExtrema:
    """Apply the named end-condition method at both series ends."""
    try:
        fn = METHODS[method]
    except KeyError:
        raise ValueError(
            f"unknown end condition {method!r}; one of {sorted(METHODS)}")
    return fn(values, ext)
