"""Extrema detection and cubic-spline envelope construction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .exceptions import DegenerateEnvelopeError


@dataclass(frozen=True)
class Extremum:
    """A local extremum at sample index ``t`` (may lie outside the series
    span after boundary extension)."""

    t: float
    value: float


@dataclass(frozen=True)
class ExtremaSet:
    maxima: tuple
    minima: tuple


def find_extrema(values) -> ExtremaSet:
    """Interior strict local maxima and minima of a sequence.

    A flat plateau bounded by lower (resp. higher) neighbors yields one
    extremum at the plateau midpoint (index floored). Series endpoints are
    never returned.
    """
    x = np.asarray(values, dtype=float)
    n = len(x)
    if n < 3:
        raise ValueError("need at least 3 samples to detect extrema")
    maxima, minima = [], []
    i = 1
    while i < n - 1:
        # plateau of equal values starting at i
        j = i
        while j + 1 < n and x[j + 1] == x[i]:
            j += 1
        if j >= n - 1:
            break  # plateau runs into the endpoint
        left, right = x[i - 1], x[j + 1]
        mid = (i + j) // 2
        if left < x[i] and right < x[i]:
            maxima.append(Extremum(mid, x[i]))
        elif left > x[i] and right > x[i]:
            minima.append(Extremum(mid, x[i]))
        i = j + 1
    return ExtremaSet(tuple(maxima), tuple(minima))


def spline_interpolate(knots, query_ts):
    """Natural cubic spline through ``knots`` evaluated at ``query_ts``.

    With exactly two knots this degenerates to linear interpolation.
    Queries must lie inside the knot span; boundary extension is the
    caller's job.
    """
    knots = list(knots)
    if len(knots) < 2:
        raise ValueError("need at least 2 knots")
    ts = np.array([k[0] for k in knots], dtype=float)
    ys = np.array([k[1] for k in knots], dtype=float)
    if np.any(np.diff(ts) <= 0):
        raise ValueError("knot abscissae must be strictly increasing")
    q = np.asarray(query_ts, dtype=float)
    if q.size and (q.min() < ts[0] or q.max() > ts[-1]):
        raise ValueError(
            f"query range [{q.min()}, {q.max()}] outside knot span "
            f"[{ts[0]}, {ts[-1]}]")
    spline = CubicSpline(ts, ys, bc_type="natural")
    return spline(q)


def build_envelopes(values, ext: ExtremaSet):
    """Upper/lower spline envelopes sampled at every series index.

    ``ext`` must already be boundary-extended so both knot spans cover
    [0, N-1]; an uncovered span is exactly the end effect this package's
    extension methods exist to prevent.
    """
    n = len(values)
    if len(ext.maxima) < 2 or len(ext.minima) < 2:
        raise DegenerateEnvelopeError(
            f"{len(ext.maxima)} maxima / {len(ext.minima)} minima: "
            "cannot build both envelopes")
    idx = np.arange(n)
    upper = spline_interpolate([(e.t, e.value) for e in ext.maxima], idx)
    lower = spline_interpolate([(e.t, e.value) for e in ext.minima], idx)
    return upper, lower
