"""The sifting process: iterative IMF extraction with a pluggable
end-condition method."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .endcond import ExtendedExtrema, extend
from .envelope import Extremum, build_envelopes, find_extrema
from .exceptions import DegenerateEnvelopeError
from .series import Decomposition, Imf, Series


@dataclass(frozen=True)
class SiftingConfig:
    end_condition: str = "rato"
    passes_per_imf: int = 10
    max_imfs: int | None = None  # None: floor(log2 N) at decompose time

    def __post_init__(self):
        if self.passes_per_imf < 1:
            raise ValueError("passes_per_imf must be >= 1")
        if self.max_imfs is not None and self.max_imfs < 1:
            raise ValueError("max_imfs must be >= 1")


def _with_endpoint(knots, t_edge, value):
    """Insert (t_edge, value) into a sorted knot tuple; a knot already at
    that time is replaced (splines pass through their knots, so the guard
    only fires when the existing knot is less extreme than the sample)."""
    out = [e for e in knots if e.t != t_edge]
    out.append(Extremum(t_edge, value))
    return tuple(sorted(out, key=lambda e: e.t))


def _bracket_endpoints(h, extended, upper, lower):
    """Force the envelopes to bracket the boundary samples.

    A steep run into a boundary can leave every nearby knot on one side of
    the data; the one-sided mean envelope then injects a large boundary
    artifact that compounds over sifting passes. When an endpoint escapes
    the envelopes, it becomes a knot itself and the envelopes are rebuilt.
    """
    maxima, minima = extended.maxima, extended.minima
    changed = False
    for t_edge in (0, len(h) - 1):
        if h[t_edge] > upper[t_edge]:
            maxima = _with_endpoint(maxima, t_edge, h[t_edge])
            changed = True
        if h[t_edge] < lower[t_edge]:
            minima = _with_endpoint(minima, t_edge, h[t_edge])
            changed = True
    if not changed:
        return upper, lower
    upper, lower = build_envelopes(
        h, ExtendedExtrema(maxima=maxima, minima=minima))
    return upper, lower


def sift_pass(h, end_condition: str):
    """One sifting pass: subtract the mean of the upper and lower spline
    envelopes built from boundary-extended extrema."""
    h = np.asarray(h, dtype=float)
    if len(h) < 4:
        raise ValueError("need at least 4 samples to sift")
    ext = find_extrema(h)
    extended = extend(end_condition, h, ext)
    upper, lower = build_envelopes(h, extended)
    upper, lower = _bracket_endpoints(h, extended, upper, lower)
    return h - 0.5 * (upper + lower)


def _residue_is_trend(r) -> bool:
    """Stop rule: fewer than 2 maxima or 2 minima means no envelope pair
    exists, so the remainder is a constant or trend."""
    if len(r) < 3:
        return True
    ext = find_extrema(r)
    return len(ext.maxima) < 2 or len(ext.minima) < 2


def decompose(s: Series, cfg: SiftingConfig) -> Decomposition:
    """Extract IMFs with a fixed number of sifting passes per IMF.

    Stops when the residue has too few extrema or the IMF cap is reached.
    The residue is defined by subtraction, so reconstruction is exact up
    to float rounding.
    """
    x = s.values
    n = len(x)
    if n < 8:
        raise ValueError("series too short to decompose (need >= 8)")
    cap = cfg.max_imfs if cfg.max_imfs is not None else int(np.floor(np.log2(n)))
    imfs = []
    r = np.array(x)
    while len(imfs) < cap and not _residue_is_trend(r):
        h = r
        try:
            for _ in range(cfg.passes_per_imf):
                h = sift_pass(h, cfg.end_condition)
        except DegenerateEnvelopeError:
            break  # candidate is the residue
        imfs.append(Imf(h, index=len(imfs) + 1))
        r = r - h
    residue = x - sum((imf.values for imf in imfs), np.zeros(n))
    return Decomposition(tuple(imfs), residue, source_length=n)
