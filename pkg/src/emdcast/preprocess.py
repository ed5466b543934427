"""Deseasonalization and Mann-Kendall-gated detrending.

Applied before modeling (divide by seasonal index, subtract fitted trend)
and inverted after forecasting. Multiplicative seasonal indices come from
per-month medians of the ratio to a centered moving average; a polynomial
trend (degree 1 or 2) is fitted only when the Mann-Kendall test detects a
trend on the deseasonalized series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .series import Series


@dataclass(frozen=True)
class SeasonalModel:
    period: int
    indices: np.ndarray  # length == period, positive, mean 1

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=float)
        if len(idx) != self.period:
            raise ValueError("need one index per period position")
        if np.any(idx <= 0):
            raise ValueError("multiplicative indices must be positive")
        if abs(idx.mean() - 1.0) > 1e-9:
            raise ValueError("indices must renormalize to mean 1")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)


@dataclass(frozen=True)
class TrendModel:
    degree: int
    coefficients: tuple  # highest power first, in sample-index units

    def evaluate(self, idx):
        return np.polyval(self.coefficients, np.asarray(idx, dtype=float))


@dataclass(frozen=True)
class PreprocessPipeline:
    seasonal: SeasonalModel | None
    trend: TrendModel | None
    t0: float = 0.0
    dt: float = 1.0

    def _indices(self, s: Series):
        """Absolute sample indices of ``s`` on the axis the pipeline was
        fitted on."""
        offset = (s.t0 - self.t0) / self.dt
        k = np.rint(offset)
        if abs(offset - k) > 1e-9 or abs(s.dt - self.dt) > 1e-12:
            raise ValueError("series is not aligned with the fitted time axis")
        return int(k) + np.arange(len(s))


def mann_kendall(values, alpha: float = 0.05) -> dict:
    """Mann-Kendall trend test with tie correction and continuity
    correction."""
    x = np.asarray(values, dtype=float)
    n = len(x)
    if n < 8:
        raise ValueError("Mann-Kendall needs at least 8 observations")
    s = int(np.sign(x[None, :] - x[:, None])[np.triu_indices(n, 1)].sum())
    var = n * (n - 1) * (2 * n + 5) / 18.0
    _, counts = np.unique(x, return_counts=True)
    ties = counts[counts > 1]
    if ties.size:
        var -= (ties * (ties - 1) * (2 * ties + 5)).sum() / 18.0
    if s > 0:
        z = (s - 1) / np.sqrt(var)
    elif s < 0:
        z = (s + 1) / np.sqrt(var)
    else:
        z = 0.0
    p = 2 * norm.sf(abs(z)) if var > 0 else 1.0
    return {"S": s, "z": float(z), "p": float(p),
            "trend_detected": bool(p < alpha)}


def _centered_moving_average(x, period: int):
    """2 x period centered MA (the standard even-period centering)."""
    w = np.full(period + 1, 1.0 / period)
    w[0] = w[-1] = 0.5 / period
    half = period // 2
    out = np.full(len(x), np.nan)
    for t in range(half, len(x) - half):
        out[t] = np.dot(w, x[t - half:t + half + 1])
    return out


def seasonal_indices(x, period: int):
    """Median-of-ratios multiplicative indices, renormalized to mean 1."""
    cma = _centered_moving_average(x, period)
    ratios = x / cma
    idx = np.empty(period)
    for m in range(period):
        r = ratios[m::period]
        r = r[np.isfinite(r)]
        if r.size == 0:
            raise ValueError("series too short to cover every period position")
        idx[m] = np.median(r)
    return idx / idx.mean()


def _fit_trend(y):
    """Degree-1 vs degree-2 polynomial by in-sample SSE, requiring a 1%
    improvement before accepting the quadratic."""
    t = np.arange(len(y), dtype=float)
    best = None
    sse1 = None
    for deg in (1, 2):
        coef = np.polyfit(t, y, deg)
        sse = float(np.sum((y - np.polyval(coef, t)) ** 2))
        if deg == 1:
            best, sse1 = TrendModel(1, tuple(coef)), sse
        elif sse < 0.99 * sse1:
            best = TrendModel(2, tuple(coef))
    return best


def fit_pipeline(s: Series, period: int = 12, alpha: float = 0.05) -> PreprocessPipeline:
    x = s.values
    if len(x) < 2 * period:
        raise ValueError("need at least two full periods to deseasonalize")
    if np.any(x <= 0):
        raise ValueError("multiplicative deseasonalization needs positive values")
    seasonal = SeasonalModel(period, seasonal_indices(x, period))
    deseas = x / seasonal.indices[np.arange(len(x)) % period]
    trend = _fit_trend(deseas) if mann_kendall(deseas, alpha)["trend_detected"] else None
    return PreprocessPipeline(seasonal, trend, t0=s.t0, dt=s.dt)


def apply(p: PreprocessPipeline, s: Series) -> Series:
    """Deseasonalize then detrend."""
    idx = p._indices(s)
    y = np.array(s.values, dtype=float)
    if p.seasonal is not None:
        y = y / p.seasonal.indices[idx % p.seasonal.period]
    if p.trend is not None:
        y = y - p.trend.evaluate(idx)
    return Series(y, t0=s.t0, dt=s.dt)


def invert(p: PreprocessPipeline, s: Series) -> Series:
    """Re-trend then re-seasonalize; exact inverse of :func:`apply` on any
    aligned index range, including forecast indices beyond the fit span."""
    idx = p._indices(s)
    y = np.array(s.values, dtype=float)
    if p.trend is not None:
        y = y + p.trend.evaluate(idx)
    if p.seasonal is not None:
        y = y * p.seasonal.indices[idx % p.seasonal.period]
    return Series(y, t0=s.t0, dt=s.dt)
