"""Forecast accuracy measures and equality-of-accuracy tests.

SMAPE and MASE score the forecasts; one-way ANOVA followed by the Tukey
HSD test compares models. The studentized-range critical value is computed
by numerical integration so any degrees of freedom are supported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln
from scipy.stats import f as f_dist
from scipy.stats import norm

from .exceptions import UndefinedScaleError


def smape(actual, forecast) -> float:
    """Symmetric MAPE in percent. A 0/0 term counts as 0 (limit
    convention). Pool multiple series by concatenating them: the measure
    averages over all points jointly."""
    a = np.asarray(actual, dtype=float)
    f = np.asarray(forecast, dtype=float)
    if a.shape != f.shape or a.size < 1:
        raise ValueError("actual and forecast must have equal nonzero length")
    denom = 0.5 * (np.abs(a) + np.abs(f))
    terms = np.zeros_like(a)
    nz = denom > 0
    terms[nz] = np.abs(a[nz] - f[nz]) / denom[nz]
    return float(100.0 * terms.mean())


def mase(actual, forecast, estimation_sample) -> float:
    """Mean absolute error scaled by the naive one-step MAE on the
    estimation sample."""
    a = np.asarray(actual, dtype=float)
    f = np.asarray(forecast, dtype=float)
    est = np.asarray(estimation_sample, dtype=float)
    if a.shape != f.shape:
        raise ValueError("actual and forecast must have equal length")
    if len(est) < 2:
        raise ValueError("estimation sample needs at least 2 observations")
    d = np.abs(np.diff(est)).mean()
    if d == 0:
        raise UndefinedScaleError("constant estimation sample")
    return float(np.mean(np.abs(a - f)) / d)


def anova_oneway(groups) -> dict:
    """Standard between/within decomposition with an F-distribution
    p-value."""
    groups = [np.asarray(g, dtype=float) for g in groups]
    if len(groups) < 2 or any(len(g) < 2 for g in groups):
        raise ValueError("need >= 2 groups with >= 2 values each")
    k = len(groups)
    n = sum(len(g) for g in groups)
    grand = np.concatenate(groups).mean()
    ssb = sum(len(g) * (g.mean() - grand) ** 2 for g in groups)
    ssw = sum(((g - g.mean()) ** 2).sum() for g in groups)
    if ssw == 0 and ssb == 0:
        return {"F": 0.0, "p": 1.0, "df": (k - 1, n - k)}
    msb = ssb / (k - 1)
    msw = ssw / (n - k)
    F = np.inf if msw == 0 else msb / msw
    p = 0.0 if msw == 0 else float(f_dist.sf(F, k - 1, n - k))
    return {"F": float(F), "p": p, "df": (k - 1, n - k)}


# ---------------------------------------------------------------------------
# studentized range distribution by Gauss-Legendre panel integration
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _panel_integral(fn, lo, hi, n_panels):
    edges = np.linspace(lo, hi, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    xs = (mid[:, None] + half * _GL_NODES[None, :]).ravel()
    ws = np.tile(half * _GL_WEIGHTS, n_panels)
    return float(np.dot(ws, fn(xs)))


def _range_cdf(w, k):
    """P(range of k iid standard normals <= w), vectorized over w."""
    w = np.atleast_1d(np.asarray(w, dtype=float))
    wmax = float(w.max())
    lo, hi = -8.5, 8.5 + max(wmax, 0.0)
    n_panels = max(16, int(1.5 * (hi - lo)))
    edges = np.linspace(lo, hi, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    z = (mid[:, None] + half * _GL_NODES[None, :]).ravel()
    ws = np.tile(half * _GL_WEIGHTS, n_panels)
    cdf_z = norm.cdf(z)
    inner = np.power(np.clip(cdf_z[None, :] - norm.cdf(z[None, :] - w[:, None]),
                             0.0, 1.0), k - 1)
    out = inner @ (ws * k * norm.pdf(z))
    out[w <= 0] = 0.0
    return out


def studentized_range_cdf(q, k, df) -> float:
    """CDF of the studentized range: the range integral mixed over the
    scaled-chi distribution of the pooled standard deviation."""
    if q <= 0:
        return 0.0
    if k < 2:
        raise ValueError("need k >= 2 groups")
    # density of s = chi_df / sqrt(df)
    log_c = 0.5 * df * np.log(df) - gammaln(0.5 * df) - (0.5 * df - 1) * np.log(2)
    sd = 1.0 / np.sqrt(2 * df)
    lo = max(1e-12, 1 - 12 * sd)
    hi = 1 + 12 * sd
    edges = np.linspace(lo, hi, 21)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    s = (mid[:, None] + half * _GL_NODES[None, :]).ravel()
    ws = np.tile(half * _GL_WEIGHTS, 20)
    log_fs = log_c + (df - 1) * np.log(s) - 0.5 * df * s * s
    return min(1.0, float(np.dot(ws * np.exp(log_fs), _range_cdf(q * s, k))))


def studentized_range_quantile(alpha, k, df) -> float:
    """Upper-alpha critical value q such that P(Q > q) = alpha."""
    target = 1.0 - alpha
    return float(brentq(lambda q: studentized_range_cdf(q, k, df) - target,
                        1e-3, 100.0, xtol=1e-5, rtol=1e-8))


@dataclass(frozen=True)
class TukeyResult:
    labels: tuple
    means: tuple
    difference: np.ndarray  # pairwise mean differences, labels order
    significant: np.ndarray  # symmetric boolean matrix
    order: tuple  # label indices ascending by group mean
    critical_value: float
    hsd: float

    def rank_chain(self) -> str:
        """Ordered labels with '<*' marking significant adjacent pairs."""
        parts = [str(self.labels[self.order[0]])]
        for a, b in zip(self.order[:-1], self.order[1:]):
            sep = "<*" if self.significant[a, b] else "<"
            parts += [sep, str(self.labels[b])]
        return " ".join(parts)


def tukey_hsd(groups, alpha: float = 0.05, labels=None) -> TukeyResult:
    """Tukey honestly-significant-difference test on balanced groups.

    Callers should only run this after a significant ANOVA.
    """
    groups = [np.asarray(g, dtype=float) for g in groups]
    k = len(groups)
    if k < 2:
        raise ValueError("need >= 2 groups")
    sizes = {len(g) for g in groups}
    if len(sizes) != 1:
        raise ValueError("Tukey HSD here requires balanced groups")
    n_per = sizes.pop()
    if n_per < 2:
        raise ValueError("each group needs >= 2 values")
    if labels is None:
        labels = tuple(range(k))
    df = k * (n_per - 1)
    msw = float(np.mean([np.var(g, ddof=1) for g in groups]))
    means = np.array([g.mean() for g in groups])
    diff = means[:, None] - means[None, :]
    if msw == 0:
        sig = np.abs(diff) > 0
        qcrit, hsd = np.inf, 0.0
    else:
        qcrit = studentized_range_quantile(alpha, k, df)
        hsd = qcrit * np.sqrt(msw / n_per)
        sig = np.abs(diff) > hsd
    np.fill_diagonal(sig, False)
    order = tuple(int(i) for i in np.argsort(means, kind="stable"))
    return TukeyResult(tuple(labels), tuple(float(m) for m in means), diff,
                       sig, order, float(qcrit), float(hsd))
