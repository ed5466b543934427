"""Lag selection via partial mutual information.

MI is estimated with Gaussian kernel densities (Gaussian-reference
bandwidth); conditional expectations use Nadaraya-Watson regression; the
greedy forward selection stops at a permutation-surrogate threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SQRT_2PI = np.sqrt(2 * np.pi)


@dataclass(frozen=True)
class LagSet:
    lags: tuple  # in selection order
    scores: tuple  # PMI at the iteration each lag was added

    @property
    def max_lag(self) -> int:
        return max(self.lags) if self.lags else 0


def _bandwidth(x):
    sigma = float(np.std(x))
    if sigma == 0:
        raise ValueError("zero-variance input")
    return 1.06 * sigma * len(x) ** (-0.2)


def _kernel_matrix(x):
    h = _bandwidth(x)
    d = (x[:, None] - x[None, :]) / h
    return np.exp(-0.5 * d * d) / (h * SQRT_2PI)


def mutual_information(x, y) -> float:
    """KDE-based MI estimate in nats, clamped at 0."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) != len(y):
        raise ValueError("inputs must have equal length")
    kx = _kernel_matrix(x)
    ky = _kernel_matrix(y)
    # leave-one-out densities: the self-kernel term otherwise inflates the
    # joint density more than the marginals and biases MI upward
    n = len(x)
    np.fill_diagonal(kx, 0.0)
    np.fill_diagonal(ky, 0.0)
    fx = kx.sum(axis=1) / (n - 1)
    fy = ky.sum(axis=1) / (n - 1)
    fxy = (kx * ky).sum(axis=1) / (n - 1)
    return max(0.0, float(np.mean(np.log(fxy / (fx * fy)))))


def nw_conditional_mean(x, z):
    """Nadaraya-Watson estimate of E[x | z] at each sample; with no
    conditioning variables this is the plain mean."""
    x = np.asarray(x, dtype=float)
    if z is None or (hasattr(z, "size") and z.size == 0) or len(z) == 0:
        return np.full(len(x), x.mean())
    z = np.atleast_2d(np.asarray(z, dtype=float))
    if z.shape[0] == len(x) and z.shape[1] != len(x):
        z = z.T  # accept (n, d) layout
    logw = np.zeros((len(x), len(x)))
    for dim in z:
        h = _bandwidth(dim)
        d = (dim[:, None] - dim[None, :]) / h
        logw -= 0.5 * d * d
    w = np.exp(logw - logw.max(axis=1, keepdims=True))
    return w @ x / w.sum(axis=1)


def partial_mutual_information(x, y, z=None) -> float:
    """MI between the residuals of x and y after kernel regression on z."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xr = x - nw_conditional_mean(x, z)
    yr = y - nw_conditional_mean(y, z)
    return mutual_information(xr, yr)


def select_inputs(values, max_lag: int = 12, seed: int = 0,
                  n_permutations: int = 100) -> LagSet:
    """Greedy forward lag selection by conditional PMI.

    Each iteration adds the lag with the highest PMI given the already
    selected lags; selection stops when the best candidate no longer beats
    the 95th percentile of its own permutation surrogates.
    """
    x = np.asarray(values, dtype=float)
    if len(x) < 5 * max_lag:
        raise ValueError(f"need at least {5 * max_lag} observations")
    n = len(x) - max_lag
    y = x[max_lag:]
    cand = {lag: x[max_lag - lag:len(x) - lag] for lag in range(1, max_lag + 1)}
    rng = np.random.default_rng(seed)
    selected, scores = [], []
    while len(selected) < max_lag:
        z = np.array([cand[l] for l in selected]) if selected else None
        yr = y - nw_conditional_mean(y, z)
        best_lag, best_pmi = None, -np.inf
        for lag in cand:
            if lag in selected:
                continue
            xr = cand[lag] - nw_conditional_mean(cand[lag], z)
            pmi = mutual_information(xr, yr)
            if pmi > best_pmi:
                best_lag, best_pmi = lag, pmi
        surrogate = np.empty(n_permutations)
        for i in range(n_permutations):
            xp = rng.permutation(cand[best_lag])
            xpr = xp - nw_conditional_mean(xp, z)
            surrogate[i] = mutual_information(xpr, yr)
        if best_pmi <= np.percentile(surrogate, 95):
            break
        selected.append(best_lag)
        scores.append(best_pmi)
    return LagSet(tuple(selected), tuple(scores))
