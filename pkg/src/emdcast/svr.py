"""Epsilon-insensitive support vector regression.

The dual QP is solved in the beta = a - a* parameterization by sequential
two-variable updates: pick the pair of coordinates most violating the KKT
conditions, move along the sum-preserving direction with the analytic step,
repeat until the maximum violation drops below tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class KernelSpec:
    kind: str  # "rbf" or "linear"
    gamma: float | None = None

    def __post_init__(self):
        if self.kind not in ("rbf", "linear"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "rbf" and (self.gamma is None or self.gamma <= 0):
            raise ValueError("rbf kernel needs gamma > 0")


@dataclass(frozen=True)
class SvrParams:
    C: float
    epsilon: float
    kernel: KernelSpec

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError("C must be positive")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")


def kernel_matrix(spec: KernelSpec, a, b):
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if a.shape[1] != b.shape[1]:
        raise ValueError("kernel input dimension mismatch")
    if spec.kind == "linear":
        return a @ b.T
    sq = (np.sum(a * a, axis=1)[:, None] + np.sum(b * b, axis=1)[None, :]
          - 2.0 * a @ b.T)
    return np.exp(-spec.gamma * np.maximum(sq, 0.0))


def kernel_eval(spec: KernelSpec, u, v) -> float:
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if u.shape != v.shape:
        raise ValueError("kernel input dimension mismatch")
    return float(kernel_matrix(spec, u[None, :], v[None, :])[0, 0])


def dual_objective(K, y, epsilon, beta) -> float:
    """0.5 b'Kb + eps*||b||_1 - y'b (the minimized dual)."""
    beta = np.asarray(beta, dtype=float)
    return float(0.5 * beta @ K @ beta + epsilon * np.abs(beta).sum()
                 - np.asarray(y, float) @ beta)


@dataclass(frozen=True)
class SvrModel:
    support_vectors: np.ndarray  # standardized inputs
    beta: np.ndarray
    bias: float
    kernel: KernelSpec
    x_mean: np.ndarray
    x_scale: np.ndarray
    converged: bool = True
    kkt_violation: float = 0.0
    dual_value: float = 0.0

    def __post_init__(self):
        for name in ("support_vectors", "beta", "x_mean", "x_scale"):
            v = np.asarray(getattr(self, name), dtype=float)
            v.setflags(write=False)
            object.__setattr__(self, name, v)


def _pair_update_loop(K, y, C, epsilon, tol, max_updates):
    """Sequential two-variable updates on the beta dual.

    Per point the KKT conditions admit a bias interval [lower_i, upper_i];
    the optimum exists iff max(lower) <= min(upper) and the gap is the
    maximum KKT violation.
    """
    n = len(y)
    beta = np.zeros(n)
    g = np.zeros(n)  # K @ beta, maintained incrementally
    tiny = 1e-12
    viol = np.inf
    for _ in range(max_updates):
        best_lo = -np.inf
        best_up = np.inf
        i = -1
        j = -1
        for k in range(n):
            e = y[k] - g[k]
            lo = e + epsilon if beta[k] < 0 else e - epsilon
            up = e - epsilon if beta[k] > 0 else e + epsilon
            if beta[k] < C - tiny and lo > best_lo:
                best_lo = lo
                i = k
            if beta[k] > -C + tiny and up < best_up:
                best_up = up
                j = k
        viol = best_lo - best_up
        if viol < tol:
            break
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        step = viol / eta if eta > tiny else np.inf
        # box caps and sign-crossing caps (the epsilon slope changes at 0)
        step = min(step, C - beta[i], beta[j] + C)
        if beta[i] < 0:
            step = min(step, -beta[i])
        if beta[j] > 0:
            step = min(step, beta[j])
        beta[i] += step
        beta[j] -= step
        for k in range(n):
            g[k] += step * (K[k, i] - K[k, j])
    return beta, g, viol


try:  # hot loop; JIT when numba is available
    from numba import njit

    _pair_update_loop = njit(cache=True)(_pair_update_loop)
except ImportError:  # pragma: no cover
    pass


def _solve_dual(K, y, C, epsilon, tol=1e-3, max_updates=None):
    n = len(y)
    if max_updates is None:
        max_updates = 10_000 * n
    beta, g, viol = _pair_update_loop(
        np.ascontiguousarray(K, dtype=np.float64),
        np.ascontiguousarray(y, dtype=np.float64),
        float(C), float(epsilon), float(tol), int(max_updates))
    tiny = 1e-12
    converged = viol < tol
    # bias: average over unbounded support vectors, else the midpoint of
    # the admissible interval
    e = y - g
    margin = 1e-8 * max(C, 1.0)
    unbounded = (np.abs(beta) > margin) & (np.abs(beta) < C - margin)
    if unbounded.any():
        b = float(np.mean(e[unbounded] - epsilon * np.sign(beta[unbounded])))
    else:
        lower = np.where(beta < 0, e + epsilon, e - epsilon)
        upper = np.where(beta > 0, e - epsilon, e + epsilon)
        lower[beta >= C - tiny] = -np.inf
        upper[beta <= -C + tiny] = np.inf
        b = float(0.5 * (lower.max() + upper.min()))
    return beta, b, converged, max(0.0, float(viol))


def train(X, y, p: SvrParams, tol: float = 1e-3,
          max_updates: int | None = None) -> SvrModel:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if X.shape[0] != len(y) or len(y) < 2:
        raise ValueError("need matching X/y with at least 2 samples")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("training data must be finite")
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0] = 1.0
    Xs = (X - mean) / scale
    K = kernel_matrix(p.kernel, Xs, Xs)
    beta, b, converged, viol = _solve_dual(K, y, p.C, p.epsilon, tol=tol,
                                           max_updates=max_updates)
    keep = np.abs(beta) > 1e-9
    return SvrModel(
        support_vectors=Xs[keep],
        beta=beta[keep],
        bias=b,
        kernel=p.kernel,
        x_mean=mean,
        x_scale=scale,
        converged=converged,
        kkt_violation=viol,
        dual_value=dual_objective(K, y, p.epsilon, beta),
    )


def predict(m: SvrModel, x):
    """f(x) = sum_i beta_i K(sv_i, x) + b; accepts a vector or a matrix."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    xs = (np.atleast_2d(x) - m.x_mean) / m.x_scale
    if m.support_vectors.size == 0:
        out = np.full(len(xs), m.bias)
    else:
        out = kernel_matrix(m.kernel, xs, m.support_vectors) @ m.beta + m.bias
    return float(out[0]) if single else out
