"""Particle swarm search over SVR hyperparameters with a cross-validated
objective. Positions live in log10 space of (C, epsilon, gamma)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import svr

# log10 bounds spanning standard SVR practice
DEFAULT_BOUNDS = ((-2.0, 3.0), (-4.0, 0.0), (-3.0, 2.0))  # C, epsilon, gamma


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 10
    iterations: int = 50
    c1: float = 2.0
    c2: float = 2.0
    inertia_start: float = 0.9
    inertia_end: float = 0.4
    bounds: tuple = DEFAULT_BOUNDS
    seed: int = 0

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ValueError("swarm_size must be >= 2")
        for lo, hi in self.bounds:
            if not lo < hi:
                raise ValueError("each bound must satisfy low < high")


@dataclass(frozen=True)
class SearchResult:
    best_position: np.ndarray
    best_score: float
    history: tuple  # best score after each iteration, non-increasing

    def __post_init__(self):
        p = np.asarray(self.best_position, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "best_position", p)


def cv_objective(X, y, params: svr.SvrParams, k: int = 10,
                 solver_tol: float = 1e-3,
                 solver_cap: int | None = None) -> float:
    """Mean validation RMSE over k contiguous-block folds.

    Blocks preserve temporal order: each fold's validation set is one
    contiguous segment; the model trains on everything else.
    ``solver_cap`` bounds dual updates per train (in multiples of n), so
    hyperparameter search does not stall in slow-converging corners; the
    final model is always trained at full precision.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    n = len(y)
    if n < k:
        raise ValueError(f"need at least k={k} samples, got {n}")
    edges = np.linspace(0, n, k + 1).astype(int)
    rmses = []
    for f in range(k):
        lo, hi = edges[f], edges[f + 1]
        mask = np.ones(n, dtype=bool)
        mask[lo:hi] = False
        cap = None if solver_cap is None else solver_cap * int(mask.sum())
        model = svr.train(X[mask], y[mask], params, tol=solver_tol,
                          max_updates=cap)
        pred = svr.predict(model, X[lo:hi])
        rmses.append(float(np.sqrt(np.mean((pred - y[lo:hi]) ** 2))))
    return float(np.mean(rmses))


def optimize(objective, cfg: PsoConfig) -> SearchResult:
    """Global-best PSO over the bounded box; deterministic given the seed."""
    rng = np.random.default_rng(cfg.seed)
    lo = np.array([b[0] for b in cfg.bounds])
    hi = np.array([b[1] for b in cfg.bounds])
    dim = len(cfg.bounds)
    x = rng.uniform(lo, hi, size=(cfg.swarm_size, dim))
    v = np.zeros_like(x)
    scores = np.array([objective(p) for p in x])
    pbest = x.copy()
    pbest_scores = scores.copy()
    g = int(np.argmin(pbest_scores))
    gbest, gbest_score = pbest[g].copy(), float(pbest_scores[g])
    history = []
    for it in range(cfg.iterations):
        w = cfg.inertia_start + (cfg.inertia_end - cfg.inertia_start) * (
            it / max(1, cfg.iterations - 1))
        r1 = rng.random((cfg.swarm_size, dim))
        r2 = rng.random((cfg.swarm_size, dim))
        v = w * v + cfg.c1 * r1 * (pbest - x) + cfg.c2 * r2 * (gbest - x)
        x = np.clip(x + v, lo, hi)
        scores = np.array([objective(p) for p in x])
        improved = scores < pbest_scores
        pbest[improved] = x[improved]
        pbest_scores[improved] = scores[improved]
        g = int(np.argmin(pbest_scores))
        if pbest_scores[g] < gbest_score:
            gbest, gbest_score = pbest[g].copy(), float(pbest_scores[g])
        history.append(gbest_score)
    return SearchResult(gbest, gbest_score, tuple(history))


def tune_svr(X, y, kernel_kind: str = "rbf", cv_folds: int = 10,
             swarm_size: int = 10, iterations: int = 50, seed: int = 0,
             solver_tol: float = 1e-3,
             solver_cap: int | None = 200) -> svr.SvrParams:
    """PSO search for (C, epsilon[, gamma]) minimizing blocked-CV RMSE."""
    if kernel_kind == "rbf":
        bounds = DEFAULT_BOUNDS
        make = lambda p: svr.SvrParams(10 ** p[0], 10 ** p[1],
                                       svr.KernelSpec("rbf", 10 ** p[2]))
    else:
        bounds = DEFAULT_BOUNDS[:2]
        make = lambda p: svr.SvrParams(10 ** p[0], 10 ** p[1],
                                       svr.KernelSpec("linear"))
    cfg = PsoConfig(swarm_size=swarm_size, iterations=iterations,
                    bounds=bounds, seed=seed)
    result = optimize(
        lambda p: cv_objective(X, y, make(p), k=cv_folds,
                               solver_tol=solver_tol,
                               solver_cap=solver_cap), cfg)
    return make(result.best_position)
