"""Decompose-model-aggregate forecasting.

Fit: preprocess, decompose with the chosen end condition, train one
RBF-kernel SVR per component (PMI-selected lags, PSO-tuned
hyperparameters), then a linear-kernel SVR aggregating the component
predictions. Multi-step forecasts iterate each component model on its own
predictions; rolling evaluation refreshes the decomposition as new
observations arrive but never retrains the SVRs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import features, preprocess, pso, svr
from .emd import SiftingConfig, decompose
from .series import Series


@dataclass(frozen=True)
class FitConfig:
    period: int = 12
    alpha: float = 0.05
    max_lag: int = 12
    passes_per_imf: int = 10
    pso_swarm: int = 10
    pso_iterations: int = 50
    cv_folds: int = 10
    solver_tol: float = 1e-3
    solver_cap: int | None = 200  # dual updates per CV train, times n
    pmi_permutations: int = 100


@dataclass(frozen=True)
class ComponentModel:
    model: svr.SvrModel
    lags: tuple

    @property
    def max_lag(self) -> int:
        return max(self.lags)


@dataclass(frozen=True)
class EnsembleModel:
    pipeline: preprocess.PreprocessPipeline
    end_condition: str | None  # None for the single-SVR baseline
    component_models: tuple
    aggregator: svr.SvrModel | None  # None when fallback
    n_components: int
    fallback: bool
    config: FitConfig
    seed: int


def _lagged_design(values, lags):
    x = np.asarray(values, dtype=float)
    m = max(lags)
    rows = np.column_stack([x[m - lag:len(x) - lag] for lag in lags])
    return rows, x[m:]


def _select_lags(comp, cfg: FitConfig, seed: int) -> tuple:
    if np.std(comp) < 1e-12:
        return (1,)
    lag_set = features.select_inputs(comp, max_lag=cfg.max_lag, seed=seed,
                                     n_permutations=cfg.pmi_permutations)
    return lag_set.lags if lag_set.lags else (1,)


def _fit_component(comp, cfg: FitConfig, seed: int,
                   kernel_kind: str = "rbf") -> ComponentModel:
    lags = _select_lags(comp, cfg, seed)
    X, y = _lagged_design(comp, lags)
    params = pso.tune_svr(X, y, kernel_kind=kernel_kind, cv_folds=cfg.cv_folds,
                          swarm_size=cfg.pso_swarm,
                          iterations=cfg.pso_iterations, seed=seed,
                          solver_tol=cfg.solver_tol,
                          solver_cap=cfg.solver_cap)
    return ComponentModel(svr.train(X, y, params, tol=cfg.solver_tol), lags)


def fit(s: Series, end_condition: str | None, seed: int = 0,
        config: FitConfig = FitConfig()) -> EnsembleModel:
    """Fit the full ensemble; ``end_condition=None`` fits the single-SVR
    baseline on the preprocessed series."""
    if len(s) < 60:
        raise ValueError("need at least 60 observations to fit")
    pipeline = preprocess.fit_pipeline(s, config.period, config.alpha)
    z = preprocess.apply(pipeline, s).values

    components = None
    if end_condition is not None:
        d = decompose(Series(z, s.t0, s.dt),
                      SiftingConfig(end_condition, config.passes_per_imf))
        if d.imfs:
            components = d.components
    fallback = components is None
    if fallback:
        components = [z]

    comp_models = tuple(
        _fit_component(comp, config, seed + 31 * j)
        for j, comp in enumerate(components))

    aggregator = None
    if not fallback:
        t0 = max(cm.max_lag for cm in comp_models)
        n = len(z)
        P = np.column_stack([
            svr.predict(cm.model,
                        _lagged_design(comp, cm.lags)[0][t0 - cm.max_lag:])
            for cm, comp in zip(comp_models, components)])
        params = pso.tune_svr(P, z[t0:], kernel_kind="linear",
                              cv_folds=config.cv_folds,
                              swarm_size=config.pso_swarm,
                              iterations=config.pso_iterations,
                              seed=seed + 997,
                              solver_tol=config.solver_tol,
                              solver_cap=config.solver_cap)
        aggregator = svr.train(P, z[t0:], params, tol=config.solver_tol)

    return EnsembleModel(pipeline, end_condition, comp_models, aggregator,
                         n_components=len(comp_models), fallback=fallback,
                         config=config, seed=seed)


def _current_components(m: EnsembleModel, z):
    """Component series for the (possibly extended) preprocessed input,
    padded with zero components if re-decomposition yields fewer IMFs."""
    if m.fallback:
        return [np.asarray(z, float)]
    d = decompose(Series(z), SiftingConfig(m.end_condition,
                                           m.config.passes_per_imf,
                                           max_imfs=m.n_components - 1))
    comps = [imf.values for imf in d.imfs]
    while len(comps) < m.n_components - 1:
        comps.append(np.zeros(len(z)))
    comps.append(d.residue)
    return comps


def forecast(m: EnsembleModel, s: Series, h: int):
    """Iterated h-step forecast on the original scale."""
    if h < 1:
        raise ValueError("horizon must be >= 1")
    z = preprocess.apply(m.pipeline, s).values
    windows = [list(comp) for comp in _current_components(m, z)]
    out = []
    for _ in range(h):
        comp_preds = []
        for cm, window in zip(m.component_models, windows):
            x = np.array([window[-lag] for lag in cm.lags])
            p = svr.predict(cm.model, x)
            window.append(p)
            comp_preds.append(p)
        if m.aggregator is not None:
            out.append(svr.predict(m.aggregator, np.array(comp_preds)))
        else:
            out.append(comp_preds[0])
    fc = Series(np.array(out), t0=s.t0 + len(s) * s.dt, dt=s.dt)
    return preprocess.invert(m.pipeline, fc).values


def rolling_evaluate(m: EnsembleModel, s_train: Series, s_test: Series,
                     h: int):
    """Hold-out forecasts aligned to test indices, on the original scale.

    h == 1: one-step forecasts from every test origin, refreshing the
    decomposition (not the models) with each newly observed point.
    h > 1: a single h-step iterated forecast from the end of the training
    sample.
    """
    if h == 1:
        out = []
        for i in range(len(s_test)):
            cur = s_train.extended(s_test.values[:i])
            out.append(forecast(m, cur, 1)[0])
        return np.array(out)
    if h > len(s_test):
        raise ValueError("horizon exceeds the hold-out length")
    return forecast(m, s_train, h)
