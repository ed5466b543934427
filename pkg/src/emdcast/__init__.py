"""Decomposition-and-ensemble time series forecasting: EMD with boundary
end-condition methods, per-component SVR, and an evaluation harness."""

from .emd import SiftingConfig, decompose, sift_pass
from .endcond import ExtendedExtrema, extend
from .envelope import ExtremaSet, Extremum, build_envelopes, find_extrema
from .forecast import EnsembleModel, FitConfig
from .series import Decomposition, Imf, Series, reconstruct, split_holdout

__all__ = [
    "Decomposition", "EnsembleModel", "ExtendedExtrema", "ExtremaSet",
    "Extremum", "FitConfig", "Imf", "Series", "SiftingConfig",
    "build_envelopes", "decompose", "extend", "find_extrema",
    "reconstruct", "sift_pass", "split_holdout",
]
