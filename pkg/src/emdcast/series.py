"""Core series and decomposition types."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Series:
    """Uniformly sampled real-valued observations.

    The time axis is the integer sample index scaled by ``dt`` and offset
    by ``t0``; all boundary-extension formulas operate on sample indices.
    """

    values: np.ndarray
    t0: float = 0.0
    dt: float = 1.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("series values must be one-dimensional")
        if not np.all(np.isfinite(v)):
            raise ValueError("series values must all be finite")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)

    def extended(self, new_values) -> "Series":
        """Series continuing this one on the same time axis."""
        return Series(np.concatenate([self.values, np.asarray(new_values, float)]),
                      t0=self.t0, dt=self.dt)


@dataclass(frozen=True)
class Imf:
    """One intrinsic mode function, same length as its source series."""

    values: np.ndarray
    index: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.index < 1:
            raise ValueError("IMF order index starts at 1")


@dataclass(frozen=True)
class Decomposition:
    """Ordered IMFs plus residue; sums back to the source series."""

    imfs: tuple
    residue: np.ndarray
    source_length: int

    def __post_init__(self):
        r = np.asarray(self.residue, dtype=float)
        r.setflags(write=False)
        object.__setattr__(self, "residue", r)
        object.__setattr__(self, "imfs", tuple(self.imfs))
        for imf in self.imfs:
            if len(imf.values) != self.source_length:
                raise ValueError("IMF length does not match source length")
        if len(r) != self.source_length:
            raise ValueError("residue length does not match source length")

    @property
    def components(self) -> list:
        """IMF value arrays followed by the residue."""
        return [imf.values for imf in self.imfs] + [self.residue]


def reconstruct(d: Decomposition) -> np.ndarray:
    """Element-wise sum of all IMFs and the residue."""
    total = np.array(d.residue, dtype=float)
    for imf in d.imfs:
        if len(imf.values) != len(total):
            raise ValueError("component length mismatch")
        total = total + imf.values
    return total


def split_holdout(s: Series, h: int):
    """Split off the last ``h`` observations as the hold-out sample."""
    if not 0 < h < len(s):
        raise ValueError(f"holdout length {h} must be in (0, {len(s)})")
    n = len(s) - h
    head = Series(s.values[:n], t0=s.t0, dt=s.dt)
    tail = Series(s.values[n:], t0=s.t0 + n * s.dt, dt=s.dt)
    return head, tail
