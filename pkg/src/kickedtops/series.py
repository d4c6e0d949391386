"""Time-series containers shared by the quantum and classical tops."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class VarianceSeries:
    """Variance of z = J_z/j at integer kick counts (t=0 is pre-kick)."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=int)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape:
            raise ValueError("times and values must have the same length")
        if np.any(v < -1e-12) or np.any(v > 1.0 + 1e-12):
            raise ValueError("variance of z must lie in [0, 1]")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class EntropySeries:
    """Linear and von Neumann entropies (nats) at integer kick counts."""

    times: np.ndarray
    s_lin: np.ndarray
    s_vn: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=int)
        sl = np.asarray(self.s_lin, dtype=float)
        sv = np.asarray(self.s_vn, dtype=float)
        if not (t.shape == sl.shape == sv.shape):
            raise ValueError("times, s_lin, s_vn must have the same length")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "s_lin", sl)
        object.__setattr__(self, "s_vn", sv)
