"""Brownian driving functions on a uniform grid and their dyadic refinements."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _np


@dataclass(frozen=True, eq=False)
class DrivingPath:
    """Samples lambda(j * dt), j = 0..n, of sqrt(kappa) B.

    ``level`` counts dyadic refinements applied since sampling; the base grid
    spacing is ``dt * 2**level``.
    """

    dt: float
    values: np.ndarray
    seed: int
    kappa: float
    level: int = 0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_steps(self) -> int:
        return self.values.shape[0] - 1

    @property
    def horizon(self) -> float:
        return self.n_steps * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt

    @property
    def base_dt(self) -> float:
        return self.dt * (1 << self.level)

    def value_at(self, t):
        """Linear interpolation between grid samples."""
        return np.interp(t, self.times, self.values)


def _check_kappa(kappa):
    if not (0.0 <= kappa < 8.0):
        raise ValueError(f"kappa must lie in [0, 8), got {kappa}")


def _check_seed(seed):
    seed = int(seed)
    if not (0 <= seed < 2**64):
        raise ValueError("seed must be a non-negative 64-bit integer")
    return seed


def sample_driving(kappa: float, horizon: float, dt: float, seed: int) -> DrivingPath:
    """Sample sqrt(kappa) B on [0, T] at spacing dt.

    ``kappa == 0`` gives the identically zero path, which is useful for
    deterministic checks.
    """
    kappa = float(kappa)
    _check_kappa(kappa)
    seed = _check_seed(seed)
    if not (horizon > 0.0):
        raise ValueError("horizon must be positive")
    if not (0.0 < dt <= horizon):
        raise ValueError("need 0 < dt <= horizon")
    n = max(1, math.ceil(horizon / dt - 1e-9))
    rng = np.random.default_rng(seed)
    incr = rng.standard_normal(n) * math.sqrt(kappa * dt)
    values = np.concatenate([[0.0], np.cumsum(incr)])
    return DrivingPath(dt=float(dt), values=values, seed=seed, kappa=kappa)


def refine_driving(path: DrivingPath, levels: int = 1) -> DrivingPath:
    """Halve the grid ``levels`` times, filling midpoints with Brownian bridges.

    Existing samples are kept.  Midpoint noise is a hash of (seed, base
    interval, dyadic node) so refinement is reproducible and matches the
    bisections made by the adaptive engine.
    """
    if levels < 0:
        raise ValueError("levels must be non-negative")
    v = np.asarray(path.values)
    dt = path.dt
    level = path.level
    for _ in range(levels):
        n = v.shape[0] - 1
        i = np.arange(n)
        base = i >> level
        node = (1 << level) | (i & ((1 << level) - 1))
        noise = _np.hash_normal_array(path.seed, base, node)
        mid = 0.5 * (v[:-1] + v[1:]) + math.sqrt(path.kappa * dt / 4.0) * noise
        out = np.empty(2 * n + 1)
        out[0::2] = v
        out[1::2] = mid
        v = out
        dt = dt / 2.0
        level += 1
    return DrivingPath(dt=dt, values=v, seed=path.seed, kappa=path.kappa, level=level)
