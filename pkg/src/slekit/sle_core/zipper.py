"""Fast trace engine: composition of exact radial slit maps.

Over a step of capacity D with constant driving angle a, the hull grows by a
radial slit [x(D), 1] e^{ia}; its inverse uniformising map is explicit, so a
trace point is the slit tip pushed through the previous inverse maps.  On
top of this the adaptive variant bisects driving intervals with Brownian
bridge samples until consecutive trace points are within a resolution that
shrinks near the query points.  This is what the Monte Carlo harness runs:
resolution is spent where hit events are decided.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .._jit import kernels
from .driving import DrivingPath
from .trace import Trace


@dataclass(frozen=True)
class AdaptiveConfig:
    """Resolution control.

    Near a query q the allowed step between trace points is ``rel * |w - q|``,
    clamped to ``[h_min, h_max]``.  ``h_min`` should sit well below the
    smallest radius that will be tested.
    """

    h_min: float = 1e-3
    h_max: float = 0.1
    rel: float = 0.25
    max_depth: int = 24

    def __post_init__(self):
        if not (0.0 < self.h_min <= self.h_max):
            raise ValueError("need 0 < h_min <= h_max")
        if not (self.rel > 0.0):
            raise ValueError("rel must be positive")
        if not (0 <= self.max_depth <= 60):
            raise ValueError("max_depth must lie in [0, 60]")


def slit_tip(cap: float) -> float:
    return kernels("slekit.sle_core").slit_tip(cap)


def adaptive_trace(driving: DrivingPath, queries=(), cfg: AdaptiveConfig = AdaptiveConfig()) -> Trace:
    """Trace with dyadic refinement steered by ``queries`` (disc coordinates)."""
    q = np.atleast_1d(np.asarray(queries, dtype=complex)) if len(queries) else np.zeros(0, complex)
    k = kernels("slekit.sle_core")
    pr, pi, ts, evals = k.zipper_adaptive(
        np.ascontiguousarray(driving.values), driving.dt, driving.kappa, np.uint64(driving.seed),
        np.ascontiguousarray(q.real), np.ascontiguousarray(q.imag),
        cfg.rel, cfg.h_min, cfg.h_max, cfg.max_depth, driving.level)
    pts = pr + 1j * pi
    return Trace(points=pts, times=ts, kappa=driving.kappa, dt=driving.dt, seed=driving.seed,
                 horizon=driving.horizon, meta={"method": "adaptive", "map_evals": int(evals)})


def default_horizon(r_min: float, scale: float = 1.0) -> float:
    """ln(scale / r_min) + 6: the conformal radius of 0 seen from outside
    the hull decays like e^{-t}, so by then every query ball is decided."""
    if not (r_min > 0.0):
        raise ValueError("r_min must be positive")
    return max(math.log(scale / r_min), 0.0) + 6.0
