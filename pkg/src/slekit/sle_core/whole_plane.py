"""Whole-plane SLE toward 0, approximated by radial SLE in a large disc.

Conditioned on its first visit to the circle |z| = N, the remainder of a
whole-plane trace is radial SLE in the disc of radius N.  The hitting angle
is uniform by rotation invariance, so the approximant is N e^{i theta}
times a standard radial trace with theta uniform and independent of the
driving.  Error vanishes as N grows; N >= 4R is enforced.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .driving import sample_driving
from .loewner import DEFAULT_EPS, trace_from_driving
from .trace import Trace
from .zipper import AdaptiveConfig, adaptive_trace, default_horizon

# spawn key separating the angle stream from the driving stream
_ANGLE_KEY = 0xA96


@dataclass(frozen=True)
class WholePlaneConfig:
    disc_radius: float
    target_points_radius: float
    kappa: float

    def __post_init__(self):
        if not (self.target_points_radius > 0.0):
            raise ValueError("target_points_radius must be positive")
        if not (self.disc_radius >= 4.0 * self.target_points_radius):
            raise ValueError(
                f"disc radius {self.disc_radius} below 4 * R = {4 * self.target_points_radius}")


def start_angle(seed: int) -> float:
    """Uniform angle in [0, 2 pi) drawn from a stream independent of the driving."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(_ANGLE_KEY,))
    return 2.0 * math.pi * float(np.random.default_rng(ss).random())


def simulate_whole_plane_approx(cfg: WholePlaneConfig, horizon: float | None, dt: float, seed: int,
                                epsilon: float = DEFAULT_EPS, *, method: str = "flow",
                                queries=(), adaptive: AdaptiveConfig | None = None,
                                r_min: float | None = None) -> Trace:
    """Approximate whole-plane trace, in plane coordinates.

    ``horizon=None`` uses ln(N / r_min) + 6 (``r_min`` then required).
    ``method="adaptive"`` refines near ``queries`` (plane coordinates); the
    resolution in ``adaptive`` is given in plane units too.
    """
    N = float(cfg.disc_radius)
    if horizon is None:
        if r_min is None:
            raise ValueError("need horizon or r_min")
        horizon = default_horizon(r_min, N)
    theta = start_angle(seed)
    rot = cmath.exp(1j * theta)
    drv = sample_driving(cfg.kappa, horizon, dt, seed)
    if method == "adaptive":
        a = adaptive or AdaptiveConfig()
        scaled = AdaptiveConfig(h_min=a.h_min / N, h_max=a.h_max / N, rel=a.rel, max_depth=a.max_depth)
        q = np.atleast_1d(np.asarray(queries, dtype=complex)) / (N * rot) if len(queries) else ()
        base = adaptive_trace(drv, q, scaled)
    else:
        base = trace_from_driving(drv, epsilon=epsilon, method=method)
    return Trace(points=base.points * (N * rot), times=base.times, kappa=base.kappa, dt=dt,
                 seed=base.seed, horizon=base.horizon, scale=N, rotation=theta, meta=dict(base.meta))
