"""Per-sample trace generation for the harness."""
from __future__ import annotations

from dataclasses import asdict, dataclass, replace

import numpy as np

from ..bounds.kernels import RADIAL, WHOLE_PLANE
from ..sle_core import (
    AdaptiveConfig,
    WholePlaneConfig,
    adaptive_trace,
    default_horizon,
    sample_driving,
    simulate_whole_plane_approx,
    trace_from_driving,
)
from ..sle_core.trace import Trace


@dataclass(frozen=True)
class EngineConfig:
    """How each sample trace is produced.

    ``method="adaptive"`` refines the driving near the query points.
    ``h_min`` is absolute (defaults to r_min / 8); ``h_max`` is a fraction of
    the domain radius (1 radial, N whole-plane).  ``horizon=None`` means
    ln(N / r_min) + 6.
    """

    mode: str = RADIAL
    dt: float = 0.01
    horizon: float | None = None
    method: str = "adaptive"
    epsilon: float = 1e-6
    disc_radius: float | None = None
    rel: float = 0.25
    h_min: float | None = None
    h_max: float = 0.1
    max_depth: int = 24

    def __post_init__(self):
        if self.mode not in (RADIAL, WHOLE_PLANE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.method not in ("adaptive", "zipper", "flow"):
            raise ValueError(f"unknown method {self.method!r}")
        if not (self.dt > 0):
            raise ValueError("dt must be positive")
        if self.mode == WHOLE_PLANE and self.disc_radius is None:
            raise ValueError("whole-plane mode needs disc_radius")

    @property
    def scale(self) -> float:
        return 1.0 if self.mode == RADIAL else float(self.disc_radius)

    def resolved(self, r_min: float) -> "EngineConfig":
        """Fill in the r_min-dependent defaults."""
        horizon = self.horizon if self.horizon is not None else default_horizon(r_min, self.scale)
        h_min = self.h_min if self.h_min is not None else r_min / 8.0
        return replace(self, horizon=horizon, h_min=h_min)

    def to_dict(self) -> dict:
        return asdict(self)


def sample_seed(master_seed: int, index: int) -> int:
    """64-bit seed of sample ``index``; independent of scheduling."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


def simulate_sample(kappa: float, cfg: EngineConfig, seed: int, queries=(), r_min: float = 0.01,
                    target_radius: float | None = None) -> Trace:
    cfg = cfg.resolved(r_min)
    q = np.atleast_1d(np.asarray(queries, dtype=complex)) if len(queries) else np.zeros(0, complex)
    if cfg.mode == WHOLE_PLANE:
        R = target_radius if target_radius is not None else (float(np.max(np.abs(q))) if q.size else 1.0)
        wp = WholePlaneConfig(disc_radius=cfg.disc_radius, target_points_radius=R, kappa=kappa)
        ad = AdaptiveConfig(h_min=cfg.h_min, h_max=cfg.h_max * cfg.scale, rel=cfg.rel,
                            max_depth=cfg.max_depth)
        return simulate_whole_plane_approx(wp, cfg.horizon, cfg.dt, seed, cfg.epsilon,
                                           method=cfg.method, queries=q, adaptive=ad)
    drv = sample_driving(kappa, cfg.horizon, cfg.dt, seed)
    if cfg.method == "adaptive":
        ad = AdaptiveConfig(h_min=min(cfg.h_min, cfg.h_max), h_max=cfg.h_max, rel=cfg.rel,
                            max_depth=cfg.max_depth)
        return adaptive_trace(drv, q, ad)
    return trace_from_driving(drv, epsilon=cfg.epsilon, method=cfg.method)
