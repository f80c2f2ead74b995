"""Hit probabilities P[dist(gamma, z_k) < r_k for all k]."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..bounds.kernels import PointSpec
from ..sle_core.trace import dist_to_trace
from ._pool import map_samples
from .engine import EngineConfig, sample_seed, simulate_sample
from .stats import wilson_interval


class SampleFailure(RuntimeError):
    def __init__(self, failures):
        self.failures = failures
        idx = ", ".join(str(i) for i, _ in failures[:10])
        super().__init__(f"{len(failures)} sample(s) failed: {idx}")


@dataclass
class HitResult:
    """Per-sample minimum distances plus the aggregate for the query radii.

    ``distances[i, k]`` is dist(trace_i, z_k), so any other radius set can be
    evaluated afterwards with :meth:`evaluate`.
    """

    points: np.ndarray
    radii: np.ndarray
    distances: np.ndarray
    seeds: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def samples(self) -> int:
        return self.distances.shape[0]

    def hit_mask(self, radii=None) -> np.ndarray:
        radii = self.radii if radii is None else np.asarray(radii, dtype=float)
        return np.all(self.distances < radii[None, :], axis=1)

    def count(self, radii=None) -> int:
        return int(np.count_nonzero(self.hit_mask(radii)))

    @property
    def hits(self) -> int:
        return self.count()

    @property
    def p_hat(self) -> float:
        return self.hits / self.samples

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.hits, self.samples)

    def evaluate(self, radii) -> dict:
        k = self.count(radii)
        lo, hi = wilson_interval(k, self.samples)
        return {"hits": k, "samples": self.samples, "p_hat": k / self.samples, "lo": lo, "hi": hi}

    def marginal(self, k: int, r: float) -> dict:
        radii = np.full(self.radii.shape, np.inf)
        radii[k] = r
        return self.evaluate(radii)


def _one(task):
    kappa, cfg, seed, pts, r_min = task
    try:
        tr = simulate_sample(kappa, cfg, seed, pts, r_min)
        return np.atleast_1d(dist_to_trace(tr, pts)), None
    except Exception as exc:  # reported with the sample index by the caller
        return None, f"{type(exc).__name__}: {exc}"


def sample_distances(kappa, points, r_min, samples, seed, engine_cfg: EngineConfig,
                     start: int = 0, workers=1):
    """Distances of ``samples`` traces to ``points``; rows keyed by sample index."""
    pts = np.asarray(points, dtype=complex)
    seeds = [sample_seed(seed, i) for i in range(start, start + samples)]
    out = map_samples(_one, [(kappa, engine_cfg, s, pts, r_min) for s in seeds], workers)
    dist = np.full((samples, pts.size), np.nan)
    failures = []
    for i, (d, err) in enumerate(out):
        if err is None:
            dist[i] = d
        else:
            failures.append((start + i, err))
    return dist, seeds, failures


def estimate_hit_probability(params, specs, samples: int, seed: int,
                             engine_cfg: EngineConfig | None = None, *, r_min=None,
                             workers=1, raise_on_failure=True) -> HitResult:
    """Monte Carlo estimate over ``samples`` traces.

    ``r_min`` (default: smallest query radius) sets the engine resolution;
    pass the smallest radius of a whole sweep to reuse one campaign.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    specs = list(specs)
    if not specs or not all(isinstance(s, PointSpec) for s in specs):
        raise ValueError("need a non-empty list of PointSpec")
    engine_cfg = engine_cfg or EngineConfig(mode=specs[0].mode)
    if engine_cfg.mode != specs[0].mode:
        raise ValueError("engine mode and point mode differ")
    kappa = params.kappa if hasattr(params, "kappa") else float(params)
    pts = np.array([s.z for s in specs], dtype=complex)
    radii = np.array([s.r for s in specs], dtype=float)
    r_min = float(radii.min()) if r_min is None else float(r_min)
    dist, seeds, failures = sample_distances(kappa, pts, r_min, samples, seed, engine_cfg,
                                             workers=workers)
    if failures and raise_on_failure:
        raise SampleFailure(failures)
    ok = ~np.any(np.isnan(dist), axis=1)
    return HitResult(points=pts, radii=radii, distances=dist[ok],
                     seeds=[s for s, k in zip(seeds, ok) if k], failures=failures)
