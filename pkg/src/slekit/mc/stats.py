"""Interval estimates."""
from __future__ import annotations

import math

import numpy as np

Z95 = 1.959963984540054


def wilson_interval(k: int, n: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for k successes out of n."""
    if n <= 0:
        raise ValueError("need at least one trial")
    if not (0 <= k <= n):
        raise ValueError("successes must lie in [0, n]")
    p = k / n
    z2 = z * z
    denom = 1.0 + z2 / n
    centre = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == n else min(1.0, centre + half)
    return min(lo, p), max(hi, p)


def bootstrap_mean_interval(x, seed: int, n_boot: int = 1000, level: float = 0.95):
    """Percentile bootstrap interval for the mean of x."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("empty sample")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, x.size, size=(n_boot, x.size))
    means = x[idx].mean(axis=1)
    a = (1.0 - level) / 2.0
    lo, hi = np.quantile(means, [a, 1.0 - a])
    return float(lo), float(hi)


def log_p_stderr(k: int, n: int) -> float:
    """Delta-method standard error of log(k/n)."""
    if k <= 0:
        return math.inf
    p = k / n
    return math.sqrt((1.0 - p) / (n * p))
