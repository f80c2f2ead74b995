"""Power-law fits and kernel domination checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class DegenerateFitError(ValueError):
    pass


@dataclass
class ExponentFit:
    radii: np.ndarray
    log_p: np.ndarray
    log_p_stderr: np.ndarray
    slope: float
    slope_stderr: float
    intercept: float
    chi2: float = 0.0
    dropped: list = field(default_factory=list)

    def within(self, target: float, tol: float, n_sigma: float = 3.0) -> bool:
        dev = abs(self.slope - target)
        return dev <= tol and dev <= n_sigma * self.slope_stderr + 1e-15


def fit_exponent(sweep) -> ExponentFit:
    """Weighted least squares of log p on log r from (r, p, stderr_of_p) triples.

    Weights come from the delta method, sigma(log p) = stderr / p.  The slope
    error is inflated by sqrt(chi2/dof) when the scatter exceeds the weights.
    If some stderr is 0 the fit falls back to equal weights.
    """
    rows = [(float(r), float(p), float(s)) for r, p, s in sweep]
    if len(rows) < 3:
        raise DegenerateFitError("need at least 3 radii")
    if any(p <= 0 for _, p, _ in rows):
        raise DegenerateFitError("p must be positive at every radius")
    r = np.array([x[0] for x in rows])
    p = np.array([x[1] for x in rows])
    s = np.array([x[2] for x in rows])
    if np.any(r <= 0):
        raise DegenerateFitError("radii must be positive")
    x = np.log(r)
    y = np.log(p)
    if np.ptp(x) == 0:
        raise DegenerateFitError("all radii equal")
    sig = s / p
    equal = np.any(sig <= 0)
    w = np.ones_like(x) if equal else 1.0 / sig ** 2
    W = w.sum()
    xm = (w * x).sum() / W
    ym = (w * y).sum() / W
    sxx = (w * (x - xm) ** 2).sum()
    slope = (w * (x - xm) * (y - ym)).sum() / sxx
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    chi2 = float((w * resid ** 2).sum())
    dof = len(x) - 2
    if equal:
        se = math.sqrt(chi2 / dof / sxx) if dof > 0 else 0.0
    else:
        se = math.sqrt(1.0 / sxx) * math.sqrt(max(1.0, chi2 / dof if dof > 0 else 1.0))
    se = max(se, 1e-15 * max(1.0, abs(slope)))
    return ExponentFit(radii=r, log_p=y, log_p_stderr=sig, slope=float(slope), slope_stderr=se,
                       intercept=float(intercept), chi2=chi2)


def fit_from_counts(radii, hits, samples) -> ExponentFit:
    """fit_exponent on hit counts; radii with zero hits are dropped and listed."""
    rows, dropped = [], []
    for r, k in zip(radii, hits):
        if k == 0:
            dropped.append(float(r))
            continue
        p = k / samples
        rows.append((r, p, math.sqrt(p * (1 - p) / samples)))
    fit = fit_exponent(rows)
    fit.dropped = dropped
    return fit


@dataclass
class DominationReport:
    radii: list
    p_hat: list
    kernel: list
    ratios: list
    running_c: list
    c_hat: float
    stable: bool
    factor: float


def domination_check(radii, p_hat, kernel, factor: float = 3.0) -> DominationReport:
    """Single constant C with p <= C * kernel across the sweep.

    The sweep is walked from large r to small r; C_j is the largest ratio
    p/kernel seen up to step j.  It is stable when the final C is within
    ``factor`` of the first one.
    """
    order = np.argsort(-np.asarray(radii, dtype=float), kind="stable")
    r = [float(radii[i]) for i in order]
    p = [float(p_hat[i]) for i in order]
    k = [float(kernel[i]) for i in order]
    if any(v <= 0 for v in k):
        raise ValueError("kernel values must be positive")
    ratios = [a / b for a, b in zip(p, k)]
    run = list(np.maximum.accumulate(ratios))
    c = run[-1]
    stable = run[0] > 0 and c <= factor * run[0]
    return DominationReport(radii=r, p_hat=p, kernel=k, ratios=ratios, running_c=run,
                            c_hat=c, stable=bool(stable), factor=factor)
