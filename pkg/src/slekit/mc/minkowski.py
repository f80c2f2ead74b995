"""Grid estimates of r^(d-2) Area{z : dist(z, trace) < r} and their moments."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .._jit import kernels
from ..bounds.kernels import RADIAL, WHOLE_PLANE, _params
from ..sle_core import AdaptiveConfig, adaptive_trace, sample_driving, simulate_whole_plane_approx
from ..sle_core.trace import Trace
from ..sle_core.whole_plane import WholePlaneConfig
from ..sle_core.zipper import default_horizon
from ._pool import map_samples
from .engine import sample_seed
from .stats import bootstrap_mean_interval

_SQRT_HALF = math.sqrt(0.5)


class ResolutionError(ValueError):
    pass


@dataclass(frozen=True)
class Disc:
    center: complex = 0j
    radius: float = 1.0

    def bbox(self):
        c = complex(self.center)
        return c.real - self.radius, c.real + self.radius, c.imag - self.radius, c.imag + self.radius

    def contains(self, x, y):
        c = complex(self.center)
        return (x - c.real) ** 2 + (y - c.imag) ** 2 <= self.radius ** 2

    @property
    def area(self):
        return math.pi * self.radius ** 2


@dataclass(frozen=True)
class Box:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def bbox(self):
        return self.xmin, self.xmax, self.ymin, self.ymax

    def contains(self, x, y):
        return (x >= self.xmin) & (x <= self.xmax) & (y >= self.ymin) & (y <= self.ymax)

    @property
    def area(self):
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)


def region_from_dict(d):
    if d is None:
        return None
    kind = d.get("type", "disc")
    if kind == "disc":
        c = d.get("center", [0.0, 0.0])
        return Disc(complex(c[0], c[1]), float(d.get("radius", 1.0)))
    if kind == "box":
        return Box(*(float(d[k]) for k in ("xmin", "xmax", "ymin", "ymax")))
    raise ValueError(f"unknown region type {kind!r}")


@dataclass
class MinkowskiEstimate:
    r: float
    content: float
    grid_h: float
    area: float
    area_lo: float
    area_hi: float
    d: float
    restricted_region: object = None

    @property
    def content_lo(self):
        return self.r ** (self.d - 2) * self.area_lo

    @property
    def content_hi(self):
        return self.r ** (self.d - 2) * self.area_hi


def minkowski_content(trace: Trace, r: float, grid_h: float | None = None, region=None,
                      d: float | None = None) -> MinkowskiEstimate:
    """Count grid cells whose centres are within r of the polyline.

    Cells entirely inside the neighbourhood give the lower area bracket,
    cells that may touch it the upper one.  With a region, only cells whose
    centres lie in it are counted.
    """
    if not (r > 0):
        raise ValueError("r must be positive")
    h = r / 8.0 if grid_h is None else float(grid_h)
    if not (0 < h <= r / 4.0):
        raise ResolutionError(f"grid_h={h} must lie in (0, r/4] for r={r}")
    if d is None:
        d = _params(trace.kappa).d
    pts = trace.points
    reach = r + h * _SQRT_HALF
    xmin, xmax = pts.real.min() - reach, pts.real.max() + reach
    ymin, ymax = pts.imag.min() - reach, pts.imag.max() + reach
    if region is not None:
        bx0, bx1, by0, by1 = region.bbox()
        xmin, xmax = max(xmin, bx0), min(xmax, bx1)
        ymin, ymax = max(ymin, by0), min(ymax, by1)
    if xmax <= xmin or ymax <= ymin:
        return MinkowskiEstimate(r, 0.0, h, 0.0, 0.0, 0.0, d, region)
    x0 = math.floor(xmin / h) * h
    y0 = math.floor(ymin / h) * h
    nx = int(math.ceil((xmax - x0) / h))
    ny = int(math.ceil((ymax - y0) / h))
    D = kernels("slekit.mc").stamp_distances(
        np.ascontiguousarray(pts.real), np.ascontiguousarray(pts.imag), x0, y0, h, nx, ny, reach)
    if region is not None:
        xs = x0 + (np.arange(nx) + 0.5) * h
        ys = y0 + (np.arange(ny) + 0.5) * h
        inside = region.contains(xs[None, :], ys[:, None])
        D = np.where(inside, D, np.inf)
    cell = h * h
    area = np.count_nonzero(D < r) * cell
    lo = np.count_nonzero(D <= r - h * _SQRT_HALF) * cell
    hi = np.count_nonzero(D < reach) * cell
    return MinkowskiEstimate(r=r, content=r ** (d - 2) * area, grid_h=h, area=area,
                             area_lo=lo, area_hi=hi, d=d, restricted_region=region)


def minkowski_profile(trace: Trace, r_list, grid_factor: float = 8.0, region=None, d=None):
    """Contents over a list of radii; the running minimum tracks the lower content."""
    ests = [minkowski_content(trace, r, r / grid_factor, region, d) for r in r_list]
    c = np.array([e.content for e in ests])
    return ests, np.minimum.accumulate(c)


def uniform_trace(kappa: float, seed: int, h: float, horizon: float, dt: float = 0.01,
                  mode: str = RADIAL, disc_radius: float | None = None, region=None,
                  max_depth: int = 24) -> Trace:
    """Trace whose consecutive points are at most ``h`` apart (inside ``region``
    for whole-plane mode, growing linearly away from it)."""
    if mode == RADIAL:
        drv = sample_driving(kappa, horizon, dt, seed)
        return adaptive_trace(drv, (), AdaptiveConfig(h_min=h, h_max=h, max_depth=max_depth))
    if region is None:
        raise ValueError("whole-plane Minkowski estimates need a bounded region")
    x0, x1, y0, y1 = region.bbox()
    c = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
    rho = 0.5 * math.hypot(x1 - x0, y1 - y0)
    wp = WholePlaneConfig(disc_radius=disc_radius, target_points_radius=abs(c) + rho, kappa=kappa)
    ad = AdaptiveConfig(h_min=h, h_max=0.1 * disc_radius, rel=h / rho, max_depth=max_depth)
    return simulate_whole_plane_approx(wp, horizon, dt, seed, method="adaptive", queries=[c], adaptive=ad)


@dataclass
class MomentTable:
    r_list: list
    n_max: int
    contents: np.ndarray  # samples x len(r_list)
    moments: dict = field(default_factory=dict)  # n -> list over r
    intervals: dict = field(default_factory=dict)  # n -> list of (lo, hi)

    def jensen_ok(self) -> bool:
        return jensen_check(self.contents, self.n_max)


def jensen_check(contents, n_max) -> bool:
    """(mean c)^n <= mean c^n for every column and n, up to a few ulps."""
    c = np.asarray(contents, dtype=float)
    for j in range(c.shape[1]):
        col = c[:, j]
        m1 = math.fsum(col) / col.size
        for n in range(1, n_max + 1):
            mn = math.fsum(col ** n) / col.size
            if m1 ** n > mn * (1 + 8 * np.finfo(float).eps):
                return False
    return True


def moments_from_contents(contents, r_list, n_max: int, seed: int, n_boot: int = 1000) -> MomentTable:
    c = np.asarray(contents, dtype=float)
    tab = MomentTable(r_list=list(r_list), n_max=n_max, contents=c)
    for n in range(1, n_max + 1):
        vals, ivs = [], []
        for j in range(c.shape[1]):
            x = c[:, j] ** n
            vals.append(math.fsum(x) / x.size)
            ss = np.random.SeedSequence(int(seed), spawn_key=(0xB0B, n, j))
            ivs.append(bootstrap_mean_interval(x, ss, n_boot))
        tab.moments[n] = vals
        tab.intervals[n] = ivs
    return tab


def _contents_one(task):
    kappa, seed, r_list, grid_factor, h_trace, horizon, dt, mode, N, region, d = task
    tr = uniform_trace(kappa, seed, h_trace, horizon, dt, mode, N, region)
    ests, _ = minkowski_profile(tr, r_list, grid_factor, region, d)
    return [e.content for e in ests]


def sample_contents(params, mode: str, r_list, samples: int, seed: int, region=None, *,
                    grid_factor: float = 8.0, disc_radius=None, dt: float = 0.01,
                    horizon=None, h_trace=None, workers=1, start: int = 0):
    """Per-sample contents, rows keyed by sample index."""
    p = _params(params)
    r_list = [float(r) for r in r_list]
    r_min = min(r_list)
    if mode == RADIAL and region is None:
        region = Disc(0j, 1.0)
    if mode == WHOLE_PLANE and region is None:
        raise ValueError("whole-plane Minkowski moments need an explicit region")
    scale = 1.0 if mode == RADIAL else float(disc_radius)
    horizon = default_horizon(r_min, scale) if horizon is None else horizon
    h_trace = r_min / 2.0 if h_trace is None else h_trace
    tasks = [(p.kappa, sample_seed(seed, i), r_list, grid_factor, h_trace, horizon, dt, mode,
              disc_radius, region, p.d) for i in range(start, start + samples)]
    return np.array(map_samples(_contents_one, tasks, workers), dtype=float).reshape(samples, len(r_list))


def minkowski_moments(params, mode: str, n_max: int, r_list, samples: int, seed: int, region=None,
                      **kw) -> MomentTable:
    """Empirical E[Cont_d(gamma within region; r)^n] for n <= n_max with bootstrap intervals."""
    if not (1 <= n_max <= 4):
        raise ValueError("n_max must lie in 1..4")
    c = sample_contents(params, mode, r_list, samples, seed, region, **kw)
    return moments_from_contents(c, r_list, n_max, seed)
