"""Right-hand sides of the multi-point Green's function bounds, without the
unknown multiplicative constants."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from ..geometry import GeometryDomainError, SleParams, exponents, py_ratio

RADIAL = "radial"
WHOLE_PLANE = "whole-plane"
_MODES = (RADIAL, WHOLE_PLANE)


class DuplicatePointError(ValueError):
    pass


@dataclass(frozen=True)
class PointSpec:
    z: complex
    r: float
    y: float
    l: float
    mode: str = RADIAL

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not (self.r > 0.0):
            raise GeometryDomainError("radius must be positive")
        z = complex(self.z)
        if self.mode == RADIAL:
            if abs(z) > 1.0 + 1e-12:
                raise GeometryDomainError(f"{z} lies outside the closed unit disc")
            if z == 0 or z == 1:
                raise GeometryDomainError("radial points must differ from 0 and 1")
        else:
            if z == 0:
                raise GeometryDomainError("whole-plane points must be nonzero")
            if not (self.r < abs(z)):
                raise GeometryDomainError(f"whole-plane radius {self.r} must be below |z| = {abs(z)}")


def anchors_for(mode: str):
    return (0j, 1 + 0j) if mode == RADIAL else (0j,)


def l_sequence(points, anchors) -> list[float]:
    """l_k = distance from z_k to the anchors and to z_1, ..., z_{k-1}."""
    pts = [complex(p) for p in points]
    out = []
    for k, z in enumerate(pts):
        if z in pts[:k]:
            raise DuplicatePointError(f"point {z} repeated")
        cands = [abs(z - a) for a in anchors] + [abs(z - w) for w in pts[:k]]
        out.append(min(cands))
    return out


def make_specs(points, radii, mode: str = RADIAL) -> list[PointSpec]:
    """PointSpecs in the given order.  Whole-plane points get y = 1."""
    if len(points) != len(radii):
        raise ValueError("points and radii differ in length")
    if mode not in _MODES:
        raise ValueError(f"unknown mode {mode!r}")
    ls = l_sequence(points, anchors_for(mode))
    specs = []
    for z, r, l in zip(points, radii, ls):
        z = complex(z)
        y = max(0.0, 1.0 - abs(z)) if mode == RADIAL else 1.0
        specs.append(PointSpec(z=z, r=float(r), y=y, l=l, mode=mode))
    return specs


def _params(params) -> SleParams:
    return params if isinstance(params, SleParams) else exponents(params)


def one_point_kernel(params, y0: float, r: float, R: float) -> float:
    """P_{y0}(r) / P_{y0}(R)."""
    p = _params(params)
    if not (0.0 < r < R):
        raise GeometryDomainError("need 0 < r < R")
    return py_ratio(p, y0, r, R)


def radial_bound_kernel(params, specs) -> float:
    p = _params(params)
    out = 1.0
    for s in specs:
        if s.mode != RADIAL:
            raise ValueError("radial kernel needs radial specs")
        out *= py_ratio(p, s.y, min(s.r, s.l), s.l)
    return out


def whole_plane_bound_kernel(params, specs) -> float:
    p = _params(params)
    e = 2.0 - p.d
    out = 1.0
    for s in specs:
        if s.mode != WHOLE_PLANE:
            raise ValueError("whole-plane kernel needs whole-plane specs")
        if not (s.r < abs(s.z)):
            raise GeometryDomainError("whole-plane kernel needs r_k < |z_k|")
        out *= (min(s.r, s.l) / s.l) ** e
    return out


def bound_kernel(params, specs) -> float:
    if all(s.mode == RADIAL for s in specs):
        return radial_bound_kernel(params, specs)
    return whole_plane_bound_kernel(params, specs)


def ordered_crossing_kernel(params, r0: float, R0: float, ring_specs) -> float:
    """(r0/R0)^(alpha/4) prod_j P_{y_j}(r_j) / P_{y_j}(R_j)."""
    p = _params(params)
    if not (0.0 < r0 <= R0):
        raise GeometryDomainError("need 0 < r0 <= R0")
    out = (r0 / R0) ** (p.alpha / 4.0)
    for y, r, R in ring_specs:
        if not (0.0 < r <= R):
            raise GeometryDomainError("ring radii need 0 < r <= R")
        out *= py_ratio(p, y, r, R)
    return out


def min_over_orders(params, points, radii, mode: str = RADIAL, max_points: int = 8):
    """Smallest kernel over all orderings of the points, and that ordering.

    Diagnostic only: the bound itself is stated for one fixed order.
    """
    n = len(points)
    if n > max_points:
        raise ValueError(f"{n}! orderings is too many")
    best = (math.inf, None)
    for perm in itertools.permutations(range(n)):
        specs = make_specs([points[i] for i in perm], [radii[i] for i in perm], mode)
        k = bound_kernel(params, specs)
        if k < best[0]:
            best = (k, perm)
    return best


def evaluate_query(query: dict) -> dict:
    """JSON-shaped kernel query: {"kappa", "mode", "points": [{"z": [re, im], "r"}]}."""
    try:
        kappa = float(query["kappa"])
        mode = query.get("mode", RADIAL)
        pts = [complex(float(p["z"][0]), float(p["z"][1])) for p in query["points"]]
        radii = [float(p["r"]) for p in query["points"]]
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise ValueError(f"malformed kernel query: {exc}") from exc
    params = exponents(kappa)
    specs = make_specs(pts, radii, mode)
    out = {"kernel": bound_kernel(params, specs), "l": [s.l for s in specs]}
    out["y"] = [s.y for s in specs] if mode == RADIAL else [None] * len(specs)
    if query.get("min_over_orders") and len(pts) <= 8:
        out["min_over_orders"] = min_over_orders(params, pts, radii, mode)[0]
    return out
