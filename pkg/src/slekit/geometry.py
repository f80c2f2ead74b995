"""Closed-form geometry: SLE exponents, the two-regime kernel P_y, the
cylinder H* = H / piZ, round-annulus moduli and Koebe-type distortion radii.

Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

# Below this, x**p is evaluated as exp(p*log(x)) to stay clear of underflow.
_TINY = 1e-300


class GeometryDomainError(ValueError):
    """An argument lies outside the domain of a closed-form kernel."""


@dataclass(frozen=True)
class SleParams:
    kappa: float
    d: float
    alpha: float

    def __post_init__(self):
        if not (0.0 < self.kappa < 8.0):
            raise GeometryDomainError(f"kappa must lie in (0, 8), got {self.kappa}")

    @property
    def interior_exponent(self) -> float:
        """2 - d, the one-point exponent away from the boundary."""
        return 2.0 - self.d


def exponents(kappa: float) -> SleParams:
    """Dimension d = 1 + kappa/8 and boundary exponent alpha = 8/kappa - 1."""
    kappa = float(kappa)
    if not (0.0 < kappa < 8.0):
        raise GeometryDomainError(f"kappa must lie in (0, 8), got {kappa}")
    return SleParams(kappa=kappa, d=1.0 + kappa / 8.0, alpha=8.0 / kappa - 1.0)


def _pow(base, p):
    base = np.asarray(base, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = base ** p
        via_log = np.exp(p * np.log(base))
    return np.where(base < _TINY, via_log, direct)


def py_eval(params: SleParams, y, x):
    """P_y(x): y^(alpha-(2-d)) x^(2-d) for x <= y, x^alpha for x >= y.

    Accepts scalars or broadcastable arrays.  ``y == 0`` goes straight to the
    x^alpha branch so 0**0 never appears.
    """
    y_arr = np.asarray(y, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    if np.any(~(x_arr > 0)):
        raise GeometryDomainError("P_y(x) needs x > 0")
    if np.any(~(y_arr >= 0)):
        raise GeometryDomainError("P_y(x) needs y >= 0")
    a = params.alpha
    e = 2.0 - params.d
    inner = x_arr <= y_arr
    safe_y = np.where(inner, y_arr, 1.0)
    out = np.where(inner, _pow(safe_y, a - e) * _pow(x_arr, e), _pow(x_arr, a))
    if out.ndim == 0:
        return float(out)
    return out


def py_ratio(params: SleParams, y, x_num, x_den):
    """P_y(x_num) / P_y(x_den)."""
    x_num = np.asarray(x_num, dtype=float)
    x_den = np.asarray(x_den, dtype=float)
    if np.any(~(x_num > 0)) or np.any(~(x_den > 0)):
        raise GeometryDomainError("P_y ratio needs positive arguments")
    y = np.asarray(y, dtype=float)
    a = params.alpha
    e = 2.0 - params.d
    # Ratio in log space: the individual P values can underflow long before
    # the ratio does.
    def logp(xx):
        inner = xx <= y
        ly = np.log(np.where(inner & (y > 0), y, 1.0))
        return np.where(inner, (a - e) * ly + e * np.log(xx), a * np.log(xx))

    out = np.exp(logp(x_num) - logp(x_den))
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class CylinderPoint:
    """A point of the closed cylinder H* with real part reduced into [0, pi)."""

    re: float
    im: float

    def __post_init__(self):
        if not (self.im >= 0.0):
            raise GeometryDomainError(f"cylinder points need im >= 0, got {self.im}")
        r = math.fmod(float(self.re), math.pi)
        if r < 0.0:
            r += math.pi
        if r >= math.pi:
            r = 0.0
        object.__setattr__(self, "re", r)
        object.__setattr__(self, "im", float(self.im))


def cylinder_dist(a: CylinderPoint, b: CylinderPoint) -> float:
    """Euclidean distance between the orbits a + piZ and b + piZ."""
    dx = abs(a.re - b.re)
    dx = min(dx, math.pi - dx)
    return math.hypot(dx, a.im - b.im)


def crad_cylinder(z: CylinderPoint) -> float:
    """Conformal radius of H* seen from z, sinh(2 Im z)."""
    if not (z.im > 0.0):
        raise GeometryDomainError("conformal radius needs Im z > 0")
    return math.sinh(2.0 * z.im)


def to_cylinder(z: complex) -> CylinderPoint:
    """Lift z in the closed disc minus 0 through w -> exp(2iw)."""
    if z == 0:
        raise GeometryDomainError("0 corresponds to the end of the cylinder")
    if abs(z) > 1.0 + 1e-12:
        raise GeometryDomainError("point outside the closed unit disc")
    return CylinderPoint(cmath.phase(z) / 2.0, max(0.0, -0.5 * math.log(abs(z))))


def from_cylinder(w: CylinderPoint) -> complex:
    return cmath.exp(2j * complex(w.re, w.im))


@dataclass(frozen=True)
class Annulus:
    center: complex
    r_inner: float
    r_outer: float

    def __post_init__(self):
        if not (self.r_inner > 0.0):
            raise GeometryDomainError("annulus inner radius must be positive")
        if not (self.r_outer >= self.r_inner):
            raise GeometryDomainError("annulus needs r_outer >= r_inner")


def annulus_modulus(ann: Annulus, half: bool = False) -> float:
    """Extremal distance between the two boundary circles.

    ``half=True`` gives the boundary-anchored half annulus (centre on a
    straight boundary line), whose modulus is twice the full one.
    """
    m = math.log(ann.r_outer / ann.r_inner)
    return m / math.pi if half else m / (2.0 * math.pi)


def teichmuller_bound(R: float) -> float:
    """Upper bound (1/2pi) ln(16(R+1)) on the Teichmuller modulus, R >= 1."""
    if not (R >= 1.0):
        raise GeometryDomainError(f"Teichmuller bound needs R >= 1, got {R}")
    return math.log(16.0 * (R + 1.0)) / (2.0 * math.pi)


def distortion_radii(r: float, R: float, M: float, deriv_mag: float) -> tuple[float, float]:
    """Radii sandwiching phi(B(z0, r)) and phi(B(z0, R)) for a conformal phi.

    M is the distance from z0 to the boundary of phi's domain and deriv_mag is
    |phi'(z0)|.  Requires 0 < r < R/7 and R <= M.
    """
    if not (r > 0.0 and r < R / 7.0):
        raise GeometryDomainError("distortion radii need 0 < r < R/7")
    if not (R <= M):
        raise GeometryDomainError("distortion radii need R <= M")
    if not (deriv_mag > 0.0):
        raise GeometryDomainError("|phi'(z0)| must be positive")
    r_t = r * deriv_mag / (1.0 - r / M) ** 2
    R_t = R * deriv_mag / (1.0 + R / M) ** 2
    return r_t, R_t
