"""First crossing times of circles and ordered crossing events."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..bounds.circles import CircleFamily
from ..bounds.kernels import _params, ordered_crossing_kernel
from ..sle_core.trace import Trace
from .stats import wilson_interval


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        if not (self.radius > 0):
            raise ValueError("circle radius must be positive")


@dataclass(frozen=True)
class CrossingRecord:
    """``params[i]`` is the polyline parameter k + u of the first visit to
    circle i (segment k, fraction u), or None; ``times`` are the matching
    capacity times."""

    circles: tuple
    params: tuple
    times: tuple

    @property
    def order(self):
        """Indices of hit circles, sorted by first visit."""
        hit = [i for i, p in enumerate(self.params) if p is not None]
        return sorted(hit, key=lambda i: (self.params[i], i))

    def hit(self, i: int) -> bool:
        return self.params[i] is not None


def _as_circles(circles):
    if isinstance(circles, CircleFamily):
        return tuple(Circle(c, r) for c, r, _ in circles.circles)
    out = []
    for c in circles:
        out.append(c if isinstance(c, Circle) else Circle(complex(c[0]), float(c[1])))
    return tuple(out)


def first_crossing(points: np.ndarray, center: complex, radius: float):
    """Smallest polyline parameter at which |p - center| = radius, or None."""
    if points.size == 1:
        return 0.0 if abs(points[0] - center) == radius else None
    a = points[:-1] - center
    d = np.diff(points)
    A = d.real ** 2 + d.imag ** 2
    B = a.real * d.real + a.imag * d.imag
    C = a.real ** 2 + a.imag ** 2 - radius * radius
    disc = B * B - A * C
    with np.errstate(invalid="ignore", divide="ignore"):
        sq = np.sqrt(np.maximum(disc, 0.0))
        u1 = (-B - sq) / A
        u2 = (-B + sq) / A
    ok = (disc >= 0) & (A > 0)
    in1 = ok & (u1 >= 0) & (u1 <= 1)
    in2 = ok & (u2 >= 0) & (u2 <= 1)
    on_vertex = (A == 0) & (C == 0)
    cand = in1 | in2 | on_vertex
    if not np.any(cand):
        return None
    k = int(np.argmax(cand))
    if on_vertex[k]:
        return float(k)
    u = u1[k] if in1[k] else u2[k]
    return k + float(u)


def crossing_times(trace: Trace, family) -> CrossingRecord:
    circles = _as_circles(family)
    pts = trace.points
    params, times = [], []
    for c in circles:
        p = first_crossing(pts, c.center, c.radius)
        params.append(p)
        if p is None:
            times.append(None)
        else:
            k = min(int(math.floor(p)), len(trace) - 1)
            u = p - k
            t = trace.times[k] if u == 0 else trace.times[k] + u * (trace.times[k + 1] - trace.times[k])
            times.append(float(t))
    return CrossingRecord(circles=circles, params=tuple(params), times=tuple(times))


class InvalidEventError(ValueError):
    pass


@dataclass(frozen=True)
class OrderedEvent:
    """tau(xi_0) < tau(hat xi_1) <= tau(xi_1) < ... <= tau(xi_m) < tau(xi_0') < inf.

    Centre z0 has circles of radii R0 >= r0 > r0'; ring j has centre z_j and
    radii R_j >= r_j.
    """

    z0: complex
    R0: float
    r0: float
    r0_inner: float
    rings: tuple = ()  # (z_j, R_j, r_j)

    def __post_init__(self):
        if not (0 < self.r0_inner < self.r0 <= self.R0):
            raise InvalidEventError("need 0 < r0' < r0 <= R0")
        centres = [(complex(self.z0), self.R0)]
        for z, R, r in self.rings:
            if not (0 < r <= R):
                raise InvalidEventError("ring radii need 0 < r_j <= R_j")
            centres.append((complex(z), R))
        for z, R in centres:
            if abs(z) < R or abs(z - 1) < R:
                raise InvalidEventError(f"disc of radius {R} around {z} contains 0 or 1")
        for i in range(len(centres)):
            for j in range(i + 1, len(centres)):
                (a, Ra), (b, Rb) = centres[i], centres[j]
                if abs(a - b) <= Ra + Rb:
                    raise InvalidEventError(f"closed discs around {a} and {b} meet")

    def circles(self):
        """xi_0, then (hat xi_j, xi_j) per ring, then xi_0'."""
        out = [Circle(complex(self.z0), self.r0)]
        for z, R, r in self.rings:
            out += [Circle(complex(z), R), Circle(complex(z), r)]
        out.append(Circle(complex(self.z0), self.r0_inner))
        return out

    def occurred(self, rec: CrossingRecord) -> bool:
        t = rec.params
        if any(p is None for p in t):
            return False
        ops = ["<"] + ["<=", "<"] * len(self.rings)
        return all(a < b if op == "<" else a <= b for a, b, op in zip(t, t[1:], ops))

    def kernel(self, params) -> float:
        rings = [(max(0.0, 1 - abs(complex(z))), r, R) for z, R, r in self.rings]
        return ordered_crossing_kernel(_params(params), self.r0, self.R0, rings)


def ordered_event_frequency(traces, event: OrderedEvent) -> dict:
    circles = event.circles()
    n = 0
    k = 0
    for tr in traces:
        n += 1
        if event.occurred(crossing_times(tr, circles)):
            k += 1
    if n == 0:
        raise ValueError("no traces")
    lo, hi = wilson_interval(k, n)
    return {"hits": k, "samples": n, "frequency": k / n, "lo": lo, "hi": hi}


def circle_hit_frequency(traces, circle) -> dict:
    """Fraction of traces that ever meet ``circle``."""
    c = _as_circles([circle])[0]
    n = 0
    k = 0
    for tr in traces:
        n += 1
        k += first_crossing(tr.points, c.center, c.radius) is not None
    lo, hi = wilson_interval(k, n)
    return {"hits": k, "samples": n, "frequency": k / n, "lo": lo, "hi": hi}
