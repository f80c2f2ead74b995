"""Polyline traces, distances to them, and their on-disk formats."""
from __future__ import annotations

import csv
import io
import os
import struct
from dataclasses import dataclass, field

import numpy as np

from .._jit import kernels

_MAGIC = b"SLETRC01"
# kappa, dt, horizon, seed, count, scale, rotation
_HEADER = struct.Struct("<8sdddQQdd")


class TraceFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Trace:
    """Vertices of a trace polyline and the capacity times they belong to.

    ``scale`` and ``rotation`` describe the similarity that was applied to a
    standard radial trace (whole-plane approximants use scale N).
    """

    points: np.ndarray
    times: np.ndarray
    kappa: float
    dt: float
    seed: int
    horizon: float
    scale: float = 1.0
    rotation: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=complex)
        ts = np.ascontiguousarray(self.times, dtype=float)
        if pts.ndim != 1 or pts.shape != ts.shape:
            raise ValueError("points and times must be 1-d of equal length")
        if pts.size == 0:
            raise ValueError("a trace needs at least one point")
        pts.setflags(write=False)
        ts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "times", ts)

    def __len__(self):
        return self.points.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Trace):
            return NotImplemented
        return (np.array_equal(self.points, other.points)
                and np.array_equal(self.times, other.times)
                and (self.kappa, self.dt, self.seed, self.horizon, self.scale, self.rotation)
                == (other.kappa, other.dt, other.seed, other.horizon, other.scale, other.rotation))

    __hash__ = None


def dist_to_trace(trace: Trace, z) -> float | np.ndarray:
    """Euclidean distance from z (scalar or array) to the trace polyline."""
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    p = trace.points
    out = kernels("slekit.sle_core").polyline_distances(
        np.ascontiguousarray(p.real), np.ascontiguousarray(p.imag),
        np.ascontiguousarray(zz.real), np.ascontiguousarray(zz.imag))
    if np.ndim(z) == 0:
        return float(out[0])
    return out.reshape(np.shape(z))


def to_bytes(trace: Trace) -> bytes:
    n = len(trace)
    head = _HEADER.pack(_MAGIC, trace.kappa, trace.dt, trace.horizon, trace.seed, n,
                        trace.scale, trace.rotation)
    xy = np.empty(2 * n, dtype="<f8")
    xy[0::2] = trace.points.real
    xy[1::2] = trace.points.imag
    return head + xy.tobytes() + trace.times.astype("<f8").tobytes()


def from_bytes(buf: bytes) -> Trace:
    if len(buf) < _HEADER.size:
        raise TraceFormatError("truncated header")
    magic, kappa, dt, horizon, seed, n, scale, rot = _HEADER.unpack_from(buf)
    if magic != _MAGIC:
        raise TraceFormatError("not a trace record")
    need = _HEADER.size + 24 * n
    if len(buf) != need:
        raise TraceFormatError(f"expected {need} bytes, got {len(buf)}")
    off = _HEADER.size
    xy = np.frombuffer(buf, dtype="<f8", count=2 * n, offset=off)
    ts = np.frombuffer(buf, dtype="<f8", count=n, offset=off + 16 * n)
    return Trace(points=xy[0::2] + 1j * xy[1::2], times=ts.copy(), kappa=kappa, dt=dt,
                 seed=seed, horizon=horizon, scale=scale, rotation=rot)


def save_binary(trace: Trace, path) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(to_bytes(trace))
    os.replace(tmp, path)


def load_binary(path) -> Trace:
    with open(path, "rb") as fh:
        return from_bytes(fh.read())


def to_csv(trace: Trace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "re", "im"])
    for t, p in zip(trace.times, trace.points):
        w.writerow([repr(float(t)), repr(float(p.real)), repr(float(p.imag))])
    return buf.getvalue()


def from_csv(text: str, *, kappa=float("nan"), dt=float("nan"), seed=0) -> Trace:
    """Parse the CSV form.  Metadata is not part of it and is passed in."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["t", "re", "im"]:
        raise TraceFormatError("CSV header must be t,re,im")
    arr = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float).reshape(-1, 3)
    return Trace(points=arr[:, 1] + 1j * arr[:, 2], times=arr[:, 0], kappa=kappa, dt=dt,
                 seed=seed, horizon=float(arr[-1, 0]) if len(arr) else 0.0)
