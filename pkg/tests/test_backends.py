"""The compiled and the numpy kernels compute the same numbers."""
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from slekit.mc import _nb as mnb
from slekit.mc import _np as mnp
from slekit.sle_core import _nb, _np, refine_driving, sample_driving


@pytest.fixture(scope="module")
def path():
    return sample_driving(2.5, 1.0, 0.01, seed=2**63 + 11)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(0, 2**40), st.integers(1, 2**40))
@example(0, 78858, 1088)
def test_hash_normal(seed, a, b):
    x = _nb.hash_normal(np.uint64(seed), a, b)
    assert x == _np.hash_normal(seed, a, b)
    # numpy's SIMD log/cos may round differently from libm
    y = _np.hash_normal_array(seed, np.array([a]), np.array([b]))[0]
    assert abs(y - x) <= 2 * np.spacing(abs(x))


def test_hash_normal_distribution():
    z = _np.hash_normal_array(99, np.arange(20000), np.ones(20000, dtype=np.int64))
    assert abs(z.mean()) < 0.03 and abs(z.std() - 1) < 0.02


def test_slit_tip():
    for cap in (1e-9, 1e-3, 0.5, 4.0):
        assert _nb.slit_tip(cap) == pytest.approx(_np.slit_tip(cap), rel=1e-14)


def test_zipper_uniform(path):
    a = _nb.zipper_uniform(path.values, path.dt)
    b = _np.zipper_uniform(path.values, path.dt)
    assert np.max(np.abs(a[0] - b[0])) < 1e-12 and np.max(np.abs(a[1] - b[1])) < 1e-12


@pytest.mark.parametrize("level", [0, 2])
def test_zipper_adaptive(path, level):
    d = refine_driving(path, level)
    q = np.array([0.4 + 0.2j, -0.3 + 0.1j])
    args = (np.ascontiguousarray(d.values), d.dt, d.kappa, np.uint64(d.seed), q.real.copy(), q.imag.copy(),
            0.25, 2e-3, 0.05, 20, level)
    a = _nb.zipper_adaptive(*args)
    b = _np.zipper_adaptive(args[0], d.dt, d.kappa, d.seed, *args[4:])
    assert a[0].shape == b[0].shape and a[3] == b[3]
    assert np.array_equal(a[2], b[2])
    # round-off grows through long map chains near the tip
    assert np.max(np.abs(a[0] - b[0])) < 1e-10 and np.max(np.abs(a[1] - b[1])) < 1e-10


def test_flow_point_and_trace(path):
    for t in (0.0, 0.255, 1.0):
        a = _nb.flow_point(path.values, path.dt, t, 1e-6)
        b = _np.flow_point(path.values, path.dt, t, 1e-6)
        assert abs(complex(*a) - complex(*b)) < 1e-12
    a = _nb.flow_trace(path.values, path.dt, 1e-6)
    b = _np.flow_trace(path.values, path.dt, 1e-6)
    assert np.max(np.abs((a[0] - b[0]) + 1j * (a[1] - b[1]))) < 1e-12


@pytest.mark.parametrize("kappa", [0.0, 6.0])
def test_forward_flow(kappa):
    d = sample_driving(kappa, 1.0, 1e-3, seed=3)
    # real points near 1 lie on the lambda == 0 slit
    z = np.concatenate([0.9 * np.exp(1j * np.linspace(-1, 1, 40)), [0.2j, -0.5, 0.95, 0.99]])
    a = _nb.forward_flow(d.values, d.dt, d.n_steps, z.real.copy(), z.imag.copy(), 1e-12)
    b = _np.forward_flow(d.values, d.dt, d.n_steps, z.real.copy(), z.imag.copy(), 1e-12)
    assert np.array_equal(a[2], b[2])
    ok = a[2] < 0
    if kappa == 0.0:
        assert np.count_nonzero(~ok) == 2
    assert np.allclose(a[0][ok], b[0][ok], atol=1e-12) and np.allclose(a[1][ok], b[1][ok], atol=1e-12)
    assert np.all(np.isnan(a[0][~ok])) and np.all(np.isnan(b[0][~ok]))


def test_polyline_distances(path, rng):
    w = _nb.zipper_uniform(path.values, path.dt)
    z = rng.uniform(-1, 1, 500) + 1j * rng.uniform(-1, 1, 500)
    a = _nb.polyline_distances(w[0], w[1], z.real.copy(), z.imag.copy())
    b = _np.polyline_distances(w[0], w[1], z.real.copy(), z.imag.copy(), chunk=37)
    assert np.max(np.abs(a - b)) < 1e-14


def test_stamp_distances(path):
    w = _nb.zipper_uniform(path.values, path.dt)
    args = (w[0], w[1], -1.05, -1.05, 0.01, 210, 210, 0.05)
    a = mnb.stamp_distances(*args)
    b = mnp.stamp_distances(*args)
    assert a.shape == (210, 210)
    assert np.array_equal(a < 0.05, b < 0.05)
    near = a < 0.05
    assert np.max(np.abs(a[near] - b[near])) < 1e-14
    # oracle on the cell centres
    ys, xs = np.nonzero(near)
    c = (-1.05 + (xs + 0.5) * 0.01) + 1j * (-1.05 + (ys + 0.5) * 0.01)
    ref = _np.polyline_distances(w[0], w[1], c.real.copy(), c.imag.copy())
    assert np.max(np.abs(a[near] - ref)) < 1e-14


def test_env_flag_selects_numpy():
    env = dict(os.environ, SLEKIT_DISABLE_NUMBA="1")
    code = ("from slekit import backend; from slekit._jit import kernels; "
            "print(backend(), kernels('slekit.sle_core').__name__)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "slekit.sle_core._np"]


def test_numpy_backend_end_to_end():
    env = dict(os.environ, SLEKIT_DISABLE_NUMBA="1")
    code = ("import numpy as np; from slekit.sle_core import *; "
            "d = sample_driving(2.0, 0.5, 0.01, seed=4); "
            "t = adaptive_trace(d, [0.3j], AdaptiveConfig(h_min=0.01, h_max=0.05)); "
            "print(t.points[-1].real, t.points[-1].imag)")
    a = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    b = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    xa = np.array(a.stdout.split(), dtype=float)
    xb = np.array(b.stdout.split(), dtype=float)
    assert np.allclose(xa, xb, atol=1e-12)
