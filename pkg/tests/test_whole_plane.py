import cmath
import math

import numpy as np
import pytest
from scipy import stats

from slekit.sle_core import (
    AdaptiveConfig,
    WholePlaneConfig,
    sample_driving,
    simulate_whole_plane_approx,
    start_angle,
    trace_from_driving,
)


def test_config_requires_large_disc():
    with pytest.raises(ValueError, match="4"):
        WholePlaneConfig(disc_radius=7.9, target_points_radius=2.0, kappa=2.0)
    WholePlaneConfig(disc_radius=8.0, target_points_radius=2.0, kappa=2.0)


def test_angles_uniform():
    th = np.array([start_angle(s) for s in range(2000)])
    assert np.all((0 <= th) & (th < 2 * math.pi))
    assert stats.kstest(th / (2 * math.pi), "uniform").pvalue > 1e-3


def test_angle_independent_of_driving():
    th = np.array([start_angle(s) for s in range(1000)])
    first = np.array([sample_driving(2.0, 0.1, 0.01, seed=s).values[1] for s in range(1000)])
    assert abs(np.corrcoef(th, first)[0, 1]) < 0.12


def test_is_scaled_rotated_radial_trace():
    cfg = WholePlaneConfig(disc_radius=8.0, target_points_radius=2.0, kappa=2.0)
    tr = simulate_whole_plane_approx(cfg, 2.0, 0.01, seed=6, method="zipper")
    base = trace_from_driving(sample_driving(2.0, 2.0, 0.01, seed=6), method="zipper")
    rot = cmath.exp(1j * start_angle(6))
    assert np.allclose(tr.points, 8.0 * rot * base.points, atol=1e-12)
    assert tr.scale == 8.0 and tr.rotation == pytest.approx(start_angle(6))
    assert abs(abs(tr.points[0]) - 8.0) < 1e-12
    assert np.all(np.abs(tr.points) <= 8.0 * (1 + 1e-9))


def test_adaptive_in_plane_units():
    cfg = WholePlaneConfig(disc_radius=32.0, target_points_radius=2.0, kappa=2.0)
    a = AdaptiveConfig(h_min=0.01, h_max=1.0)
    tr = simulate_whole_plane_approx(cfg, None, 0.01, seed=3, method="adaptive",
                                     queries=[2.0], adaptive=a, r_min=0.1)
    assert tr.horizon == pytest.approx(math.log(320) + 6, abs=0.01)
    steps = np.abs(np.diff(tr.points))
    assert steps.max() <= 1.0 + 1e-9
    assert abs(tr.points[-1]) < 0.1


def test_horizon_needed():
    cfg = WholePlaneConfig(disc_radius=8.0, target_points_radius=2.0, kappa=2.0)
    with pytest.raises(ValueError):
        simulate_whole_plane_approx(cfg, None, 0.01, seed=1)
