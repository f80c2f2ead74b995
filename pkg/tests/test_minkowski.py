import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slekit.mc import (
    Box,
    Disc,
    ResolutionError,
    jensen_check,
    minkowski_content,
    minkowski_moments,
    minkowski_profile,
    moments_from_contents,
    uniform_trace,
)
from slekit.sle_core import Trace


def segment(n=2001):
    x = np.linspace(0.0, 1.0, n)
    return Trace(points=x + 0j, times=x, kappa=0.0, dt=1.0 / (n - 1), seed=0, horizon=1.0)


def segment_area(r):
    return 2 * r + math.pi * r * r


@pytest.mark.parametrize("r", [0.04, 0.02, 0.01])
def test_segment_oracle(r):
    est = minkowski_content(segment(), r, d=1.0)
    exact = segment_area(r) / r
    assert est.content == pytest.approx(2 + math.pi * r, rel=0.02)
    assert est.content_lo <= exact <= est.content_hi
    assert est.area_lo <= est.area <= est.area_hi


def test_bracket_tightens_under_refinement():
    r = 0.05
    prev = None
    for h in (r / 4, r / 8, r / 16, r / 32):
        est = minkowski_content(segment(), r, grid_h=h, d=1.0)
        width = est.area_hi - est.area_lo
        if prev is not None:
            assert width < prev[0]
            assert abs(est.area - prev[1]) <= prev[0]
        prev = (width, est.area)


def test_saturated_disc():
    tr = segment(11)
    r = 2.5
    est = minkowski_content(tr, r, grid_h=0.004, region=Disc(0j, 1.0), d=1.25)
    assert est.content == pytest.approx(r ** (1.25 - 2) * math.pi, rel=5e-3)


def test_box_region():
    est = minkowski_content(segment(), 0.05, region=Box(0.2, 0.4, -1, 1), d=1.0)
    assert est.area == pytest.approx(0.2 * 0.1, rel=0.05)


def test_resolution_floor():
    with pytest.raises(ResolutionError):
        minkowski_content(segment(), 0.04, grid_h=0.011)
    minkowski_content(segment(), 0.04, grid_h=0.01, d=1.0)


def test_region_away_from_trace():
    est = minkowski_content(segment(), 0.01, region=Disc(5j, 0.5), d=1.0)
    assert est.content == 0.0


def test_profile_running_min():
    ests, run = minkowski_profile(segment(), [0.08, 0.04, 0.02], d=1.0)
    c = [e.content for e in ests]
    assert list(run) == [c[0], min(c[:2]), min(c)]


def test_uniform_trace_spacing():
    tr = uniform_trace(2.0, seed=4, h=0.01, horizon=3.0)
    assert np.abs(np.diff(tr.points)).max() <= 0.01 + 1e-12


def test_constant_contents_moments():
    tab = moments_from_contents(np.full((10, 2), 1.7), [0.02, 0.01], 3, seed=0)
    for n in (1, 2, 3):
        assert tab.moments[n] == pytest.approx([1.7 ** n] * 2)
        assert tab.intervals[n][0] == pytest.approx((1.7 ** n, 1.7 ** n))
    assert tab.jensen_ok()


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0.0, 50.0), min_size=1, max_size=40))
def test_jensen_on_empirical_measure(xs):
    assert jensen_check(np.array(xs)[:, None], 4)


def test_jensen_detects_violation():
    # contents are never negative; a negative column breaks Jensen for odd n
    assert jensen_check(np.array([[2.0], [-3.0]]), 3) is False


def test_minkowski_moments_small_campaign():
    a = minkowski_moments(2.0, "radial", 2, [0.08, 0.04], samples=4, seed=11)
    b = minkowski_moments(2.0, "radial", 2, [0.08, 0.04], samples=4, seed=11)
    assert a.moments == b.moments and a.intervals == b.intervals
    assert a.contents.shape == (4, 2)
    assert np.all(a.contents > 0)
    assert a.jensen_ok()
    for n in (1, 2):
        for m, (lo, hi) in zip(a.moments[n], a.intervals[n]):
            assert lo <= m <= hi


def test_moment_order_limits():
    with pytest.raises(ValueError):
        minkowski_moments(2.0, "radial", 5, [0.04], samples=1, seed=0)
    with pytest.raises(ValueError):
        minkowski_moments(2.0, "whole-plane", 1, [0.04], samples=1, seed=0, disc_radius=8)
