import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from slekit.mc import (
    DegenerateFitError,
    bootstrap_mean_interval,
    domination_check,
    fit_exponent,
    fit_from_counts,
    log_p_stderr,
    wilson_interval,
)

RADII = [0.16, 0.08, 0.04, 0.02]


def test_exact_power_law():
    # exact values: no sampling error
    fit = fit_exponent([(r, r ** 0.5, 0.0) for r in RADII])
    assert fit.slope == pytest.approx(0.5, abs=1e-12)
    assert fit.slope_stderr < 1e-9
    tiny = fit_exponent([(r, r ** 0.5, 1e-12 * r ** 0.5) for r in RADII])
    assert tiny.slope_stderr < 1e-9


def test_intercept():
    fit = fit_exponent([(r, 0.3 * r ** 3, 1e-3 * r ** 3) for r in RADII])
    assert fit.slope == pytest.approx(3.0, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(0.3), abs=1e-10)


def test_noisy_synthetic_within_three_stderr():
    rng = np.random.default_rng(7)
    r = np.geomspace(0.01, 0.3, 8)
    p = 0.8 * r ** 0.75 * (1 + 0.01 * rng.standard_normal(r.size))
    fit = fit_exponent([(a, b, 0.01 * b) for a, b in zip(r, p)])
    assert abs(fit.slope - 0.75) <= 3 * fit.slope_stderr
    assert fit.within(0.75, 0.2)


def test_zero_stderr_falls_back_to_equal_weights():
    fit = fit_exponent([(r, r ** 2, 0.0) for r in RADII])
    assert fit.slope == pytest.approx(2.0)
    assert fit.slope_stderr > 0


@pytest.mark.parametrize("sweep", [
    [(0.1, 0.5, 0.1), (0.2, 0.6, 0.1)],
    [(0.1, 0.5, 0.1), (0.1, 0.6, 0.1), (0.1, 0.7, 0.1)],
    [(0.1, 0.0, 0.1), (0.2, 0.6, 0.1), (0.4, 0.7, 0.1)],
])
def test_degenerate(sweep):
    with pytest.raises(DegenerateFitError):
        fit_exponent(sweep)


def test_fit_from_counts_drops_zero():
    fit = fit_from_counts([0.4, 0.2, 0.1, 0.05], [400, 200, 100, 0], 1000)
    assert fit.dropped == [0.05]
    assert fit.slope == pytest.approx(1.0, abs=1e-9)


def test_wilson_basics():
    lo, hi = wilson_interval(0, 10)
    assert lo == 0 and 0 < hi < 0.35
    lo, hi = wilson_interval(10, 10)
    assert hi == 1 and lo > 0.65
    lo, hi = wilson_interval(50, 100)
    assert lo == pytest.approx(0.4038, abs=1e-4) and hi == pytest.approx(0.5962, abs=1e-4)
    with pytest.raises(ValueError):
        wilson_interval(3, 2)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 5000), st.data())
def test_wilson_contains_p(n, data):
    k = data.draw(st.integers(0, n))
    lo, hi = wilson_interval(k, n)
    assert 0 <= lo <= k / n <= hi <= 1


def test_wilson_matches_statsmodels_formula():
    # score interval: roots of (p - phat)^2 = z^2 p (1 - p) / n
    k, n, z = 37, 400, stats.norm.ppf(0.975)
    lo, hi = wilson_interval(k, n)
    ph = k / n
    for p in (lo, hi):
        assert (p - ph) ** 2 == pytest.approx(z * z * p * (1 - p) / n, rel=1e-9)


def test_bootstrap_interval_seeded_and_covers_mean():
    x = np.random.default_rng(1).exponential(size=500)
    a = bootstrap_mean_interval(x, seed=3)
    assert a == bootstrap_mean_interval(x, seed=3)
    assert a[0] < x.mean() < a[1]
    assert bootstrap_mean_interval(np.full(20, 2.5), seed=0) == (2.5, 2.5)


def test_log_p_stderr():
    assert log_p_stderr(0, 10) == math.inf
    assert log_p_stderr(25, 100) == pytest.approx(math.sqrt(0.75 / 25))


def test_domination_exact_kernel_passes():
    k = [r ** 0.75 for r in RADII]
    rep = domination_check(RADII, k, k)
    assert rep.c_hat == pytest.approx(1.0) and rep.stable


def test_domination_growth_fails():
    k = [r ** 0.75 for r in RADII]
    p = [kk * (0.16 / r) ** 2 for kk, r in zip(k, RADII)]
    rep = domination_check(RADII, p, k)
    assert not rep.stable
    assert rep.running_c == sorted(rep.running_c)


def test_domination_sorts_from_large_r():
    rep = domination_check([0.02, 0.16, 0.04, 0.08], [1, 1, 1, 1], [0.5, 1, 1, 1])
    assert rep.radii == [0.16, 0.08, 0.04, 0.02]
    assert rep.running_c == [1, 1, 1, 2]
