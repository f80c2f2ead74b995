
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slekit.bounds import (
    CircleFamily,
    CircleGroup,
    DuplicatePointError,
    InvalidFamilyError,
    build_circle_family,
    concentric_family_kernel,
    group_count_bound,
    make_specs,
    snap_exponent,
    split_run_product,
    validate_family,
)
from slekit.geometry import exponents, py_ratio

from oracles import brute_force_family, family_sets, random_config

@pytest.mark.parametrize("n", [2, 3])
def test_matches_brute_force(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(40):
        specs = random_config(rng, n)
        fam = build_circle_family(specs)
        kept, groups, I = brute_force_family(specs)
        assert family_sets(fam, specs) == (kept, groups)
        assert len(fam.groups) <= group_count_bound(n)
        assert all(len(v) <= 1 for v in I.values())
        validate_family(fam)


def test_single_point_family():
    specs = make_specs([0.5j], [0.5 / 4 ** 3])
    fam = build_circle_family(specs)
    assert len(fam.groups) == 1
    assert fam.groups[0].radii == pytest.approx((0.125, 0.03125, 0.0078125))
    assert not fam.removed


def test_snap_exponent():
    assert snap_exponent(1.0, 0.25) == 1
    assert snap_exponent(1.0, 0.2) == 1
    assert snap_exponent(1.0, 0.26) == 0
    assert snap_exponent(1.0, 2.0) == 0
    assert snap_exponent(1.0, 1 / 64) == 3


def test_snap_factor_at_most_four():
    specs = make_specs([0.5j], [0.01])
    fam = build_circle_family(specs)
    assert 1.0 <= fam.snap_factors[0] < 4.0


def test_duplicate_points():
    s = make_specs([0.5j], [0.01])[0]
    with pytest.raises(DuplicatePointError):
        build_circle_family([s, s])


def test_family_kernel_examples():
    fam = CircleFamily(groups=(CircleGroup(center=0.5j, radii=(0.2, 0.05), y=1.0),))
    assert concentric_family_kernel(4.0, fam) == pytest.approx(0.5)
    singles = CircleFamily(groups=(CircleGroup(0.5j, (0.1,), 0.5), CircleGroup(-0.5j, (0.2,), 0.5)))
    assert concentric_family_kernel(2.0, singles) == 1.0
    a = CircleGroup(0.5j, (0.2, 0.05), 0.5)
    b = CircleGroup(-0.5j, (0.1, 0.025, 0.00625), 0.5)
    two = concentric_family_kernel(3.0, CircleFamily(groups=(a, b)))
    one_a = concentric_family_kernel(3.0, CircleFamily(groups=(a,)))
    one_b = concentric_family_kernel(3.0, CircleFamily(groups=(b,)))
    assert two == pytest.approx(one_a * one_b)


@pytest.mark.parametrize("groups, hyp", [
    ((CircleGroup(0.5j, (0.2, 0.06), 0.5),), "ratio"),
    ((CircleGroup(0.5j, (0.2, 0.05), 0.5), CircleGroup(0.6j, (0.1,), 0.4)), "disjoint"),
    ((CircleGroup(0.1, (0.2,), 0.9),), "encloses"),
    ((CircleGroup(0.9, (0.1,), 0.1),), "encloses"),
])
def test_invalid_families_named(groups, hyp):
    with pytest.raises(InvalidFamilyError) as err:
        concentric_family_kernel(2.0, CircleFamily(groups=groups))
    assert err.value.hypothesis == hyp


def test_concentric_groups_with_same_center_allowed():
    fam = CircleFamily(groups=(CircleGroup(0.5j, (0.2, 0.05), 0.5), CircleGroup(0.5j, (0.0125 / 4,), 0.5)))
    validate_family(fam)


def test_order_pairs_follow_enclosure():
    fam = CircleFamily(groups=(CircleGroup(0.5j, (0.2, 0.05), 0.5), CircleGroup(0.5j + 0.01, (0.01,), 0.5)))
    pairs = fam.order_pairs()
    assert (0, 1) in pairs and (1, 0) not in pairs
    assert (0, 2) in pairs and (1, 2) in pairs


@settings(max_examples=300, deadline=None)
@given(st.floats(0.2, 7.8), st.floats(0.0, 1.0), st.floats(1e-3, 1.0), st.integers(2, 12), st.data())
def test_interrupted_runs_dominated(kappa, y, top, n, data):
    # product of the sub-run kernels <= 4^(alpha * cuts) * whole-run kernel
    p = exponents(kappa)
    radii = [top / 4 ** i for i in range(n)]
    cuts = sorted(data.draw(st.sets(st.integers(1, n - 1), max_size=n - 1)))
    lhs = split_run_product(p, y, radii, cuts)
    rhs = 4 ** (p.alpha * len(cuts)) * py_ratio(p, y, radii[-1], radii[0])
    assert lhs <= rhs * (1 + 1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 4]))
def test_built_family_always_valid(seed, n):
    specs = random_config(np.random.default_rng(seed), n)
    fam = build_circle_family(specs)
    validate_family(fam)
    assert len(fam.groups) <= group_count_bound(n)
