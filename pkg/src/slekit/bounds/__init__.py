"""Bound kernels (constants dropped) and the circle families behind them."""
from .circles import (
    CircleFamily,
    CircleGroup,
    InvalidFamilyError,
    annuli_intersect,
    build_circle_family,
    concentric_family_kernel,
    group_count_bound,
    snap_exponent,
    split_run_product,
    validate_family,
)
from .kernels import (
    RADIAL,
    WHOLE_PLANE,
    DuplicatePointError,
    PointSpec,
    anchors_for,
    bound_kernel,
    evaluate_query,
    l_sequence,
    make_specs,
    min_over_orders,
    one_point_kernel,
    ordered_crossing_kernel,
    radial_bound_kernel,
    whole_plane_bound_kernel,
)

__all__ = [
    "CircleFamily", "CircleGroup", "DuplicatePointError", "InvalidFamilyError", "PointSpec",
    "RADIAL", "WHOLE_PLANE", "anchors_for", "annuli_intersect", "bound_kernel",
    "build_circle_family", "concentric_family_kernel", "evaluate_query", "group_count_bound",
    "l_sequence", "make_specs", "min_over_orders", "one_point_kernel", "ordered_crossing_kernel",
    "radial_bound_kernel", "snap_exponent", "split_run_product", "validate_family",
    "whole_plane_bound_kernel",
]
