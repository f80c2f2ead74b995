"""Loewner engine for radial SLE in the disc and its whole-plane approximant."""
from .driving import DrivingPath, refine_driving, sample_driving
from .loewner import (
    DEFAULT_EPS,
    SWALLOW_TOL,
    LoewnerState,
    Swallowed,
    TraceIntegrationError,
    forward_map_apply,
    simulate_radial_trace,
    swallow_times,
    trace_from_driving,
    trace_point,
    zero_driving_trace,
)
from .trace import (
    Trace,
    TraceFormatError,
    dist_to_trace,
    from_bytes,
    from_csv,
    load_binary,
    save_binary,
    to_bytes,
    to_csv,
)
from .whole_plane import WholePlaneConfig, simulate_whole_plane_approx, start_angle
from .zipper import AdaptiveConfig, adaptive_trace, default_horizon, slit_tip

__all__ = [
    "AdaptiveConfig", "DEFAULT_EPS", "DrivingPath", "LoewnerState", "SWALLOW_TOL", "Swallowed",
    "Trace", "TraceFormatError", "TraceIntegrationError", "WholePlaneConfig", "adaptive_trace",
    "default_horizon", "dist_to_trace", "forward_map_apply", "from_bytes", "from_csv",
    "load_binary", "refine_driving", "sample_driving", "save_binary", "simulate_radial_trace",
    "simulate_whole_plane_approx", "slit_tip", "start_angle", "swallow_times", "to_bytes",
    "to_csv", "trace_from_driving", "trace_point", "zero_driving_trace",
]
