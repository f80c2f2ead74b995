"""Monte Carlo harness: hit probabilities, crossings, Minkowski contents, fits."""
from .campaign import (
    CampaignResult,
    PlanError,
    aggregate_campaign,
    hit_partial,
    load_distances,
    merge_partials,
    normalize_plan,
    run_campaign,
)
from .crossing import (
    Circle,
    CrossingRecord,
    InvalidEventError,
    OrderedEvent,
    circle_hit_frequency,
    crossing_times,
    first_crossing,
    ordered_event_frequency,
)
from .engine import EngineConfig, sample_seed, simulate_sample
from .fit import DegenerateFitError, DominationReport, ExponentFit, domination_check, fit_exponent, fit_from_counts
from .hits import HitResult, SampleFailure, estimate_hit_probability, sample_distances
from .minkowski import (
    Box,
    Disc,
    MinkowskiEstimate,
    MomentTable,
    ResolutionError,
    jensen_check,
    minkowski_content,
    minkowski_moments,
    minkowski_profile,
    moments_from_contents,
    sample_contents,
    uniform_trace,
)
from .stats import bootstrap_mean_interval, log_p_stderr, wilson_interval
