"""Multidimensional elephant random walk with stops and random step sizes.

Exact path simulation, closed-form analytics for the walk's limit theorems,
and a reproducible Monte-Carlo harness that checks them at desk scale.
"""

from .core import (
    CRITICAL_TOL,
    RANDOM_STEPS,
    STOPS,
    RegimeLabel,
    StepAction,
    UnitStep,
    WalkParams,
    apply_action,
    classify_regime,
    sample_action,
    steps_critical_p,
    validate_params,
)
from .sizes import (
    DiscreteTable,
    Exponential,
    Gamma,
    LogNormal,
    PointMass,
    StepSizeModel,
    ZeroInflatedPointMass,
    unit_sizes,
)
from .engine import (
    WalkTrace,
    default_checkpoints,
    dense_checkpoints,
    moves_series_random_steps,
    moves_series_stops,
    path_statistics,
    recompute_statistics,
    simulate_random_steps,
    simulate_stops,
)
from .analytics import (
    MartingaleSeries,
    NormalizerTable,
    RegimeConstants,
    a_coefficients,
    conditional_step_covariance,
    expected_moves,
    hyp3f2_unit,
    lil_statistic,
    limit_moment,
    martingale_transform,
    memory_exponent,
    normalizer_table,
    qsl_statistic,
    regime_constants,
    trace_variation,
    u_limit,
    u_partial,
)
from .ensemble import (
    EnsembleConfig,
    EnsembleSummary,
    map_paths,
    run_ensemble,
    seed_stream,
)

__version__ = "0.1.0"

__all__ = [
    "CRITICAL_TOL",
    "RANDOM_STEPS",
    "STOPS",
    "RegimeLabel",
    "StepAction",
    "UnitStep",
    "WalkParams",
    "apply_action",
    "classify_regime",
    "sample_action",
    "steps_critical_p",
    "validate_params",
    "DiscreteTable",
    "Exponential",
    "Gamma",
    "LogNormal",
    "PointMass",
    "StepSizeModel",
    "ZeroInflatedPointMass",
    "unit_sizes",
    "WalkTrace",
    "default_checkpoints",
    "dense_checkpoints",
    "moves_series_random_steps",
    "moves_series_stops",
    "path_statistics",
    "recompute_statistics",
    "simulate_random_steps",
    "simulate_stops",
    "MartingaleSeries",
    "NormalizerTable",
    "RegimeConstants",
    "a_coefficients",
    "conditional_step_covariance",
    "expected_moves",
    "hyp3f2_unit",
    "lil_statistic",
    "limit_moment",
    "martingale_transform",
    "memory_exponent",
    "normalizer_table",
    "qsl_statistic",
    "regime_constants",
    "trace_variation",
    "u_limit",
    "u_partial",
    "EnsembleConfig",
    "EnsembleSummary",
    "map_paths",
    "run_ensemble",
    "seed_stream",
    "__version__",
]
