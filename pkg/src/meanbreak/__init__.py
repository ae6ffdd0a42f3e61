"""LM-type test for a change in the mean of a heteroskedastic time series,
with its Brownian-bridge limit law, signal generators, asymptotic drift and
variance formulas, and a Monte Carlo size/power harness."""

from meanbreak.core import (
    CusumPath,
    DegenerateSeriesError,
    InsufficientDataError,
    NullEstimates,
    TestOutcome,
    absolute_transform,
    compute_returns,
    cusum_path,
    lm_test,
    null_estimates,
)
from meanbreak.dist import (
    BridgeSupLaw,
    bridge_sup_cdf,
    bridge_sup_quantile,
    p_value,
)
from meanbreak.montecarlo import (
    ExperimentConfig,
    RejectionTable,
    emit_table,
    preset,
    run_experiment,
)
from meanbreak.signals import (
    MeanSpec,
    SigmaSpec,
    TransitionSpec,
    ergodic_variance_limit,
    gaussian_stream,
    generate_series,
    mean_path,
    sigma_path,
    transition,
)

__version__ = "0.1.0"

__all__ = [
    "BridgeSupLaw",
    "CusumPath",
    "DegenerateSeriesError",
    "ExperimentConfig",
    "InsufficientDataError",
    "MeanSpec",
    "NullEstimates",
    "RejectionTable",
    "SigmaSpec",
    "TestOutcome",
    "TransitionSpec",
    "absolute_transform",
    "bridge_sup_cdf",
    "bridge_sup_quantile",
    "compute_returns",
    "cusum_path",
    "emit_table",
    "ergodic_variance_limit",
    "gaussian_stream",
    "generate_series",
    "lm_test",
    "mean_path",
    "null_estimates",
    "p_value",
    "preset",
    "run_experiment",
    "sigma_path",
    "transition",
]
