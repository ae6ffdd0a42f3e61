"""CUSUM-based LM test for a change in the mean of a heteroskedastic series.

The test statistic is the supremum of the absolute normalized cumulative sum
of deviations from the full-sample mean.  Under no change in the mean the
statistic converges to the supremum of the absolute Brownian bridge, whose
distribution lives in :mod:`meanbreak.dist`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from meanbreak import dist

__all__ = [
    "DegenerateSeriesError",
    "InsufficientDataError",
    "NullEstimates",
    "CusumPath",
    "TestOutcome",
    "compute_returns",
    "absolute_transform",
    "null_estimates",
    "cusum_path",
    "lm_test",
]


class InsufficientDataError(ValueError):
    """Raised when a series is too short for estimation or testing."""


class DegenerateSeriesError(ValueError):
    """Raised when the sample variance is zero and the statistic is undefined."""


def as_series(values, min_length: int = 1) -> np.ndarray:
    """Validate and coerce ``values`` into a 1-D float64 array.

    Rejects non-finite entries and series shorter than ``min_length``.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"series must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_length:
        raise InsufficientDataError(
            f"series has {arr.size} observations, need at least {min_length}"
        )
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValueError(f"series contains a non-finite value at index {bad}")
    return arr


@dataclass(frozen=True)
class NullEstimates:
    """Maximum likelihood estimates under a constant-mean Gaussian model."""

    mu_hat: float
    sigma2_hat: float  # MLE variance, divisor n


@dataclass(frozen=True)
class CusumPath:
    """Normalized CUSUM path on the grid k/n, k = 0..n."""

    points: np.ndarray  # length n + 1, endpoints exactly zero
    scale: float  # the sigma_hat used for normalization


@dataclass(frozen=True)
class TestOutcome:
    statistic: float
    p_value: float
    break_index: int  # smallest k attaining the max, 1 <= k <= n - 1
    reject: bool
    alpha: float


def compute_returns(prices) -> np.ndarray:
    """Log returns r_t = log P_t - log P_{t-1} of a strictly positive series."""
    arr = as_series(prices, min_length=2)
    if np.any(arr <= 0.0):
        bad = int(np.flatnonzero(arr <= 0.0)[0])
        raise ValueError(f"nonpositive price {arr[bad]} at index {bad}")
    return np.diff(np.log(arr))


def absolute_transform(series) -> np.ndarray:
    """Elementwise absolute value, e.g. absolute returns y_t = |r_t|."""
    return np.abs(as_series(series))


def null_estimates(series) -> NullEstimates:
    """Sample mean and MLE variance (divisor n) of the series."""
    arr = as_series(series, min_length=2)
    mu = float(arr.mean())
    d = arr - mu
    sigma2 = float(d @ d) / arr.size
    return NullEstimates(mu_hat=mu, sigma2_hat=sigma2)


def _cusum_points(arr: np.ndarray, sigma_hat: float) -> np.ndarray:
    # Partial sums of centered values, then the exact-cancellation form
    # S_k - (k/n) S_n: the endpoint is zero by construction, not by luck.
    n = arr.size
    d = arr - arr.mean()
    s = np.empty(n + 1)
    s[0] = 0.0
    np.cumsum(d, out=s[1:])
    k = np.arange(n + 1, dtype=np.float64)
    points = (s - (k / n) * s[n]) / (math.sqrt(n) * sigma_hat)
    points[0] = 0.0
    points[n] = 0.0
    return points


def cusum_path(series) -> CusumPath:
    """Normalized CUSUM path B(k/n) = sum_{t<=k}(y_t - mean) / (sqrt(n) * sd)."""
    arr = as_series(series, min_length=2)
    est = null_estimates(arr)
    if est.sigma2_hat <= 0.0:
        raise DegenerateSeriesError(
            "sample variance is zero; the test statistic is undefined"
        )
    sigma_hat = math.sqrt(est.sigma2_hat)
    return CusumPath(points=_cusum_points(arr, sigma_hat), scale=sigma_hat)


def lm_test(series, alpha: float = 0.05) -> TestOutcome:
    """Test for a change in the mean at significance level ``alpha``.

    Returns the sup-statistic, its asymptotic p-value, the smallest grid
    index attaining the maximum, and the rejection decision.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    path = cusum_path(series)
    abs_points = np.abs(path.points)
    statistic = float(abs_points.max())
    break_index = int(np.argmax(abs_points))  # first occurrence
    p = dist.p_value(statistic)
    return TestOutcome(
        statistic=statistic,
        p_value=p,
        break_index=break_index,
        reject=p < alpha,
        alpha=alpha,
    )
