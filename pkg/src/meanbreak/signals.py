"""Declarative mean/volatility paths and seeded Gaussian series synthesis.

A series is y_t = mu_t + sigma_t * eps_t with eps_t ~ N(0, 1).  Both paths
are deterministic functions of t/n: constant, step (abrupt regime changes at
given sample fractions), smooth (logistic or exponential transition), and
for the volatility a general multi-regime blend of transitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import expit

__all__ = [
    "TransitionSpec",
    "MeanSpec",
    "SigmaSpec",
    "transition",
    "mean_path",
    "sigma_path",
    "ergodic_variance_limit",
    "gaussian_stream",
    "generate_series",
]

_FAMILIES = ("logistic", "exponential")

# Guards against 2/3 * 3 = 1.9999999999999998-style representation error
# when taking the integer part of fraction * n.
_FLOOR_NUDGE = 1e-9


@dataclass(frozen=True)
class TransitionSpec:
    """Smooth transition function: logistic or exponential, located at tau1
    with slope gamma."""

    family: str
    tau1: float
    gamma: float

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown transition family {self.family!r}")
        if not 0.0 < self.tau1 < 1.0:
            raise ValueError(f"tau1 must lie in (0, 1), got {self.tau1}")
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


def transition(spec: TransitionSpec, x):
    """Evaluate the transition function at x (scalar or array), in [0, 1].

    Logistic: 1 / (1 + exp(-gamma (x - tau1))).
    Exponential: 1 - exp(-gamma (x - tau1)^2).
    Both are evaluated in overflow-safe form.
    """
    arr = np.asarray(x, dtype=np.float64)
    if spec.family == "logistic":
        out = expit(spec.gamma * (arr - spec.tau1))
    else:
        out = -np.expm1(-spec.gamma * (arr - spec.tau1) ** 2)
    return float(out) if np.isscalar(x) else out


def _check_fractions(fractions: tuple[float, ...], what: str) -> None:
    prev = 0.0
    for f in fractions:
        if not prev < f < 1.0:
            raise ValueError(
                f"{what} must be strictly increasing within (0, 1), got {fractions}"
            )
        prev = f


@dataclass(frozen=True)
class MeanSpec:
    """Mean path: constant, step with levels at given fractions, or a smooth
    two-regime transition."""

    variant: str
    levels: tuple[float, ...]
    fractions: tuple[float, ...] = ()
    transition: TransitionSpec | None = None

    def __post_init__(self) -> None:
        if any(not math.isfinite(v) for v in self.levels):
            raise ValueError("levels must be finite")
        if self.variant == "constant":
            if len(self.levels) != 1:
                raise ValueError("constant variant takes exactly one level")
        elif self.variant == "step":
            if len(self.levels) != len(self.fractions) + 1:
                raise ValueError("step variant needs len(levels) == len(fractions) + 1")
            _check_fractions(self.fractions, "step fractions")
        elif self.variant == "smooth":
            if len(self.levels) != 2 or self.transition is None:
                raise ValueError("smooth variant needs two levels and a transition")
        else:
            raise ValueError(f"unknown mean variant {self.variant!r}")

    @classmethod
    def constant(cls, mu: float) -> "MeanSpec":
        return cls(variant="constant", levels=(float(mu),))

    @classmethod
    def step(cls, levels, fractions) -> "MeanSpec":
        return cls(
            variant="step",
            levels=tuple(float(v) for v in levels),
            fractions=tuple(float(f) for f in fractions),
        )

    @classmethod
    def smooth(cls, level_from: float, level_to: float, spec: TransitionSpec) -> "MeanSpec":
        return cls(
            variant="smooth",
            levels=(float(level_from), float(level_to)),
            transition=spec,
        )


@dataclass(frozen=True)
class SigmaSpec:
    """Volatility path: constant, step, smooth, or a multi-regime blend of
    transitions between m + 1 positive levels."""

    variant: str
    levels: tuple[float, ...]
    fractions: tuple[float, ...] = ()
    transition: TransitionSpec | None = None
    locations: tuple[float, ...] = ()
    scales: tuple[float, ...] = ()
    transitions: tuple[TransitionSpec, ...] = field(default=())

    def __post_init__(self) -> None:
        if any(not (math.isfinite(v) and v > 0.0) for v in self.levels):
            raise ValueError("volatility levels must be finite and strictly positive")
        if self.variant == "constant":
            if len(self.levels) != 1:
                raise ValueError("constant variant takes exactly one level")
        elif self.variant == "step":
            if len(self.levels) != len(self.fractions) + 1:
                raise ValueError("step variant needs len(levels) == len(fractions) + 1")
            _check_fractions(self.fractions, "step fractions")
        elif self.variant == "smooth":
            if len(self.levels) != 2 or self.transition is None:
                raise ValueError("smooth variant needs two levels and a transition")
        elif self.variant == "multi_regime":
            m = len(self.locations)
            if m < 1 or len(self.levels) != m + 1:
                raise ValueError("multi_regime needs m locations and m + 1 levels")
            if len(self.scales) != m or len(self.transitions) != m:
                raise ValueError("multi_regime needs m scales and m transitions")
            _check_fractions(self.locations, "regime locations")
            if any(s <= 0.0 for s in self.scales):
                raise ValueError("regime scales must be positive")
        else:
            raise ValueError(f"unknown sigma variant {self.variant!r}")

    @classmethod
    def constant(cls, sigma: float) -> "SigmaSpec":
        return cls(variant="constant", levels=(float(sigma),))

    @classmethod
    def step(cls, levels, fractions) -> "SigmaSpec":
        return cls(
            variant="step",
            levels=tuple(float(v) for v in levels),
            fractions=tuple(float(f) for f in fractions),
        )

    @classmethod
    def smooth(cls, level_from: float, level_to: float, spec: TransitionSpec) -> "SigmaSpec":
        return cls(
            variant="smooth",
            levels=(float(level_from), float(level_to)),
            transition=spec,
        )

    @classmethod
    def multi_regime(cls, levels, locations, scales, transitions) -> "SigmaSpec":
        return cls(
            variant="multi_regime",
            levels=tuple(float(v) for v in levels),
            locations=tuple(float(v) for v in locations),
            scales=tuple(float(v) for v in scales),
            transitions=tuple(transitions),
        )


def _break_points(fractions: tuple[float, ...], n: int) -> np.ndarray:
    # Integer part [fraction * n], nudged so that e.g. (2/3) * 3 floors to 2.
    return np.floor(np.asarray(fractions) * n + _FLOOR_NUDGE).astype(np.int64)


def _step_values(levels, fractions, t: np.ndarray, n: int) -> np.ndarray:
    breaks = _break_points(fractions, n)
    idx = np.searchsorted(breaks, t, side="left")  # count of breaks < t
    return np.asarray(levels, dtype=np.float64)[idx]


def mean_path(spec: MeanSpec, n: int) -> np.ndarray:
    """Mean at t = 1..n; step boundaries follow the integer-part convention,
    smooth paths evaluate the transition at x = t/n (right endpoint included)."""
    if n < 1:
        raise ValueError("n must be positive")
    t = np.arange(1, n + 1)
    if spec.variant == "constant":
        return np.full(n, spec.levels[0])
    if spec.variant == "step":
        return _step_values(spec.levels, spec.fractions, t, n)
    lo, hi = spec.levels
    return lo + (hi - lo) * transition(spec.transition, t / n)


def sigma_path(spec: SigmaSpec, n: int) -> np.ndarray:
    """Volatility at t = 1..n, strictly positive."""
    if n < 1:
        raise ValueError("n must be positive")
    t = np.arange(1, n + 1)
    if spec.variant == "constant":
        return np.full(n, spec.levels[0])
    if spec.variant == "step":
        return _step_values(spec.levels, spec.fractions, t, n)
    if spec.variant == "smooth":
        lo, hi = spec.levels
        return lo + (hi - lo) * transition(spec.transition, t / n)
    return _multi_regime_values(spec, t / n)


def _multi_regime_values(spec: SigmaSpec, x: np.ndarray) -> np.ndarray:
    # Regime-local evaluation: each point is blended by the transition whose
    # location is nearest (boundaries at midpoints between locations); away
    # from its location every other transition is saturated at 0 or 1, so
    # this agrees with the telescoped multi-regime formula for
    # non-overlapping transitions without double-counting interior levels.
    locs = np.asarray(spec.locations)
    if locs.size == 1:
        active = np.zeros(x.shape, dtype=np.int64)
    else:
        mids = 0.5 * (locs[:-1] + locs[1:])
        active = np.searchsorted(mids, x, side="left")
    out = np.empty(x.shape)
    for j in range(locs.size):
        mask = active == j
        if not np.any(mask):
            continue
        z = (x[mask] - locs[j]) / spec.scales[j]
        f = transition(spec.transitions[j], z)
        out[mask] = spec.levels[j] * (1.0 - f) + spec.levels[j + 1] * f
    return out


def sigma_at(spec: SigmaSpec, x) -> np.ndarray:
    """Volatility as a function of the continuous sample fraction x in [0, 1].

    Used for the ergodic-limit quadrature; step regimes assign x <= tau_j to
    regime j (boundary points have measure zero under integration).
    """
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if spec.variant == "constant":
        return np.full(arr.shape, spec.levels[0])
    if spec.variant == "step":
        idx = np.searchsorted(np.asarray(spec.fractions), arr, side="left")
        return np.asarray(spec.levels, dtype=np.float64)[idx]
    if spec.variant == "smooth":
        lo, hi = spec.levels
        return lo + (hi - lo) * transition(spec.transition, arr)
    return _multi_regime_values(spec, arr)


def ergodic_variance_limit(spec: SigmaSpec) -> float:
    """Limit of (1/n) sum sigma_t^2: closed form for constant/step paths,
    quadrature of the squared path over [0, 1] otherwise."""
    if spec.variant == "constant":
        return spec.levels[0] ** 2
    if spec.variant == "step":
        edges = (0.0, *spec.fractions, 1.0)
        widths = np.diff(edges)
        return float(widths @ np.square(spec.levels))
    if spec.variant == "smooth":
        interior = [spec.transition.tau1]
    else:
        interior = list(spec.locations)
    value, _ = integrate.quad(
        lambda x: float(sigma_at(spec, x)[0]) ** 2,
        0.0,
        1.0,
        points=interior,
        epsabs=1e-10,
        limit=200,
    )
    return value


def gaussian_stream(seed, count: int) -> np.ndarray:
    """Deterministic standard normal variates from a counter-based generator.

    ``seed`` is an integer or a tuple of integers; the same seed yields a
    bit-identical stream across runs, platforms, and call orders, which makes
    parallel replication with disjoint derived seeds reproducible.
    """
    if count < 1:
        raise ValueError("count must be positive")
    entropy = list(seed) if isinstance(seed, (tuple, list)) else [int(seed)]
    bit_gen = np.random.Philox(np.random.SeedSequence(entropy))
    return np.random.Generator(bit_gen).standard_normal(count)


def generate_series(mean: MeanSpec, sigma: SigmaSpec, n: int, seed) -> np.ndarray:
    """Synthesize y_t = mu_t + sigma_t * eps_t for t = 1..n."""
    eps = gaussian_stream(seed, n)
    return mean_path(mean, n) + sigma_path(sigma, n) * eps
