"""Acceptance gate: ten numbered end-to-end criteria, one PASS/FAIL line each.

Criteria 3 and 4 compare Monte Carlo rejection frequencies against the
reference size/power tables for the canonical nine-series design; the
remaining criteria check the limit law, convergence properties, closed-form
oracles, and determinism.  Every check prints a single summary line before
asserting, so a full run reads as a ten-line scoreboard.
"""

import math

import numpy as np
import pytest

from meanbreak import asymptotics, core, dist, montecarlo, signals

MASTER_SEED = 1
REPLICATIONS = 1000

# Reference rejection frequencies (percent) for the canonical design:
# series id -> {n: (1%, 5%, 10%)}.
REFERENCE_SIZES = {
    1: {30: (0.2, 2.9, 5.1), 100: (0.4, 3.3, 7.9), 500: (0.7, 3.8, 8.2), 1000: (0.5, 4.1, 8.4)},
    2: {30: (0.3, 3.4, 7.1), 100: (0.9, 5.1, 10.6), 500: (1.3, 6.2, 11.7), 1000: (1.3, 6.3, 12.4)},
    3: {30: (0.5, 4.3, 7.9), 100: (0.9, 4.9, 10.1), 500: (1.1, 6.4, 12.7), 1000: (1.1, 6.3, 12.4)},
}
REFERENCE_POWERS = {
    4: {30: (18.3, 47.3, 61.9), 100: (95.9, 98.8, 99.4)},
    5: {30: (10.6, 33.9, 48.5), 100: (85.0, 95.4, 97.7)},
    6: {30: (14.2, 34.5, 48.7), 100: (84.8, 94.8, 98.0)},
    7: {30: (17.1, 46.6, 58.4), 100: (92.9, 98.4, 99.3)},
    8: {30: (12.6, 36.0, 52.1), 100: (79.8, 93.1, 96.5)},
    9: {30: (14.0, 35.9, 50.8), 100: (74.8, 92.0, 95.5)},
}
LEVELS = (0.01, 0.05, 0.10)


def report(number: int, name: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({name})"
    if detail:
        line += f": {detail}"
    print(line)


@pytest.fixture(scope="session")
def full_table():
    config = montecarlo.ExperimentConfig(
        series=tuple(range(1, 10)),
        sample_sizes=(30, 100, 500, 1000),
        levels=LEVELS,
        replications=REPLICATIONS,
        master_seed=MASTER_SEED,
        workers=1,
    )
    return montecarlo.run_experiment(config)


def test_criterion_1_limit_law_golden_values():
    targets = {1.225: 0.9005625, 1.359: 0.9502443, 1.628: 0.9900245}
    errors = {z: abs(dist.bridge_sup_cdf(z) - v) for z, v in targets.items()}
    ok = all(e <= 1e-6 for e in errors.values())
    report(1, "limit-law golden values", ok, f"max abs error {max(errors.values()):.2e}")
    assert ok, errors


def test_criterion_2_quantile_inversion():
    targets = {0.90: 1.225, 0.95: 1.359, 0.99: 1.628}
    errors = {p: abs(dist.bridge_sup_quantile(p) - z) for p, z in targets.items()}
    ok = all(e <= 5e-3 for e in errors.values())
    report(2, "quantile inversion", ok, f"max abs error {max(errors.values()):.2e}")
    assert ok, errors


def test_criterion_3_size_table(full_table):
    failures = []
    for sid, by_n in REFERENCE_SIZES.items():
        for n, row in by_n.items():
            for alpha, ref_pct in zip(LEVELS, row):
                ref = ref_pct / 100.0
                got = full_table.frequency(f"Series {sid}", n, alpha)
                band = 3.0 * math.sqrt(ref * (1.0 - ref) / REPLICATIONS)
                if abs(got - ref) > band:
                    failures.append(
                        f"Series {sid} n={n} {alpha:.0%}: {100 * got:.1f} "
                        f"vs {ref_pct} +/- {100 * band:.1f}"
                    )
    ok = not failures
    report(3, "size table", ok, f"{36 - len(failures)}/36 cells in band")
    assert ok, failures


def test_criterion_4_power_table(full_table):
    failures = []
    for sid in range(4, 10):
        for n in (500, 1000):
            for alpha in LEVELS:
                got = full_table.frequency(f"Series {sid}", n, alpha)
                if got < 0.99:
                    failures.append(f"Series {sid} n={n} {alpha:.0%}: {100 * got:.1f} < 99")
        for n, tol_pct in ((100, 3.0), (30, 5.0)):
            for alpha, ref_pct in zip(LEVELS, REFERENCE_POWERS[sid][n]):
                got = 100.0 * full_table.frequency(f"Series {sid}", n, alpha)
                if abs(got - ref_pct) > tol_pct:
                    failures.append(
                        f"Series {sid} n={n} {alpha:.0%}: {got:.1f} "
                        f"vs {ref_pct} +/- {tol_pct}"
                    )
    ok = not failures
    report(4, "power table", ok, f"{72 - len(failures)}/72 cells in band")
    assert ok, failures


def test_criterion_5_null_law_convergence():
    mean_spec, sigma_spec = montecarlo.preset(2)
    reps, n = 5000, 1000
    stats = np.empty(reps)
    for r in range(reps):
        y = signals.generate_series(mean_spec, sigma_spec, n, (MASTER_SEED, 101, n, r))
        stats[r] = core.lm_test(y).statistic
    stats.sort()
    cdf = np.array([dist.bridge_sup_cdf(s) for s in stats])
    grid = np.arange(1, reps + 1) / reps
    ks = max(np.abs(cdf - grid).max(), np.abs(cdf - (grid - 1.0 / reps)).max())
    ok = ks < 0.05
    report(5, "null-law convergence", ok, f"KS distance {ks:.4f} (< 0.05 required)")
    assert ok, ks


def test_criterion_6_partial_sum_covariance():
    taus = (0.25, 0.5, 0.75)
    n, reps = 2000, 5000
    specs = {
        "constant": signals.SigmaSpec.constant(1.0),
        "two-regime": montecarlo.preset(2)[1],
    }
    failures = []
    worst = 0.0
    for name, spec in specs.items():
        sigma_bar2 = signals.ergodic_variance_limit(spec)
        path = signals.sigma_path(spec, n)
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([202])))
        eps = rng.standard_normal((reps, n))
        cumulative = (eps * path).cumsum(axis=1) / math.sqrt(n * sigma_bar2)
        w = cumulative[:, [int(t * n) - 1 for t in taus]]
        cov = np.cov(w, rowvar=False)
        for i in range(3):
            for j in range(i, 3):
                target = asymptotics.partial_variance_limit(spec, min(taus[i], taus[j]))
                target /= sigma_bar2
                rel = abs(cov[i, j] - target) / target
                worst = max(worst, rel)
                if rel > 0.05:
                    failures.append(
                        f"{name} cov({taus[i]},{taus[j]}) = {cov[i, j]:.4f} "
                        f"vs {target:.4f} ({100 * rel:.1f}%)"
                    )
    ok = not failures
    report(6, "partial-sum covariance", ok, f"worst relative error {100 * worst:.1f}%")
    assert ok, failures


def test_criterion_7_statistic_growth_rate():
    reps = 400
    failures = []
    ratios = {}
    for sid in (4, 7):
        mean_spec, sigma_spec = montecarlo.preset(sid)
        medians = {}
        for n in (800, 3200):
            stats = [
                core.lm_test(
                    signals.generate_series(mean_spec, sigma_spec, n, (303, sid, n, r))
                ).statistic
                for r in range(reps)
            ]
            medians[n] = float(np.median(stats))
        ratios[sid] = medians[3200] / medians[800]
        if not 1.6 <= ratios[sid] <= 2.4:
            failures.append(f"Series {sid}: ratio {ratios[sid]:.3f} outside [1.6, 2.4]")
    ok = not failures
    report(
        7, "statistic growth rate", ok,
        ", ".join(f"Series {sid} ratio {r:.2f}" for sid, r in ratios.items()),
    )
    assert ok, failures


def test_criterion_8_drift_closed_forms():
    grid = np.linspace(0.01, 0.99, 99)
    worst = 0.0
    failures = []
    for family in ("logistic", "exponential"):
        for gamma in (1.0, 20.0, 100.0):
            for tau1 in (0.2, 0.5, 0.8):
                spec = signals.TransitionSpec(family, tau1, gamma)
                closed = (
                    asymptotics.drift_closed_logistic
                    if family == "logistic"
                    else asymptotics.drift_closed_exponential
                )
                values = np.array([closed(tau1, gamma, t) for t in grid])
                reference = np.array([asymptotics.drift_quadrature(spec, t) for t in grid])
                err = float(np.abs(values - reference).max())
                worst = max(worst, err)
                if err > 1e-8:
                    failures.append(f"{family} tau1={tau1} gamma={gamma}: error {err:.2e}")
                if np.abs(values).max() <= 0.0:
                    failures.append(f"{family} tau1={tau1} gamma={gamma}: degenerate drift")
    ok = not failures
    report(8, "drift closed forms", ok, f"max abs deviation {worst:.2e}")
    assert ok, failures


def test_criterion_9_limit_variances():
    n = 100_000
    failures = []
    details = []
    mean4, sigma4 = montecarlo.preset(4)
    target4 = asymptotics.limit_variance_abrupt(0.5, 1.0, 2.0, 1.0).sigma_star2
    var4 = float(signals.generate_series(mean4, sigma4, n, (404, 4)).var())
    details.append(f"abrupt {var4:.4f} vs {target4:.4f}")
    if abs(var4 - target4) / target4 > 0.02:
        failures.append(details[-1])

    mean7, sigma7 = montecarlo.preset(7)
    target7 = asymptotics.limit_variance_smooth(
        signals.TransitionSpec("logistic", 0.5, 20.0), 1.0, 2.0, 1.0
    ).sigma_star2
    var7 = float(signals.generate_series(mean7, sigma7, n, (404, 7)).var())
    details.append(f"smooth {var7:.4f} vs {target7:.4f}")
    if abs(var7 - target7) / target7 > 0.02:
        failures.append(details[-1])

    ok = not failures
    report(9, "limit variances", ok, "; ".join(details))
    assert ok, failures


def test_criterion_10_worker_determinism():
    documents = {}
    for workers in (1, 4, 16):
        config = montecarlo.ExperimentConfig(
            series=(1, 4),
            sample_sizes=(30, 100),
            levels=LEVELS,
            replications=96,
            master_seed=MASTER_SEED,
            workers=workers,
        )
        table = montecarlo.run_experiment(config)
        documents[workers] = (
            montecarlo.emit_table(table, "csv").encode()
            + montecarlo.emit_table(table, "json").encode()
        )
    ok = documents[1] == documents[4] == documents[16]
    report(10, "worker determinism", ok, "identical bytes for workers 1/4/16")
    assert ok
