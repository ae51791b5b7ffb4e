"""Acceptance gate: eight end-to-end checks, one test per criterion.

Each test records a single PASS/FAIL summary line (printed by the conftest
terminal-summary hook) and then asserts. Criterion 5 documents a known
irreconcilable gap between the fast moving-average generator and the
aggregation limit; it is expected to fail and says so in its message.
"""

import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.linalg import cholesky, toeplitz

from nonfrac.fitloss import best_matching_a, fit_ar_population, zeta_ar
from nonfrac.forecast import forecast_csa
from nonfrac.harness import ExperimentConfig, run_experiment
from nonfrac.model import CsaParams, acf_csa_lags, csa_variance
from nonfrac.simulate import benchmark_generation, generate_csa_fast, generate_csa_naive

SUMMARY = []
ROOT = Path(__file__).resolve().parents[1]

A_GRID = (0.1, 0.5, 0.9, 1.3, 1.7)
B_GRID = (1.8, 1.6, 1.4, 1.2, 1.1)

# printed reference grids, rows follow A_GRID, columns follow B_GRID
PRINTED_ZETA_AR1 = np.array([
    [1.085, 1.110, 1.154, 1.257, 1.387],
    [1.145, 1.172, 1.211, 1.273, 1.320],
    [1.129, 1.146, 1.170, 1.202, 1.223],
    [1.110, 1.122, 1.137, 1.156, 1.168],
    [1.095, 1.104, 1.114, 1.126, 1.133],
])
PRINTED_ZETA_AR20 = np.array([
    [1.071, 1.085, 1.104, 1.129, 1.144],
    [1.111, 1.123, 1.137, 1.153, 1.161],
    [1.099, 1.107, 1.115, 1.124, 1.128],
    [1.086, 1.091, 1.096, 1.101, 1.103],
    [1.075, 1.079, 1.082, 1.085, 1.086],
])
PRINTED_ZETA_ID = np.array([
    [1.077, 1.084, 1.112, 1.158, 1.186],
    [1.345, 1.253, 1.202, 1.176, 1.169],
    [1.615, 1.435, 1.318, 1.240, 1.212],
    [1.880, 1.611, 1.431, 1.309, 1.263],
    [2.138, 1.778, 1.538, 1.374, 1.312],
])
PRINTED_ZETA_ARFIMA = np.array([
    [1.072, 1.083, 1.103, 1.131, 1.147],
    [1.127, 1.132, 1.138, 1.147, 1.152],
    [1.118, 1.121, 1.123, 1.125, 1.125],
    [1.104, 1.107, 1.108, 1.107, 1.106],
    [1.093, 1.096, 1.097, 1.095, 1.093],
])
PRINTED_ALPHA_I = np.array([
    [0.067, -0.019, -0.091, -0.153, -0.180],
    [0.402, 0.312, 0.229, 0.156, 0.123],
    [0.555, 0.468, 0.384, 0.305, 0.268],
    [0.642, 0.559, 0.475, 0.393, 0.352],
    [0.699, 0.620, 0.536, 0.451, 0.408],
])

# printed GPH table: (process, nominal d) -> mean estimate
PRINTED_GPH_MEANS = {
    ("csa", 0.4): 0.4062,
    ("frac", 0.4): 0.4034,
    ("csa", 0.2): 0.2628,
    ("frac", 0.2): 0.2011,
    ("csa", -0.2): 0.1036,
    ("frac", -0.2): -0.1985,
    ("csa", -0.4): 0.0653,
    ("frac", -0.4): -0.3927,
}


def record(name, passed, detail):
    SUMMARY.append(f"{name}: {'PASS' if passed else 'FAIL'} - {detail}")


def grid_from_rows(rows, statistic):
    by_cell = {}
    for row in rows:
        if row["statistic"] == statistic:
            by_cell[row["cell"]] = row["value"]
    out = np.empty((len(A_GRID), len(B_GRID)))
    for cell, value in by_cell.items():
        out[cell // len(B_GRID), cell % len(B_GRID)] = value
    return out


def test_criterion_1_ar_efficiency_table_exact():
    t0 = time.perf_counter()
    res = run_experiment(ExperimentConfig(experiment="table2"), workers=1)
    elapsed = time.perf_counter() - t0
    ar1 = grid_from_rows(res.rows, "zeta_ar1")
    ar20 = grid_from_rows(res.rows, "zeta_ar20")
    err = max(
        float(np.max(np.abs(ar1 - PRINTED_ZETA_AR1))),
        float(np.max(np.abs(ar20 - PRINTED_ZETA_AR20))),
    )
    passed = err <= 0.002 and elapsed < 10.0
    record("criterion 1 (AR loss table, 50 values +-0.002, <10 s)", passed,
           f"max abs err {err:.2e}, {elapsed:.2f}s")
    assert passed, f"max abs err {err}, elapsed {elapsed}"


def test_criterion_2_fractional_efficiency_table():
    t0 = time.perf_counter()
    res = run_experiment(ExperimentConfig(experiment="table3"), workers=1)
    elapsed = time.perf_counter() - t0
    err = max(
        float(np.max(np.abs(grid_from_rows(res.rows, "zeta_id") - PRINTED_ZETA_ID))),
        float(np.max(np.abs(grid_from_rows(res.rows, "zeta_arfima") - PRINTED_ZETA_ARFIMA))),
        float(np.max(np.abs(grid_from_rows(res.rows, "alpha_i") - PRINTED_ALPHA_I))),
    )
    passed = err <= 0.005 and elapsed < 60.0
    record("criterion 2 (fractional loss table, 75 values +-0.005, <60 s)", passed,
           f"max abs err {err:.2e}, {elapsed:.2f}s")
    assert passed, f"max abs err {err}, elapsed {elapsed}"


def test_criterion_3_gph_misspecification_table():
    t0 = time.perf_counter()
    cfg = ExperimentConfig(experiment="table1", sample_size=4096, replications=1000)
    res = run_experiment(cfg)
    elapsed = time.perf_counter() - t0
    means, sds = {}, {}
    for row in res.rows:
        key = (row["process"], round(row["nominal_d"], 6))
        if row["statistic"] == "mean_d_hat":
            means[key] = row["value"]
        elif row["statistic"] == "sd_d_hat":
            sds[key] = row["value"]
    problems = []
    for (process, d), printed in PRINTED_GPH_MEANS.items():
        tol = 0.04 if (process == "csa" and d < 0) else 0.03
        got = means[(process, d)]
        if abs(got - printed) > tol:
            problems.append(f"{process} d={d}: {got:.4f} vs {printed} (tol {tol})")
    # misspecification: negative-memory aggregation cells sit far above nominal d
    for d in (-0.2, -0.4):
        se = sds[("csa", d)] / np.sqrt(cfg.replications)
        if means[("csa", d)] - d <= 5.0 * se:
            problems.append(f"csa d={d} not bounded away from nominal")
    passed = not problems and elapsed < 600.0
    record("criterion 3 (GPH table at desk scale, misspecification effect)", passed,
           f"{len(problems)} deviations, {elapsed:.1f}s")
    assert passed, f"problems={problems}, elapsed={elapsed}"


def test_criterion_4_text_anchored_scalars():
    a2, _ = best_matching_a(2, 0.2)
    a30, _ = best_matching_a(30, 0.2)
    a10, _ = best_matching_a(10, 0.2)
    passed = abs(a2 - 0.118) <= 0.001 and abs(a30 - 0.121) <= 0.001 and 0.10 <= a10 <= 0.15
    record("criterion 4 (closest-match scalars 0.118 / 0.121 / ~0.12)", passed,
           f"a*(2)={a2:.4f}, a*(30)={a30:.4f}, a*(10)={a10:.4f}")
    assert passed, (a2, a30, a10)


def _mean_sample_acf(series_iter, max_lag):
    acfs = []
    for x in series_iter:
        x = x - x.mean()
        denom = float(np.dot(x, x))
        acfs.append([float(np.dot(x[k:], x[: x.size - k])) / denom for k in range(1, max_lag + 1)])
    acfs = np.asarray(acfs)
    return acfs.mean(axis=0), acfs.std(axis=0, ddof=1) / np.sqrt(len(acfs))


def test_criterion_5_generator_equivalence():
    """KNOWN FAIL. The fast generator filters white noise through weights
    whose lag-k products exceed the aggregation limit's autocovariance at
    every positive lag (strict Cauchy-Schwarz gap, ~0.08 at lag 1 for
    a=0.2, b=1.6), so its sample ACF cannot agree with the N-unit
    aggregation oracle or the closed form within Monte Carlo noise. The
    two mechanisms share variance and decay rate but not short-lag
    correlations; see the repository notes for the full derivation."""
    p = CsaParams(0.2, 1.6)
    T, max_lag = 512, 10
    t0 = time.perf_counter()
    fast_mean, fast_se = _mean_sample_acf(
        (generate_csa_fast(p, T, np.random.SeedSequence((50, 0, r))).values for r in range(500)),
        max_lag,
    )
    naive_mean, naive_se = _mean_sample_acf(
        (
            generate_csa_naive(p, T, 5000, burn_in=2000, seed=np.random.SeedSequence((50, 1, r))).values
            for r in range(100)
        ),
        max_lag,
    )
    elapsed = time.perf_counter() - t0
    closed = acf_csa_lags(p, max_lag)[1:]
    combined_se = np.sqrt(fast_se**2 + naive_se**2)
    z_pair = np.abs(fast_mean - naive_mean) / combined_se
    z_fast = np.abs(fast_mean - closed) / fast_se
    z_naive = np.abs(naive_mean - closed) / naive_se
    passed = (
        bool(np.all(z_pair < 4.0))
        and bool(np.all(z_fast < 3.0))
        and bool(np.all(z_naive < 3.0))
        and elapsed < 300.0
    )
    record(
        "criterion 5 (fast vs aggregation-oracle ACF equivalence)",
        passed,
        f"max |z| pair {z_pair.max():.1f}, fast-closed {z_fast.max():.1f}, "
        f"naive-closed {z_naive.max():.1f}, {elapsed:.1f}s "
        "[known upstream gap: the MA weights are not the Wold coefficients "
        "of the aggregation limit]",
    )
    assert passed, (
        "fast-generator ACF cannot match the aggregation limit: "
        f"lag-1 fast {fast_mean[0]:.4f}, naive {naive_mean[0]:.4f}, closed {closed[0]:.4f}; "
        "the fast filter's weights reproduce the variance and decay rate of the "
        "aggregate but overshoot every positive-lag autocovariance "
        "(strict Cauchy-Schwarz inequality), so this criterion is unattainable "
        "as stated. Deliberately left red; see notes/decisions ledger."
    )


def test_criterion_6_forecast_optimality():
    # data drawn from the exact stationary law of the aggregation limit
    # (Cholesky factor of the closed-form covariance), so the printed AR(1)
    # loss is the population value being estimated
    p = CsaParams(0.5, 1.6)
    T, reps = 500, 10_000
    zeta = zeta_ar(p, fit_ar_population(p, 1))
    alpha1 = float(fit_ar_population(p, 1)[0])
    g = csa_variance(p) * acf_csa_lags(p, T)
    L = cholesky(toeplitz(g), lower=True)
    rng = np.random.default_rng(np.random.SeedSequence((60, 0)))
    t0 = time.perf_counter()
    e_opt = np.empty(reps)
    e_ar = np.empty(reps)
    for r in range(reps):
        x = L @ rng.standard_normal(T + 1)
        head, nxt = x[:T], x[T]
        fc = forecast_csa(head, p, 1)
        e_opt[r] = (nxt - fc.point_forecasts[0]) ** 2
        e_ar[r] = (nxt - alpha1 * head[-1]) ** 2
    elapsed = time.perf_counter() - t0
    ratio = float(e_ar.mean()) / p.sigma_eps**2
    se = float(e_ar.std(ddof=1)) / np.sqrt(reps) / p.sigma_eps**2
    passed = (
        float(e_opt.mean()) <= float(e_ar.mean())
        and abs(ratio - zeta) < 3.0 * se
    )
    record(
        "criterion 6 (minimum-MSE forecasts beat AR(1); loss ratio 1.172)",
        passed,
        f"MSE_opt {e_opt.mean():.4f} <= MSE_ar {e_ar.mean():.4f}, "
        f"ratio {ratio:.4f} vs {zeta:.4f} (3 SE = {3 * se:.4f}), {elapsed:.1f}s",
    )
    assert passed, (ratio, zeta, se, e_opt.mean(), e_ar.mean())


def test_criterion_7_generation_speedup():
    rows = benchmark_generation(CsaParams(0.2, 1.6), [100, 10_000], runs=5)
    speedups = {row.T: row.speedup for row in rows}
    passed = speedups[100] >= 10.0 and speedups[10_000] >= 100.0
    record("criterion 7 (fast generation >=10x at T=1e2, >=100x at T=1e4)", passed,
           f"measured {speedups[100]:.0f}x and {speedups[10_000]:.0f}x")
    assert passed, speedups


def test_criterion_8_property_suites_standalone():
    targets = [
        "tests/test_spectral.py",
        "tests/test_forecast.py::TestRecoverInnovations",
        "tests/test_model.py::TestAcf::test_sign_dichotomy",
        "tests/test_fitloss.py::TestZetaAr::test_monotone_decreasing_in_order",
        "tests/test_harness.py::TestRunExperiment::test_table1_rerun_bitwise_identical",
        "tests/test_cli.py::TestTableAndExperiment::test_experiment_bitwise_reproducible",
    ]
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *targets],
        cwd=ROOT,
        capture_output=True,
        text=True,
        timeout=300,
    )
    elapsed = time.perf_counter() - t0
    passed = proc.returncode == 0 and elapsed < 120.0
    record("criterion 8 (property suites standalone, <2 min)", passed,
           f"exit {proc.returncode}, {elapsed:.1f}s")
    assert passed, f"exit={proc.returncode}, elapsed={elapsed}\n{proc.stdout[-2000:]}"
