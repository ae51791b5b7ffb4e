"""Sample-path generation.

Fast generators filter seeded Gaussian innovations with the MA weights via
one circular convolution (O(T log T)); the naive aggregator runs N seeded
AR(1) units and is kept as the definitional oracle. Both fast paths use the
truncated (Type II) convention with zero pre-sample innovations.
"""

import time
from dataclasses import dataclass

import numpy as np

from .model import CsaParams, FracParams, csa_ma_coeffs, frac_ma_coeffs
from .spectral import circular_convolve

__all__ = [
    "SeriesSample",
    "TimingRow",
    "generate_csa_fast",
    "generate_csa_naive",
    "generate_frac_fast",
    "benchmark_generation",
]


@dataclass(frozen=True)
class SeriesSample:
    """A simulated path with its generating metadata.

    Identical (generator, params, seed, T, n_units) reproduce the values
    bit-for-bit on one platform.
    """

    values: np.ndarray
    generator: str  # 'csa_fast', 'csa_naive' or 'frac_fast'
    params: object
    seed: int
    n_units: int | None = None


def _draw_innovations(rng, T, sigma, innovations):
    if innovations is not None:
        nu = np.asarray(innovations, dtype=float)
        if nu.size != T:
            raise ValueError(f"need {T} innovations, got {nu.size}")
        return nu
    return sigma * rng.standard_normal(T)


def generate_csa_fast(p, T, seed, innovations=None):
    """Fast CSA(a, b) path: convolve seeded N(0, sigma^2) innovations with
    the MA weights. `innovations` overrides the random draw (test hook:
    an impulse returns the weight sequence itself)."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    rng = np.random.default_rng(seed)
    nu = _draw_innovations(rng, T, p.sigma_eps, innovations)
    values = circular_convolve(nu, csa_ma_coeffs(p, T).weights)
    return SeriesSample(values=values, generator="csa_fast", params=p, seed=seed)


def generate_frac_fast(p, T, seed, innovations=None):
    """Fast I(d) path: same convolution device with the fractional
    weights, unit innovation variance."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    rng = np.random.default_rng(seed)
    nu = _draw_innovations(rng, T, 1.0, innovations)
    values = circular_convolve(nu, frac_ma_coeffs(p, T).weights)
    return SeriesSample(values=values, generator="frac_fast", params=p, seed=seed)


def generate_csa_naive(p, T, n_units, burn_in=None, seed=0, alphas=None):
    """Definitional CSA generator: N AR(1) units with alpha_i^2 ~ Beta(a, b),
    started at zero, warmed up for `burn_in` steps and aggregated with
    1/sqrt(N) scaling.

    Innovations are drawn one time step at a time so memory stays O(N + T)
    even for very long warm-ups. `alphas` overrides the Beta draw (test
    hook). Default burn_in is max(2000, T); units with alpha near 1 need a
    long warm-up.
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    if n_units < 1:
        raise ValueError(f"n_units must be >= 1, got {n_units}")
    if burn_in is None:
        burn_in = max(2000, T)
    if burn_in < 0:
        raise ValueError(f"burn_in must be >= 0, got {burn_in}")
    rng = np.random.default_rng(seed)
    if alphas is None:
        alphas = np.sqrt(rng.beta(p.a, p.b, size=n_units))
    else:
        alphas = np.asarray(alphas, dtype=float)
        if alphas.size != n_units:
            raise ValueError(f"need {n_units} alphas, got {alphas.size}")
    state = np.zeros(n_units)
    out = np.empty(T)
    for t in range(burn_in + T):
        state = alphas * state + p.sigma_eps * rng.standard_normal(n_units)
        if t >= burn_in:
            out[t - burn_in] = state.sum()
    out /= np.sqrt(n_units)
    return SeriesSample(
        values=out, generator="csa_naive", params=p, seed=seed, n_units=n_units
    )


@dataclass(frozen=True)
class TimingRow:
    T: int
    n_units: int
    fast_seconds: float
    naive_seconds: float

    @property
    def speedup(self):
        return self.naive_seconds / self.fast_seconds


def _median_time(fn, runs):
    times = []
    for _ in range(runs):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def benchmark_generation(p, sizes, n_units_rule=None, runs=5, seed=0):
    """Median wall-clock of the fast vs naive generator at each sample size.

    The cross-sectional dimension defaults to N = T, matching the advice
    that it should grow with the sample size.
    """
    if not sizes:
        raise ValueError("sizes must be nonempty")
    if n_units_rule is None:
        n_units_rule = lambda T: T
    rows = []
    for T in sizes:
        n = int(n_units_rule(T))
        t_fast = _median_time(lambda: generate_csa_fast(p, T, seed), runs)
        t_naive = _median_time(
            lambda: generate_csa_naive(p, T, n, seed=seed), runs
        )
        rows.append(TimingRow(T=T, n_units=n, fast_seconds=t_fast, naive_seconds=t_naive))
    return rows
