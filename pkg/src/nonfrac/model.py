"""Closed-form process definitions for the two long-memory mechanisms.

I(d): fractionally differenced white noise with memory d in (-1/2, 1/2).
CSA(a, b): the limit of 1/sqrt(N) aggregation of AR(1) units whose squared
coefficients are Beta(a, b) draws; implied memory d = 1 - b/2.

All Gamma-ratio quantities use one-step recursions where lags shift by
integers, and log-gamma differences where they shift by half-integers, so
they stay stable for lags up to 1e6.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .specfun import ConvergenceError, algebraic_tail_estimate, beta_ratio_sequence

__all__ = [
    "FracParams",
    "CsaParams",
    "MaCoefficients",
    "frac_ma_coeffs",
    "csa_ma_coeffs",
    "acf_frac",
    "acf_frac_lags",
    "acf_csa",
    "acf_csa_lags",
    "csa_variance",
    "csa_spectrum_at_zero",
]


@dataclass(frozen=True)
class FracParams:
    """Memory parameter of a fractionally differenced process."""

    d: float

    def __post_init__(self):
        if not -0.5 < self.d < 0.5:
            raise ValueError(f"d must lie in (-1/2, 1/2), got {self.d}")


@dataclass(frozen=True)
class CsaParams:
    """Beta-distribution parameters (a, b) of a cross-sectionally
    aggregated process, plus the innovation standard deviation.

    b > 1 is required for the autocorrelation function to exist; the
    implied memory parameter is d = 1 - b/2.
    """

    a: float
    b: float
    sigma_eps: float = 1.0

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if self.b <= 1:
            raise ValueError(f"b must exceed 1, got {self.b}")
        if self.sigma_eps <= 0:
            raise ValueError(f"sigma_eps must be positive, got {self.sigma_eps}")

    @property
    def memory_d(self):
        return 1.0 - self.b / 2.0


@dataclass(frozen=True)
class MaCoefficients:
    """Finite prefix of the MA(infinity) weights of either process."""

    weights: np.ndarray
    origin: str  # 'fractional' or 'csa'
    params: object

    def __len__(self):
        return self.weights.size


def frac_ma_coeffs(p, T):
    """MA weights pi_j of (1-L)^{-d}: pi_0 = 1, pi_j = pi_{j-1} (j-1+d)/j.

    Tail behaves like j^{d-1}; all weights negative for j >= 1 when d < 0.
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    w = np.empty(T)
    w[0] = 1.0
    if T > 1:
        j = np.arange(1.0, T)
        np.cumprod((j - 1.0 + p.d) / j, out=w[1:])
    return MaCoefficients(weights=w, origin="fractional", params=p)


def csa_ma_coeffs(p, T):
    """MA weights phi_j = sqrt(B(a+j, b) / B(a, b)): positive, decreasing,
    tail ~ j^{-b/2}."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    w = np.sqrt(beta_ratio_sequence(p.a, p.b, T - 1))
    return MaCoefficients(weights=w, origin="csa", params=p)


def acf_frac(p, k):
    """Autocorrelation of I(d) at lag k: Gamma(k+d)Gamma(1-d) /
    (Gamma(k-d+1)Gamma(d)), via the lag recursion. Negative for all
    k >= 1 when d < 0."""
    if k < 0:
        raise ValueError(f"lag must be >= 0, got {k}")
    g = 1.0
    for i in range(1, int(k) + 1):
        g *= (i - 1.0 + p.d) / (i - p.d)
    return g


def acf_frac_lags(p, kmax):
    """acf_frac at lags 0..kmax as an array."""
    g = np.empty(kmax + 1)
    g[0] = 1.0
    if kmax > 0:
        i = np.arange(1.0, kmax + 1)
        np.cumprod((i - 1.0 + p.d) / (i - p.d), out=g[1:])
    return g


def _log_beta_arr(x, y):
    return gammaln(x) + gammaln(y) - gammaln(x + y)


def acf_csa(p, k):
    """Autocorrelation of CSA(a, b) at lag k: B(a+k/2, b-1) / B(a, b-1).

    Always strictly positive, decays like k^{1-b}. The half-integer lag
    shift rules out a pure product recursion, so this goes through
    log-gamma differences.
    """
    if k < 0:
        raise ValueError(f"lag must be >= 0, got {k}")
    return float(np.exp(_log_beta_arr(p.a + k / 2.0, p.b - 1.0) - _log_beta_arr(p.a, p.b - 1.0)))


def acf_csa_lags(p, kmax):
    """acf_csa at lags 0..kmax as an array."""
    k = np.arange(kmax + 1, dtype=float)
    out = np.exp(_log_beta_arr(p.a + k / 2.0, p.b - 1.0) - _log_beta_arr(p.a, p.b - 1.0))
    out[0] = 1.0
    return out


def csa_variance(p):
    """Process variance sigma_eps^2 * B(a, b-1) / B(a, b), the limit of
    sigma_eps^2 * sum phi_j^2."""
    # B(a, b-1)/B(a, b) simplifies to (a+b-1)/(b-1)
    return p.sigma_eps**2 * (p.a + p.b - 1.0) / (p.b - 1.0)


def csa_spectrum_at_zero(p, rel_tol=1e-8):
    """Spectral density of CSA(a, b) at the origin for b > 2:
    (sigma^2 / 2 pi) * (sum_j phi_j)^2.

    The weight sum converges only for b > 2 (negative-memory regime); the
    truncation point doubles until the analytic tail estimate (the weights
    decay like j^{-b/2}) leaves the total stable to `rel_tol`.
    """
    if p.b <= 2:
        raise ConvergenceError(
            f"weight sum diverges for b = {p.b} <= 2 (memory is nonnegative)"
        )
    n = 4096
    prev = None
    while n <= 2**24:
        phi = np.sqrt(beta_ratio_sequence(p.a, p.b, n))
        total = float(phi.sum()) + algebraic_tail_estimate(phi, p.b / 2.0, n)
        if prev is not None and abs(total - prev) <= rel_tol * abs(total):
            return p.sigma_eps**2 / (2.0 * np.pi) * total**2
        prev = total
        n *= 2
    raise ConvergenceError(
        f"weight sum not stable to {rel_tol} after {n // 2} terms (b = {p.b})"
    )
