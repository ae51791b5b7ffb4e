"""Special-function kernel: log-gamma, Beta-function ratios, zeta, and
generalized hypergeometric series.

Everything here is pure and thread-safe. The Beta ratios are computed by
telescoping products rather than Gamma calls so they stay finite for very
large shifts; the log-gamma route is kept only as a cross-check in the tests.
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConvergenceError",
    "PfqSpec",
    "log_gamma",
    "signed_log_gamma",
    "log_beta",
    "beta_ratio",
    "beta_ratio_sequence",
    "hurwitz_zeta",
    "riemann_zeta",
    "hypergeometric_pfq",
    "algebraic_tail_estimate",
]

MAX_PFQ_TERMS = 10**7


class ConvergenceError(RuntimeError):
    """A series failed to converge under the requested tolerance."""


def log_gamma(x):
    """Natural log of the Gamma function for x > 0."""
    if x <= 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def signed_log_gamma(x):
    """Return (sign, log|Gamma(x)|) for any real x that is not a pole.

    Negative non-integer arguments are handled through the reflection
    formula Gamma(x) = pi / (sin(pi*x) * Gamma(1-x)); the sign comes from
    sin(pi*x) since Gamma(1-x) > 0 there.
    """
    if x > 0:
        return 1.0, math.lgamma(x)
    if x == math.floor(x):
        raise ValueError(f"Gamma pole at nonpositive integer {x}")
    s = math.sin(math.pi * x)
    return math.copysign(1.0, s), math.log(math.pi / abs(s)) - math.lgamma(1.0 - x)


def log_beta(x, y):
    """log B(x, y) for x, y > 0."""
    return log_gamma(x) + log_gamma(y) - log_gamma(x + y)


def beta_ratio(a, b, j):
    """B(a+j, b) / B(a, b) as the telescoping product of (a+i)/(a+b+i).

    Exact 1.0 at j = 0, strictly decreasing in j for b > 0. Avoids
    overflow/cancellation of evaluating two Beta functions for large j.
    """
    if a <= 0 or b <= 0:
        raise ValueError(f"beta_ratio requires a, b > 0, got a={a}, b={b}")
    if j < 0:
        raise ValueError(f"beta_ratio requires j >= 0, got {j}")
    out = 1.0
    for i in range(int(j)):
        out *= (a + i) / (a + b + i)
    return out


def beta_ratio_sequence(a, b, jmax):
    """Vectorised beta_ratio for j = 0..jmax (inclusive), via cumprod."""
    if a <= 0 or b <= 0:
        raise ValueError(f"beta_ratio requires a, b > 0, got a={a}, b={b}")
    i = np.arange(jmax, dtype=float)
    out = np.empty(jmax + 1)
    out[0] = 1.0
    if jmax > 0:
        np.cumprod((a + i) / (a + b + i), out=out[1:])
    return out


# Bernoulli numbers B_2, B_4, ... used by the Euler-Maclaurin correction.
_BERNOULLI_EVEN = (
    1.0 / 6,
    -1.0 / 30,
    1.0 / 42,
    -1.0 / 30,
    5.0 / 66,
    -691.0 / 2730,
    7.0 / 6,
)


def hurwitz_zeta(s, q=1.0, n_direct=30):
    """Hurwitz zeta sum_{n>=0} (q+n)^{-s} for s > 1, q > 0, by Euler-Maclaurin.

    Direct summation of the first `n_direct` terms followed by the integral
    term, the half-term, and Bernoulli corrections; accurate to well below
    1e-12 relative for moderate s.
    """
    if s <= 1:
        raise ValueError(f"hurwitz_zeta requires s > 1, got {s}")
    if q <= 0:
        raise ValueError(f"hurwitz_zeta requires q > 0, got {q}")
    n = np.arange(n_direct)
    total = float(np.sum((q + n) ** (-s)))
    x = q + n_direct
    total += x ** (1.0 - s) / (s - 1.0) + 0.5 * x ** (-s)
    # Euler-Maclaurin: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * x^{-s-2k+1}
    poch = s
    fact = 2.0
    power = x ** (-s - 1.0)
    for k, b2k in enumerate(_BERNOULLI_EVEN, start=1):
        total += b2k / fact * poch * power
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
        power /= x * x
    return total


def riemann_zeta(s):
    """Riemann zeta for s > 1."""
    if s <= 1:
        raise ValueError(f"riemann_zeta requires s > 1, got {s}")
    return hurwitz_zeta(s, 1.0)


def algebraic_tail_estimate(terms, exponent, n_last):
    """Estimate sum_{n > n_last} t_n for terms decaying like n^{-exponent}.

    Fits t_n = n^{-exponent} (c0 + c1/n + c2/n^2 + c3/n^3) at four dyadic
    nodes up to n_last and sums the fitted tail exactly with Hurwitz zeta.
    Requires exponent > 1 and n_last >= 8.
    """
    if exponent <= 1:
        raise ConvergenceError(
            f"algebraic tail diverges for exponent {exponent} <= 1"
        )
    if n_last < 8:
        raise ValueError("need at least 8 terms for the tail fit")
    nodes = np.array([n_last, n_last // 2, n_last // 4, n_last // 8], dtype=float)
    tvals = np.array([terms[int(n)] for n in nodes])
    design = nodes[:, None] ** (-exponent - np.arange(4)[None, :])
    coeffs = np.linalg.solve(design, tvals)
    return float(
        sum(
            c * hurwitz_zeta(exponent + i, n_last + 1.0)
            for i, c in enumerate(coeffs)
        )
    )


@dataclass(frozen=True)
class PfqSpec:
    """Parameters of a generalized hypergeometric series pFq.

    Denominator parameters must avoid the poles (zero or negative integers);
    at unit argument with p = q + 1 the series only converges when the
    parameter excess sum(den) - sum(num) is positive.
    """

    numerator_params: tuple = field(default=())
    denominator_params: tuple = field(default=())
    argument: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "numerator_params", tuple(float(v) for v in self.numerator_params))
        object.__setattr__(self, "denominator_params", tuple(float(v) for v in self.denominator_params))
        for c in self.denominator_params:
            if c <= 0 and c == int(c):
                raise ValueError(
                    f"denominator parameter {c} is a pole of the series"
                )


def _pfq_ratio(num, den, n, z):
    """Term ratio t_{n+1}/t_n of the hypergeometric series."""
    r = z / (n + 1.0)
    for c in num:
        r *= c + n
    for c in den:
        r /= c + n
    return r


def _pfq_finite(num, den, z, n_terms):
    """Exact finite summation (polynomial case, or brute force)."""
    total = 1.0
    term = 1.0
    for n in range(n_terms):
        term *= _pfq_ratio(num, den, n, z)
        total += term
    return total


def hypergeometric_pfq(spec, rel_tol=1e-12):
    """Evaluate pFq(num; den; z) = sum_n prod(num)_n / prod(den)_n * z^n / n!.

    A numerator parameter at a nonpositive integer -m truncates the series
    exactly at n = m. At unit argument with p = q + 1 the terms decay only
    algebraically, ~ n^{-(1+excess)}; direct summation is then completed with
    an analytic tail estimate and iterated until the total is stable to
    `rel_tol`. Raises ConvergenceError when the series diverges or the term
    budget is exhausted.
    """
    num = spec.numerator_params
    den = spec.denominator_params
    z = spec.argument

    neg_int = [int(-c) for c in num if c <= 0 and c == int(c)]
    if neg_int:
        return _pfq_finite(num, den, z, min(neg_int))
    if z == 0.0:
        return 1.0

    p, q = len(num), len(den)
    if p > q + 1:
        raise ConvergenceError(
            f"{p}F{q} diverges for nonzero argument without polynomial truncation"
        )
    if p == q + 1 and abs(z) >= 1.0:
        if z != 1.0:
            raise ConvergenceError(
                f"{p}F{q} outside the unit disk is not supported (z={z})"
            )
        excess = sum(den) - sum(num)
        if excess <= 0:
            raise ConvergenceError(
                f"parameter excess {excess:.6g} <= 0: series diverges at z=1"
            )
        return _pfq_unit_balanced(num, den, excess, rel_tol)

    # |z| < 1 or p <= q: term ratio eventually < 1, geometric tail bound.
    total = 1.0
    term = 1.0
    for n in range(MAX_PFQ_TERMS):
        ratio = _pfq_ratio(num, den, n, z)
        term *= ratio
        total += term
        r = abs(_pfq_ratio(num, den, n + 1, z))
        if r < 1.0:
            tail = abs(term) * r / (1.0 - r)
            if abs(term) <= rel_tol * abs(total) and tail <= rel_tol * abs(total):
                return total
    raise ConvergenceError(f"no convergence after {MAX_PFQ_TERMS} terms")


def _pfq_unit_balanced(num, den, excess, rel_tol):
    """(q+1)Fq at z = 1: block summation plus algebraic tail acceleration."""
    s_exp = 1.0 + excess
    n_block = 4096
    terms = np.empty(1)
    terms[0] = 1.0
    prev = None
    while terms.size <= MAX_PFQ_TERMS:
        # extend the term array by one dyadic block via cumprod of ratios
        n0 = terms.size
        n = np.arange(n0 - 1, n0 - 1 + n_block, dtype=float)
        ratios = np.full(n_block, 1.0)
        for c in num:
            ratios *= c + n
        for c in den:
            ratios /= c + n
        ratios /= n + 1.0
        block = terms[-1] * np.cumprod(ratios)
        terms = np.concatenate([terms, block])
        n_block = terms.size  # double the block each pass

        n_last = terms.size - 1
        total = float(terms.sum()) + algebraic_tail_estimate(terms, s_exp, n_last)
        if prev is not None and abs(total - prev) <= rel_tol * abs(total):
            return total
        prev = total
    raise ConvergenceError(
        f"no convergence after {MAX_PFQ_TERMS} terms (excess {excess:.3g})"
    )
