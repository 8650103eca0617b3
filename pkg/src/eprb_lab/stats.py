"""Estimators and hypothesis tests for sampled joint-outcome counts.

Counts live in :class:`CountTable` (same ++, +-, -+, -- cell order as
everything else). Frequencies, correlation estimates, Pearson chi-square
goodness-of-fit and homogeneity tests, CHSH combinations with propagated
errors, and Wilson score intervals are all pure functions.

The chi-square p-value is computed in-package from the regularized
incomplete gamma function (series expansion below a+1, modified-Lentz
continued fraction above), accurate to better than 1e-10 relative for the
degrees of freedom used here; no external statistics dependency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quantum import JointDistribution

_EPS = 1e-15
_MAX_ITER = 600


@dataclass(frozen=True)
class CountTable:
    """Nonnegative outcome counts in the fixed cell order ++, +-, -+, --."""

    n_pp: int
    n_pm: int
    n_mp: int
    n_mm: int

    def __post_init__(self) -> None:
        for n in self.as_tuple():
            if n < 0 or n != int(n):
                raise ValueError(f"counts must be nonnegative integers, got {n!r}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n_pp, self.n_pm, self.n_mp, self.n_mm)

    @property
    def total(self) -> int:
        return self.n_pp + self.n_pm + self.n_mp + self.n_mm

    @classmethod
    def from_sequence(cls, counts) -> "CountTable":
        a, b, c, d = (int(x) for x in counts)
        return cls(a, b, c, d)


def _require_samples(counts: CountTable) -> int:
    n = counts.total
    if n < 1:
        raise ValueError("count table must contain at least one sample")
    return n


def empirical_distribution(counts: CountTable) -> JointDistribution:
    """Cell frequencies n/N as an (empirical) JointDistribution."""
    n = _require_samples(counts)
    c = counts.as_tuple()
    return JointDistribution(
        p_pp=c[0] / n, p_pm=c[1] / n, p_mp=c[2] / n, p_mm=c[3] / n, theoretical=False
    )


def empirical_correlation(counts: CountTable) -> tuple[float, float]:
    """Estimate (E_hat, std_error) of the outcome-product mean.

    E_hat = (n_pp + n_mm - n_pm - n_mp)/N; the standard error is the
    binomial-derived sqrt((1 - E_hat^2)/N).
    """
    n = _require_samples(counts)
    e = (counts.n_pp + counts.n_mm - counts.n_pm - counts.n_mp) / n
    return e, math.sqrt(max(0.0, 1.0 - e * e) / n)


def _gamma_p_series(a: float, x: float) -> float:
    # regularized lower gamma P(a, x) by series, valid for x < a + 1
    term = 1.0 / a
    total = term
    k = a
    for _ in range(_MAX_ITER):
        k += 1.0
        term *= x / k
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a: float, x: float) -> float:
    # regularized upper gamma Q(a, x) by modified-Lentz continued fraction,
    # valid for x >= a + 1
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def chi_square_sf(statistic: float, dof: int) -> float:
    """Survival function P(X >= statistic) of the chi-square distribution.

    Implemented via the regularized incomplete gamma function with
    a = dof/2, x = statistic/2.
    """
    if dof < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {dof!r}")
    if statistic < 0:
        raise ValueError(f"statistic must be >= 0, got {statistic!r}")
    if statistic == 0.0:
        return 1.0
    if math.isinf(statistic):
        return 0.0
    a = 0.5 * dof
    x = 0.5 * statistic
    if x < a + 1.0:
        q = 1.0 - _gamma_p_series(a, x)
    else:
        q = _gamma_q_contfrac(a, x)
    return min(1.0, max(0.0, q))


def chi_square_gof(
    counts: CountTable, expected: JointDistribution
) -> tuple[float, float]:
    """Pearson goodness-of-fit of counts against an expected distribution.

    Cells with expected probability 0 and observed count 0 contribute
    nothing and are excluded from the degrees of freedom; an observed count
    in a zero-probability cell yields (inf, 0.0). Degrees of freedom are
    (number of cells with expected probability > 0) - 1.
    """
    n = _require_samples(counts)
    stat = 0.0
    dof = -1
    for obs, p in zip(counts.as_tuple(), expected.as_tuple()):
        if p == 0.0:
            if obs > 0:
                return math.inf, 0.0
            continue
        dof += 1
        exp_count = p * n
        stat += (obs - exp_count) ** 2 / exp_count
    if dof < 1:
        # single positive cell: observed mass is forced, fit is exact
        return 0.0, 1.0
    return stat, chi_square_sf(stat, dof)


def chi_square_two_sample(a: CountTable, b: CountTable) -> tuple[float, float]:
    """Pearson homogeneity test: were the two count tables drawn alike?

    Cells empty in both samples are dropped; degrees of freedom are
    (number of kept cells) - 1.
    """
    n_a = _require_samples(a)
    n_b = _require_samples(b)
    total = n_a + n_b
    stat = 0.0
    dof = -1
    for obs_a, obs_b in zip(a.as_tuple(), b.as_tuple()):
        pooled = obs_a + obs_b
        if pooled == 0:
            continue
        dof += 1
        exp_a = n_a * pooled / total
        exp_b = n_b * pooled / total
        stat += (obs_a - exp_a) ** 2 / exp_a + (obs_b - exp_b) ** 2 / exp_b
    if dof < 1:
        return 0.0, 1.0
    return stat, chi_square_sf(stat, dof)


@dataclass(frozen=True)
class ChshEstimate:
    """A CHSH value with its standard error and the four angles it used."""

    s_value: float
    std_error: float
    angles: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if abs(self.s_value) > 4.0 + 1e-9:
            raise ValueError(f"|S| cannot exceed 4, got {self.s_value!r}")
        if self.std_error < 0.0:
            raise ValueError("standard error must be nonnegative")


def chsh_value(
    e_ab: tuple[float, float],
    e_ab_prime: tuple[float, float],
    e_a_prime_b: tuple[float, float],
    e_a_prime_b_prime: tuple[float, float],
    angles: tuple[float, float, float, float],
) -> ChshEstimate:
    """Combine four (correlation, std_error) pairs into a CHSH estimate.

    S = E(a,b) - E(a,b') + E(a',b) + E(a',b'); the error is the
    root-sum-square of the four input errors.
    """
    values = (e_ab, e_ab_prime, e_a_prime_b, e_a_prime_b_prime)
    for e, err in values:
        if abs(e) > 1.0:
            raise ValueError(f"correlation out of range [-1, 1]: {e!r}")
        if err < 0.0:
            raise ValueError(f"standard error must be nonnegative, got {err!r}")
    s = e_ab[0] - e_ab_prime[0] + e_a_prime_b[0] + e_a_prime_b_prime[0]
    err = math.sqrt(sum(e[1] ** 2 for e in values))
    return ChshEstimate(s_value=s, std_error=err, angles=angles)


def wilson_interval(k: int, n: int, z: float) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Requires 0 <= k <= n, n >= 1, z > 0; always contains k/n and stays
    inside [0, 1].
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    if not 0 <= k <= n:
        raise ValueError(f"k must be in [0, n], got k={k!r}, n={n!r}")
    if not z > 0:
        raise ValueError(f"z must be > 0, got {z!r}")
    p_hat = k / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p_hat + z2 / (2.0 * n)) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom
    # at k = 0 (k = n) the bound is exactly 0 (1); avoid rounding past p_hat
    lo = 0.0 if k == 0 else max(0.0, center - half)
    hi = 1.0 if k == n else min(1.0, center + half)
    return lo, hi
