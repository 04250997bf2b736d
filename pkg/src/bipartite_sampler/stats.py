"""Two-sample Kolmogorov-Smirnov and chi-squared uniformity tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float


@dataclass(frozen=True)
class ChiSquaredResult:
    statistic: float
    degrees_of_freedom: int
    p_value: float


def kolmogorov_q(lam: float) -> float:
    """Survival function of the Kolmogorov distribution,
    ``Q(lam) = 2 * sum_{j>=1} (-1)**(j-1) * exp(-2 j**2 lam**2)``.

    The alternating series converges slowly for small ``lam``, so there the
    equivalent theta-function form of the CDF is summed instead.
    """
    if lam <= 0.0:
        return 1.0
    if lam < 1.18:
        # CDF = sqrt(2 pi) / lam * sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 lam^2))
        y = math.exp(-math.pi**2 / (8.0 * lam * lam))
        total = 0.0
        for k in range(1, 101):
            term = y ** ((2 * k - 1) ** 2)
            total += term
            if term <= 1e-17 * total:
                break
        cdf = math.sqrt(2.0 * math.pi) / lam * total
        return min(1.0, max(0.0, 1.0 - cdf))
    total = 0.0
    for j in range(1, 101):
        term = math.exp(-2.0 * j * j * lam * lam)
        total += term if j % 2 else -term
        if term < 1e-17:
            break
    return min(1.0, max(0.0, 2.0 * total))


def ks_statistic(d1, d2) -> float:
    """Largest absolute gap between the two empirical CDFs.

    Both ECDFs are evaluated at every observed value, so tied data is exact.
    """
    a = np.sort(np.asarray(d1, dtype=float))
    b = np.sort(np.asarray(d2, dtype=float))
    if a.size == 0 or b.size == 0:
        raise InvalidInputError("KS test needs two non-empty samples")
    points = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, points, side="right") / a.size
    cdf_b = np.searchsorted(b, points, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


def ks_two_sample(d1, d2) -> KsResult:
    """Two-sided two-sample KS test with the asymptotic Kolmogorov p-value
    ``Q(sqrt(m k / (m + k)) * D)`` (no small-sample correction)."""
    stat = ks_statistic(d1, d2)
    m, k = len(d1), len(d2)
    return KsResult(stat, kolmogorov_q(math.sqrt(m * k / (m + k)) * stat))


def ks_permutation(d1, d2, n_permutations: int = 999, seed: int = 0) -> KsResult:
    """KS statistic with a label-permutation p-value; exact under ties up to Monte Carlo error."""
    a = np.asarray(d1, dtype=float)
    b = np.asarray(d2, dtype=float)
    stat = ks_statistic(a, b)
    pooled = np.concatenate([a, b])
    gen = np.random.Generator(np.random.PCG64(seed))
    hits = 0
    for _ in range(n_permutations):
        perm = gen.permutation(pooled)
        if ks_statistic(perm[: a.size], perm[a.size:]) >= stat - 1e-12:
            hits += 1
    return KsResult(stat, (hits + 1) / (n_permutations + 1))


def _gamma_series(a: float, x: float) -> float:
    # lower regularized P(a, x), valid for x < a + 1
    term = total = 1.0 / a
    ap = a
    for _ in range(10_000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_continued_fraction(a: float, x: float) -> float:
    # upper regularized Q(a, x) by modified Lentz, valid for x >= a + 1
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        d = tiny if abs(d) < tiny else d
        c = b + an / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma ``Q(a, x) = Gamma(a, x) / Gamma(a)``."""
    if a <= 0:
        raise InvalidInputError("shape must be positive")
    if x <= 0:
        return 1.0
    if x < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _gamma_series(a, x)))
    return min(1.0, max(0.0, _gamma_continued_fraction(a, x)))


def chi2_sf(statistic: float, df: int) -> float:
    return regularized_gamma_q(df / 2.0, statistic / 2.0)


def chi_squared_uniformity(counts: Sequence[int]) -> ChiSquaredResult:
    """Pearson chi-squared test that ``counts`` come from a uniform distribution."""
    counts = np.asarray(counts, dtype=float)
    if counts.ndim != 1 or counts.size < 2:
        raise InvalidInputError("need at least two categories")
    if (counts < 0).any():
        raise InvalidInputError("counts must be non-negative")
    total = counts.sum()
    if total <= 0:
        raise InvalidInputError("counts must not all be zero")
    expected = total / counts.size
    stat = float(((counts - expected) ** 2).sum() / expected)
    df = counts.size - 1
    return ChiSquaredResult(stat, df, chi2_sf(stat, df))
