"""Statistical comparison machinery for the kNN evaluation grid.

Proportion z-test with an adaptive, sample-size-aware significance level,
Friedman test over tied ranks, Nemenyi critical distance, exact / normal
Wilcoxon signed rank, and per-exponent frequency tallies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc
from scipy.stats import rankdata

EXPONENT_PAIR_COUNT = 28  # C(8, 2) pairs of canonical exponents


@dataclass(frozen=True)
class TestOutcome:
    statistic: float
    p_value: float
    alpha: float
    significant: bool


@dataclass(frozen=True)
class RankMatrix:
    """Per-database tied ranks (rows) and per-classifier mean ranks."""

    ranks: np.ndarray
    mean_ranks: np.ndarray


@dataclass(frozen=True)
class FrequencyReport:
    """Per-exponent database tallies: best / worst / insignificantly
    different from the best / from the worst."""

    exponents: tuple[float, ...]
    best: dict[float, int]
    worst: dict[float, int]
    insignificantly_best: dict[float, int]
    insignificantly_worst: dict[float, int]


def normal_cdf(z: float) -> float:
    """Standard normal CDF via erfc; absolute error well below 1e-10."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def chi2_sf(x: float, df: int) -> float:
    """Chi-square survival function (regularised upper incomplete gamma)."""
    if x < 0:
        raise ValueError("x must be >= 0")
    if df < 1:
        raise ValueError("df must be >= 1")
    return float(gammaincc(df / 2.0, x / 2.0))


def proportion_z_test(p1: float, p2: float, n: int, alpha: float) -> TestOutcome:
    """Two-proportion z-test (equal sample sizes, pooled simplified form):
    z = |p1 - p2| / sqrt(((p1 + p2)/n) * (1 - (p1 + p2)/2))."""
    if not (0 <= p1 <= 1 and 0 <= p2 <= 1):
        raise ValueError("proportions must lie in [0, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    pooled = (p1 + p2) / 2.0
    if not 0 < pooled < 1:
        raise ValueError("degenerate pooled proportion")
    z = abs(p1 - p2) / math.sqrt((p1 + p2) / n * (1.0 - pooled))
    p_value = normal_cdf(-z)
    return TestOutcome(statistic=z, p_value=p_value, alpha=alpha, significant=p_value < alpha)


def adaptive_alpha(
    n: int,
    n_pos: int,
    effect: float = 0.01,
    n_comparisons: int = EXPONENT_PAIR_COUNT,
    floor: float = 1e-5,
) -> float:
    """Sample-size-adaptive significance level with a Bonferroni divisor and a
    hard floor: alpha = max(Phi(-(d/s) * sqrt(n/8)) / n_comparisons, floor)
    with d = effect * n and s^2 = n_pos * (n - n_pos) / n.
    """
    if not 0 < n_pos < n:
        raise ValueError("both classes must be non-empty")
    if not effect > 0:
        raise ValueError("effect must be positive")
    d = effect * n
    s = math.sqrt(n_pos * (n - n_pos) / n)
    arg = (d / s) * math.sqrt(n / 8.0)
    return max(normal_cdf(-arg) / n_comparisons, floor)


def tied_ranks(values) -> np.ndarray:
    """Ranks 1..m with ties averaged; larger value, larger rank."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("empty vector")
    return rankdata(v, method="average")


def friedman_test(quality, alpha: float = 0.05) -> tuple[TestOutcome, RankMatrix]:
    """Friedman test over an N x m quality matrix (databases x classifiers).

    chi2_F = 4 N^2 (m-1) (sum R_i^2 - m(m+1)^2/4)
             / (4 sum_ij r_ij^2 - N m (m+1)^2)

    Fully tied data makes the denominator vanish; that carries no evidence
    against the null, so the statistic is 0 and the p-value 1.
    """
    Q = np.asarray(quality, dtype=float)
    if Q.ndim != 2 or Q.shape[0] < 2 or Q.shape[1] < 2:
        raise ValueError("need an N x m matrix with N, m >= 2")
    N, m = Q.shape
    ranks = np.vstack([tied_ranks(row) for row in Q])
    R = ranks.mean(axis=0)
    num = 4.0 * N * N * (m - 1) * (np.sum(R**2) - m * (m + 1) ** 2 / 4.0)
    den = 4.0 * np.sum(ranks**2) - N * m * (m + 1) ** 2
    if abs(den) < 1e-12:
        stat, p_value = 0.0, 1.0
    else:
        stat = float(num / den)
        p_value = chi2_sf(stat, m - 1)
    outcome = TestOutcome(statistic=stat, p_value=p_value, alpha=alpha, significant=p_value < alpha)
    return outcome, RankMatrix(ranks=ranks, mean_ranks=R)


# Two-tailed studentized range quantiles for infinite df divided by sqrt(2),
# for m = 2..20 classifiers (Demsar 2006 convention).
_NEMENYI_Q = {
    0.05: (1.960, 2.344, 2.569, 2.728, 2.850, 2.948, 3.031, 3.102, 3.164,
           3.219, 3.268, 3.313, 3.354, 3.391, 3.426, 3.458, 3.489, 3.517, 3.544),
    0.10: (1.645, 2.052, 2.291, 2.460, 2.589, 2.693, 2.780, 2.855, 2.920,
           2.978, 3.030, 3.077, 3.120, 3.159, 3.196, 3.230, 3.261, 3.291, 3.319),
}


def nemenyi_q(m: int, alpha: float = 0.05) -> float:
    if alpha not in _NEMENYI_Q:
        raise ValueError("alpha must be 0.05 or 0.10")
    if not 2 <= m <= 20:
        raise ValueError("m must lie in [2, 20]")
    return _NEMENYI_Q[alpha][m - 2]


def nemenyi_cd(m: int, N: int, alpha: float = 0.05) -> float:
    """Critical difference of mean ranks: CD = q_{alpha,m} sqrt(m(m+1)/(6N))."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return nemenyi_q(m, alpha) * math.sqrt(m * (m + 1) / (6.0 * N))


def _signed_rank_statistic(diffs: np.ndarray) -> tuple[float, np.ndarray]:
    ranks = rankdata(np.abs(diffs), method="average")
    w_plus = float(ranks[diffs > 0].sum())
    return w_plus, ranks


def _exact_signed_rank_p(w_plus: float, ranks: np.ndarray) -> float:
    # Distribution of W+ over all sign assignments, via integer DP on 2*ranks.
    scaled = np.round(2 * ranks).astype(np.int64)
    total = int(scaled.sum())
    counts = np.zeros(total + 1, dtype=float)
    counts[0] = 1.0
    for r in scaled:
        counts[r:] += counts[: total + 1 - r]
    counts /= counts.sum()
    w2 = int(round(2 * w_plus))
    p_le = counts[: w2 + 1].sum()
    p_ge = counts[w2:].sum()
    return min(1.0, 2.0 * min(p_le, p_ge))


def wilcoxon_signed_rank(a, b, alpha: float = 0.05) -> TestOutcome:
    """Two-sided Wilcoxon signed rank test on paired samples.

    Zero differences are dropped.  The null distribution is exact for up to
    25 effective pairs; larger samples use the normal approximation with tie
    and continuity corrections.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.size < 1:
        raise ValueError("samples must be non-empty and equal length")
    diffs = a - b
    diffs = diffs[diffs != 0]
    n = diffs.size
    if n == 0:
        return TestOutcome(statistic=0.0, p_value=1.0, alpha=alpha, significant=False)
    w_plus, ranks = _signed_rank_statistic(diffs)
    if n <= 25:
        p_value = _exact_signed_rank_p(w_plus, ranks)
    else:
        mu = n * (n + 1) / 4.0
        _, tie_counts = np.unique(ranks, return_counts=True)
        var = n * (n + 1) * (2 * n + 1) / 24.0 - np.sum(tie_counts**3 - tie_counts) / 48.0
        z = max(abs(w_plus - mu) - 0.5, 0.0) / math.sqrt(var)
        p_value = min(1.0, 2.0 * normal_cdf(-z))
    return TestOutcome(statistic=w_plus, p_value=p_value, alpha=alpha, significant=p_value < alpha)


def frequency_report(
    cells: dict[str, dict[float, "QualityCell"]],
    measure: str,
) -> FrequencyReport:
    """Per-exponent best/worst tallies over databases with significance.

    ``cells`` maps database name -> exponent -> cell, where a cell carries
    the measure value as a proportion plus the database sizes.  For TNNSC
    the proportion denominator (and the z-test sample size) is 11n; for
    accuracy it is n.  The adaptive significance level is computed per
    database from its n and n_pos.
    """
    if measure not in ("tnnsc", "accuracy"):
        raise ValueError("measure must be 'tnnsc' or 'accuracy'")
    exponents: tuple[float, ...] | None = None
    best: dict[float, int] = {}
    worst: dict[float, int] = {}
    insig_best: dict[float, int] = {}
    insig_worst: dict[float, int] = {}
    for db, per_p in cells.items():
        ps = tuple(sorted(per_p))
        if exponents is None:
            exponents = ps
            for p in ps:
                best[p] = worst[p] = insig_best[p] = insig_worst[p] = 0
        elif ps != exponents:
            raise ValueError(f"database {db!r} has a different exponent set")
        first = per_p[ps[0]]
        alpha = adaptive_alpha(first.n, first.n_pos)
        n_samples = 11 * first.n if measure == "tnnsc" else first.n
        props = {p: per_p[p].proportion(measure) for p in ps}
        hi = max(props.values())
        lo = min(props.values())
        for p in ps:
            v = props[p]
            if v == hi:
                best[p] += 1
            if v == lo:
                worst[p] += 1
            if v == hi or not proportion_z_test(v, hi, n_samples, alpha).significant:
                insig_best[p] += 1
            if v == lo or not proportion_z_test(v, lo, n_samples, alpha).significant:
                insig_worst[p] += 1
    if exponents is None:
        raise ValueError("no databases given")
    return FrequencyReport(
        exponents=exponents,
        best=best,
        worst=worst,
        insignificantly_best=insig_best,
        insignificantly_worst=insig_worst,
    )


@dataclass(frozen=True)
class QualityCell:
    """Measure values of one (database, exponent) cell, as proportions."""

    tnnsc: int
    accuracy: float
    n: int
    n_pos: int

    def proportion(self, measure: str) -> float:
        if measure == "tnnsc":
            return self.tnnsc / (11 * self.n)
        if measure == "accuracy":
            return self.accuracy
        raise ValueError(f"unknown measure {measure!r}")
