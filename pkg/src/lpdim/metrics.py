"""lp norms/quasinorms and bulk pairwise distance statistics.

The lp functional (sum |x_i|^p)^(1/p) is a norm for p >= 1 and a quasinorm
for 0 < p < 1 (triangle inequality fails).  p = math.inf is handled as a
first-class value (max of absolute coordinates), not a large finite
approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

# Exponents used throughout the experiments.
CANONICAL_EXPONENTS: tuple[float, ...] = (0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 10.0, math.inf)


def _check_exponent(p: float) -> float:
    p = float(p)
    if not p > 0:
        raise ValueError(f"lp exponent must be positive, got {p}")
    return p


def lp_functional(x, p: float) -> float:
    """(sum |x_i|^p)^(1/p) for finite p, max |x_i| for p = inf."""
    p = _check_exponent(p)
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("empty vector")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite coordinates")
    a = np.abs(x)
    m = float(a.max())
    if math.isinf(p) or m == 0.0:
        return m
    if not 1e-16 < m < 1e16:
        # factor out the largest magnitude so extreme coordinates cannot
        # underflow (|v|^10 hits zero below ~1e-31) or overflow
        return m * float(np.sum((a / m) ** p) ** (1.0 / p))
    return float(np.sum(a**p) ** (1.0 / p))


def lp_distance(x, y, p: float) -> float:
    """lp_functional(x - y, p); symmetric, zero iff x == y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    return lp_functional(x - y, p)


def pairwise_distance_matrix(X, p: float) -> np.ndarray:
    """Dense n x n lp distance matrix.  Intended for moderate n."""
    p = _check_exponent(p)
    X = np.asarray(X, dtype=float)
    diff = np.abs(X[:, None, :] - X[None, :, :])
    if math.isinf(p):
        return diff.max(axis=2)
    D = np.sum(diff**p, axis=2)
    if p != 1.0:
        D **= 1.0 / p
    return D


@dataclass(frozen=True)
class DistanceSummary:
    """Exact min/max/mean/population-variance/count over a distance multiset.

    ``rel_sd`` (sd/mean) is carried alongside because for extreme quasinorms
    (p = 0.01 in dimension 200) raw distances reach ~1e230 and the raw
    variance overflows float64 even though the coefficient of variation is
    perfectly well defined.
    """

    count: int
    min: float
    max: float
    mean: float
    variance: float
    rel_sd: float | None = None


# mode codes for the numba kernel; p = 0.5, 4 and 10 get pow-free fast paths
_MODE_GENERIC, _MODE_P1, _MODE_P2, _MODE_INF = 0, 1, 2, 3
_MODE_HALF, _MODE_P4, _MODE_P10 = 4, 5, 6


@njit(parallel=True, cache=True)
def _pair_partials(X, p, mode, scale):
    """Per-row partial statistics over pairs (i, j), j > i.

    Distances are accumulated as (dist/scale - 1) so the shifted second
    moment stays well conditioned; min/max track raw distances.  Each row's
    partial is independent, so the sequential merge afterwards is
    deterministic regardless of thread count.
    """
    n, d = X.shape
    mins = np.full(n, np.inf)
    maxs = np.full(n, -np.inf)
    sums = np.zeros(n)
    sqs = np.zeros(n)
    cnts = np.zeros(n, np.int64)
    for i in prange(n - 1):
        for j in range(i + 1, n):
            if mode == _MODE_P2:
                s = 0.0
                for t in range(d):
                    v = X[i, t] - X[j, t]
                    s += v * v
                dist = math.sqrt(s)
            elif mode == _MODE_P1:
                s = 0.0
                for t in range(d):
                    s += abs(X[i, t] - X[j, t])
                dist = s
            elif mode == _MODE_INF:
                s = 0.0
                for t in range(d):
                    v = abs(X[i, t] - X[j, t])
                    if v > s:
                        s = v
                dist = s
            elif mode == _MODE_HALF:
                s = 0.0
                for t in range(d):
                    s += math.sqrt(abs(X[i, t] - X[j, t]))
                dist = s * s
            elif mode == _MODE_P4:
                s = 0.0
                for t in range(d):
                    v = X[i, t] - X[j, t]
                    v *= v
                    s += v * v
                dist = s**0.25
            elif mode == _MODE_P10:
                s = 0.0
                for t in range(d):
                    v = abs(X[i, t] - X[j, t])
                    v2 = v * v
                    v4 = v2 * v2
                    s += v4 * v4 * v2
                dist = s**0.1
            else:
                s = 0.0
                for t in range(d):
                    v = abs(X[i, t] - X[j, t])
                    if v > 0.0:
                        s += v**p
                dist = s ** (1.0 / p)
            if dist < mins[i]:
                mins[i] = dist
            if dist > maxs[i]:
                maxs[i] = dist
            y = dist / scale - 1.0
            sums[i] += y
            sqs[i] += y * y
            cnts[i] += 1
    return cnts, sums, sqs, mins, maxs


def _mode_for(p: float) -> int:
    if math.isinf(p):
        return _MODE_INF
    if p == 1.0:
        return _MODE_P1
    if p == 2.0:
        return _MODE_P2
    if p == 0.5:
        return _MODE_HALF
    if p == 4.0:
        return _MODE_P4
    if p == 10.0:
        return _MODE_P10
    return _MODE_GENERIC


def pairwise_summary(X, p: float) -> DistanceSummary:
    """Stream min/max/mean/population-variance over all n(n-1)/2 pair distances.

    Never materialises the full distance multiset; the reduction over rows is
    associative and merged in fixed order, so the result does not depend on
    the number of worker threads.
    """
    p = _check_exponent(p)
    X = np.ascontiguousarray(np.asarray(X, dtype=float))
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("need an n x d matrix with n >= 2")

    # Deterministic shift scale: the first pair's distance (1.0 if degenerate).
    scale = lp_distance(X[0], X[1], p)
    if not (math.isfinite(scale) and scale > 0):
        scale = 1.0

    cnts, sums, sqs, mins, maxs = _pair_partials(X, float(p), _mode_for(p), scale)
    count = int(cnts.sum())
    mean_y = float(sums.sum()) / count
    var_y = float(sqs.sum()) / count - mean_y * mean_y
    var_y = max(var_y, 0.0)
    mean = (1.0 + mean_y) * scale
    variance = var_y * scale * scale  # may overflow to inf for extreme p
    rel_sd = math.sqrt(var_y) / (1.0 + mean_y) if mean_y > -1.0 else math.inf
    return DistanceSummary(
        count=count,
        min=float(mins.min()),
        max=float(maxs.max()),
        mean=mean,
        variance=variance,
        rel_sd=rel_sd,
    )
