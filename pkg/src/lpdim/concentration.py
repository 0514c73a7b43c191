"""Relative Contrast and Coefficient of Variation experiments.

RC = (max - min)/min and CV = sd/mean over a set of distances; both vanish
when distances concentrate.  Includes the two synthetic uniform-cube
experiments: the RC_1 vs RC_2 fraction table and the RC/CV sweep over
nested dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import gen_uniform_cube, prefix_dims
from .metrics import DistanceSummary, pairwise_distance_matrix, pairwise_summary

# Two RC values closer than this (relatively) are treated as tied.
_TIE_REL_TOL = 1e-12


class DegenerateDatasetError(ValueError):
    """Zero minimal distance or zero mean distance (duplicate points)."""


@dataclass(frozen=True)
class ConcentrationRecord:
    dimension: int
    p: float
    rc: float
    cv: float


def rc_from_summary(s: DistanceSummary) -> float:
    if not s.min > 0:
        raise DegenerateDatasetError("minimal distance is 0 (duplicate points)")
    return (s.max - s.min) / s.min


def cv_from_summary(s: DistanceSummary) -> float:
    if not s.mean > 0:
        raise DegenerateDatasetError("mean distance is 0")
    if s.rel_sd is not None:
        return s.rel_sd
    return math.sqrt(s.variance) / s.mean


def point_rc(X, y, p: float) -> float:
    """RC of the distances from query point y to every row of X."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.shape[0] < 2:
        raise ValueError("X needs at least 2 rows")
    diff = np.abs(X - y[None, :])
    if math.isinf(p):
        dist = diff.max(axis=1)
    else:
        dist = np.sum(diff**p, axis=1) ** (1.0 / p)
    dmin = dist.min()
    if not dmin > 0:
        raise DegenerateDatasetError("query point duplicates a row of X")
    return float((dist.max() - dmin) / dmin)


def _leave_one_out_rcs(D: np.ndarray) -> np.ndarray:
    """Per-point RC from a full distance matrix, excluding the diagonal."""
    n = D.shape[0]
    off = D + np.where(np.eye(n, dtype=bool), np.inf, 0.0)
    dmin = off.min(axis=1)
    if not np.all(dmin > 0):
        raise DegenerateDatasetError("duplicate rows")
    masked = np.where(np.eye(n, dtype=bool), -np.inf, D)
    dmax = masked.max(axis=1)
    return (dmax - dmin) / dmin


def mean_point_rc(X, p: float) -> float:
    """Average of point_rc over every row against the remaining rows."""
    X = np.asarray(X, dtype=float)
    if X.shape[0] < 3:
        raise ValueError("X needs at least 3 rows")
    D = pairwise_distance_matrix(X, p)
    return float(_leave_one_out_rcs(D).mean())


def rc_comparison_experiment(
    k: int, dims: list[int], reps: int, seed: int
) -> list[tuple[int, float]]:
    """Fraction of repetitions where the mean leave-one-out RC under l1
    strictly exceeds the one under l2, per dimension.

    Each repetition draws k uniform points with 100 coordinates (seeded as
    seed + repetition index) and reuses nested coordinate prefixes across
    dimensions.  RC values equal within 1e-12 relative count as a tie, i.e.
    a failure; this keeps dimension 1, where all lp distances coincide up to
    rounding, at an exact 0.
    """
    if k < 3:
        raise ValueError("k must be >= 3")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    dims = list(dims)
    if any(not 1 <= d <= 100 for d in dims):
        raise ValueError("dims must lie in [1, 100]")
    wins = np.zeros(len(dims), dtype=np.int64)
    for rep in range(reps):
        X = gen_uniform_cube(k, 100, seed + rep)
        for di, d in enumerate(dims):
            Xd = prefix_dims(X, d)
            rc1 = float(_leave_one_out_rcs(pairwise_distance_matrix(Xd, 1.0)).mean())
            rc2 = float(_leave_one_out_rcs(pairwise_distance_matrix(Xd, 2.0)).mean())
            if rc1 > rc2 * (1.0 + _TIE_REL_TOL):
                wins[di] += 1
    return [(d, wins[i] / reps) for i, d in enumerate(dims)]


def concentration_sweep(
    n: int, dims: list[int], ps: list[float], seed: int
) -> list[ConcentrationRecord]:
    """Dataset-level RC/CV over nested prefixes of one generated cube sample."""
    if n < 2:
        raise ValueError("n must be >= 2")
    dims = list(dims)
    ps = list(ps)
    X = gen_uniform_cube(n, max(dims), seed)
    records = []
    for d in dims:
        Xd = np.ascontiguousarray(prefix_dims(X, d))
        for p in ps:
            s = pairwise_summary(Xd, p)
            records.append(
                ConcentrationRecord(
                    dimension=d, p=p, rc=rc_from_summary(s), cv=cv_from_summary(s)
                )
            )
    return records
