"""Six dimension estimates: #Attr, PCA-K, PCA-BS, PCA-CN, SepD and FracD.

The three PCA rules retain principal components by different criteria
(average variance fraction, broken stick, condition number).  SepD inverts
the Fisher-inseparability rate of sphered data against the uniform-sphere
model; FracD is box-counting with a no-intercept log-log regression.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dataset import LabeledDataset
from .spectral import covariance, eigh_descending, sym_eigen

# Bracket for the SepD root search (effective dimension).
_SEPD_LO = 0.1
_SEPD_HI = 10000.0

# Comparisons of variance fractions against thresholds get this slack so
# exactly-uniform spectra behave per the "greater or equal" rule.
_EPS = 1e-12


@dataclass(frozen=True)
class DimensionConfig:
    condition_number: float = 10.0
    separability_alpha: float = 0.8
    box_scales: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.condition_number > 1:
            raise ValueError("condition_number must be > 1")
        if not 0 < self.separability_alpha < 1:
            raise ValueError("separability_alpha must lie in (0, 1)")
        if self.box_scales is not None:
            r = tuple(float(v) for v in self.box_scales)
            if any(v <= 0 for v in r) or any(a <= b for a, b in zip(r, r[1:])):
                raise ValueError("box_scales must be strictly decreasing and positive")
            object.__setattr__(self, "box_scales", r)


@dataclass(frozen=True)
class BoxCountCurve:
    scales: tuple[float, ...]
    counts: tuple[int, ...]


@dataclass(frozen=True)
class DimensionReport:
    n_attr: int
    pca_k: int
    pca_bs: int
    pca_cn: int
    sep_d: float
    frac_d: float


def pca_kaiser(fve) -> int:
    """Number of components with variance fraction >= the average 1/d."""
    f = np.asarray(fve, dtype=float)
    return int(np.sum(f >= 1.0 / f.size - _EPS))


def broken_stick_thresholds(d: int) -> np.ndarray:
    """Expected ordered fragment lengths of a unit stick broken into d parts:
    b_i = (1/d) * sum_{j=i..d} 1/j."""
    if d < 1:
        raise ValueError("d must be >= 1")
    inv = 1.0 / np.arange(1, d + 1)
    return np.cumsum(inv[::-1])[::-1] / d


def pca_broken_stick(fve) -> int:
    """Longest prefix whose variance fractions all clear the broken-stick
    thresholds; 0 when even the first component falls short."""
    f = np.asarray(fve, dtype=float)
    b = broken_stick_thresholds(f.size)
    ok = f >= b - _EPS
    k = 0
    while k < f.size and ok[k]:
        k += 1
    return k


def pca_condition_number(eigenvalues, C: float) -> int:
    """Smallest k >= 1 with lambda_{k+1}/lambda_1 < 1/C (lambda_{d+1} = 0)."""
    w = np.asarray(eigenvalues, dtype=float)
    if not C > 1:
        raise ValueError("C must be > 1")
    if w.size == 0 or not w[0] > 0:
        raise ValueError("zero spectrum")
    for k in range(1, w.size):
        if w[k] / w[0] < 1.0 / C:
            return k
    return w.size


def separability_fraction(X, alpha: float) -> float:
    """Mean inseparability rate: for each point x, the fraction of other
    points y violating (x, y) <= alpha * (x, x), averaged over x.

    Points that are exactly zero after whatever preprocessing the caller
    applied cannot be evaluated and are excluded with a warning.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("need an n x d matrix with n >= 2")
    G = X @ X.T
    norms = np.diag(G).copy()
    valid = norms > 0
    n = X.shape[0]
    n_excluded = int(n - valid.sum())
    if n_excluded:
        warnings.warn(f"excluding {n_excluded} zero points from separability", stacklevel=2)
    if not valid.any():
        raise ValueError("all points are zero; separability undefined")
    viol = G[valid] > alpha * norms[valid, None]
    viol[np.arange(viol.shape[0]), np.flatnonzero(valid)] = False
    return float(viol.sum(axis=1).mean() / (n - 1))


def sphere_inseparability(dim: float, alpha: float) -> float:
    """Analytic inseparability probability for points uniform on the
    dim-sphere: (1 - alpha^2)^((dim+1)/2) / (alpha * sqrt(2*pi*dim))."""
    return (1.0 - alpha * alpha) ** ((dim + 1.0) / 2.0) / (alpha * math.sqrt(2.0 * math.pi * dim))


def invert_sphere_inseparability(p_bar: float, alpha: float) -> float:
    """Dimension whose sphere model yields inseparability p_bar (bisection)."""
    if p_bar <= 0:
        warnings.warn("zero inseparability rate: dimension estimate saturated", stacklevel=2)
        return _SEPD_HI
    if p_bar >= sphere_inseparability(_SEPD_LO, alpha):
        return _SEPD_LO
    if p_bar <= sphere_inseparability(_SEPD_HI, alpha):
        return _SEPD_HI
    lo, hi = _SEPD_LO, _SEPD_HI
    while hi - lo > 1e-6:
        mid = (lo + hi) / 2.0
        if sphere_inseparability(mid, alpha) > p_bar:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def separability_dimension(X, cfg: DimensionConfig = DimensionConfig()) -> float:
    """Fisher-separability dimension estimate.

    Pipeline: center, whiten onto the principal components retained by the
    condition-number rule, project every point to the unit sphere, measure
    the mean inseparability rate at alpha, and invert the uniform-sphere
    model.  Whitening makes the estimate exactly invariant under uniform
    scaling of all dot products (e.g. attribute duplication).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("need an n x d matrix with n >= 2")
    Xc = X - X.mean(axis=0)
    w, V = eigh_descending(covariance(X))
    w = np.clip(w, 0.0, None)
    k = pca_condition_number(w, cfg.condition_number)
    Y = (Xc @ V[:, :k]) / np.sqrt(w[:k])
    lengths = np.linalg.norm(Y, axis=1)
    nz = lengths > 0
    Y = Y[nz] / lengths[nz, None]
    p_bar = separability_fraction(Y, cfg.separability_alpha)
    return invert_sphere_inseparability(p_bar, cfg.separability_alpha)


def _minmax_unit(X: np.ndarray) -> np.ndarray:
    lo = X.min(axis=0)
    span = X.max(axis=0) - lo
    return np.where(span > 0, (X - lo) / np.where(span > 0, span, 1.0), 0.0)


def box_count(X, scales) -> BoxCountCurve:
    """Occupied-cell counts on origin-anchored regular grids of side r.

    The data is min-max normalised onto the unit cube first; a coordinate of
    exactly 1.0 is clamped into the last cell.
    """
    scales = tuple(float(r) for r in scales)
    if not scales:
        raise ValueError("empty scale list")
    if any(not 0 < r <= 1 for r in scales):
        raise ValueError("scales must lie in (0, 1]")
    X = _minmax_unit(np.asarray(X, dtype=float))
    counts = []
    for r in scales:
        ncells = max(1, math.ceil(round(1.0 / r, 12)))
        idx = np.minimum(np.floor(X / r).astype(np.int64), ncells - 1)
        counts.append(int(np.unique(idx, axis=0).shape[0]))
    return BoxCountCurve(scales=scales, counts=tuple(counts))


def _auto_box_scales(X: np.ndarray, n: int) -> tuple[tuple[float, ...], tuple[int, ...]]:
    """Dyadic scales r = 2^-j, j >= 1, collected until the grid saturates
    (N(r) > n/2); at least 3 points are kept when available."""
    scales, counts = [], []
    for j in range(1, 21):
        r = 2.0**-j
        c = box_count(X, [r]).counts[0]
        scales.append(r)
        counts.append(c)
        if c > n / 2 and len(scales) >= 3:
            break
    return tuple(scales), tuple(counts)


def slope_through_origin(xs, ys) -> float:
    """No-intercept least squares slope: sum(x*y) / sum(x*x)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.size < 1:
        raise ValueError("xs and ys must be non-empty and equal length")
    sxx = float(np.sum(xs * xs))
    if not sxx > 0:
        raise ValueError("all xs are zero")
    return float(np.sum(xs * ys) / sxx)


def fractal_dimension(X, cfg: DimensionConfig = DimensionConfig()) -> float:
    """Box-counting dimension: no-intercept slope of log N(r) on log(1/r)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("need an n x d matrix with n >= 2")
    if cfg.box_scales is not None:
        curve = box_count(X, cfg.box_scales)
        pairs = [(r, c) for r, c in zip(curve.scales, curve.counts) if r < 1.0]
    else:
        scales, counts = _auto_box_scales(X, X.shape[0])
        pairs = list(zip(scales, counts))
    if len(pairs) < 2:
        raise ValueError("fewer than 2 usable scale points")
    xs = [math.log(1.0 / r) for r, _ in pairs]
    ys = [math.log(c) for _, c in pairs]
    return slope_through_origin(xs, ys)


def estimate_all(ds: LabeledDataset, cfg: DimensionConfig = DimensionConfig()) -> DimensionReport:
    """Run all six estimators on the feature matrix."""
    X = ds.X
    summary = sym_eigen(covariance(X))
    return DimensionReport(
        n_attr=ds.d,
        pca_k=pca_kaiser(summary.fve),
        pca_bs=pca_broken_stick(summary.fve),
        pca_cn=pca_condition_number(summary.eigenvalues, cfg.condition_number),
        sep_d=separability_dimension(X, cfg),
        frac_d=fractal_dimension(X, cfg),
    )


def pearson_correlation_matrix(columns) -> np.ndarray:
    """Pearson correlations between equal-length value vectors; unit diagonal."""
    cols = [np.asarray(c, dtype=float) for c in columns]
    if len(cols) < 1 or any(c.shape != cols[0].shape for c in cols):
        raise ValueError("columns must be non-empty and equal length")
    if cols[0].size < 2:
        raise ValueError("columns need at least 2 entries")
    M = np.vstack(cols)
    if np.any(M.std(axis=1) == 0):
        raise ValueError("zero-variance column")
    R = np.corrcoef(M)
    np.fill_diagonal(R, 1.0)
    return R
