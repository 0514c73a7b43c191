"""k-nearest-neighbour evaluation under arbitrary lp dissimilarity.

Neighbour search is a per-query linear scan: quasinorms (p < 1) violate the
triangle inequality, so index structures that rely on it are not usable.
All quality measures are leave-one-out over the full dataset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict, replace

import numpy as np

from .dataset import LabeledDataset, preprocess
from .metrics import _check_exponent

_QUERY_BLOCK = 256


@dataclass(frozen=True)
class KnnConfig:
    k: int = 11
    p: float = 2.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        _check_exponent(self.p)


@dataclass(frozen=True)
class QualityRecord:
    """Leave-one-out quality of one (dataset, preprocessing, p) cell."""

    dataset: str
    preprocessing: str
    p: float
    tnnsc: int
    accuracy: float
    sensitivity: float
    specificity: float
    n: int
    n_pos: int

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p"] = "inf" if math.isinf(self.p) else self.p
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "QualityRecord":
        d = dict(d)
        d["p"] = math.inf if d["p"] == "inf" else float(d["p"])
        return cls(**d)


def _ranking_keys(block: np.ndarray, X: np.ndarray, p: float) -> np.ndarray:
    """Monotone neighbour-ranking keys from each block row to every row of X
    (the 1/p root is omitted; it does not change the ordering or ties)."""
    diff = np.abs(block[:, None, :] - X[None, :, :])
    if math.isinf(p):
        return diff.max(axis=2)
    return np.sum(diff**p, axis=2)


def knn_indices(X, query_row: int, k: int, p: float) -> list[int]:
    """Indices of the k rows nearest to the query row, self excluded.

    Duplicates rank first at distance 0; distance ties break by ascending
    row index so results are deterministic.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} out of range [1, {n - 1}]")
    keys = _ranking_keys(X[query_row : query_row + 1], X, p)[0]
    keys[query_row] = np.inf
    order = np.argsort(keys, kind="stable")
    return [int(i) for i in order[:k]]


def loo_evaluate(ds: LabeledDataset, cfg: KnnConfig) -> QualityRecord:
    """Leave-one-out kNN quality: TNNSC, accuracy, sensitivity, specificity."""
    n = ds.n
    n_pos = ds.n_pos
    if n_pos == 0 or n_pos == n:
        raise ValueError("both classes must be non-empty")
    if n <= cfg.k:
        raise ValueError(f"need n > k, got n={n}, k={cfg.k}")

    X = ds.X
    labels = ds.labels
    tnnsc = 0
    correct_pos = 0
    correct_neg = 0
    for start in range(0, n, _QUERY_BLOCK):
        stop = min(start + _QUERY_BLOCK, n)
        keys = _ranking_keys(X[start:stop], X, cfg.p)
        rows = np.arange(start, stop)
        keys[rows - start, rows] = np.inf
        order = np.argsort(keys, axis=1, kind="stable")[:, : cfg.k]
        neigh_pos = labels[order].sum(axis=1)
        tnnsc += int(np.where(labels[rows], neigh_pos, cfg.k - neigh_pos).sum())
        predicted = neigh_pos * 2 > cfg.k
        correct = predicted == labels[rows]
        correct_pos += int(correct[labels[rows]].sum())
        correct_neg += int(correct[~labels[rows]].sum())

    return QualityRecord(
        dataset=ds.name,
        preprocessing="empty",
        p=cfg.p,
        tnnsc=tnnsc,
        accuracy=(correct_pos + correct_neg) / n,
        sensitivity=correct_pos / n_pos,
        specificity=correct_neg / (n - n_pos),
        n=n,
        n_pos=n_pos,
    )


def evaluate_grid(
    ds: LabeledDataset, ps, modes, k: int = 11
) -> list[QualityRecord]:
    """One QualityRecord per (preprocessing mode, exponent)."""
    records = []
    for mode in modes:
        prepared = preprocess(ds, mode)
        for p in ps:
            rec = loo_evaluate(prepared, KnnConfig(k=k, p=p))
            records.append(replace(rec, preprocessing=mode))
    return records
