"""Dataset loading, validation, preprocessing and synthetic generation.

CSV contract: comma separated, header row required, UTF-8, '.' decimal
point.  Manifests are JSON: one object per dataset with keys ``name``,
``csv_path``, ``label_column``, ``positive_labels``, ``drop_columns``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

PREPROCESS_MODES = ("empty", "standardise", "minmax")


class DatasetError(ValueError):
    """Raised for malformed CSV files or manifests."""


@dataclass(frozen=True)
class LabeledDataset:
    """n x d feature matrix with binary labels (True = positive class)."""

    X: np.ndarray
    labels: np.ndarray
    name: str = ""

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        labels = np.asarray(self.labels, dtype=bool)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("feature matrix must be n x d with n, d >= 1")
        if not np.all(np.isfinite(X)):
            raise ValueError("feature matrix contains non-finite values")
        if labels.shape != (X.shape[0],):
            raise ValueError("labels length must equal number of rows")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def n_pos(self) -> int:
        return int(self.labels.sum())


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    csv_path: str
    label_column: str | int
    positive_labels: frozenset[str]
    drop_columns: frozenset[str] = field(default_factory=frozenset)

    @classmethod
    def from_dict(cls, obj: dict) -> "DatasetManifest":
        try:
            return cls(
                name=str(obj["name"]),
                csv_path=str(obj["csv_path"]),
                label_column=obj["label_column"],
                positive_labels=frozenset(str(v) for v in obj["positive_labels"]),
                drop_columns=frozenset(str(v) for v in obj.get("drop_columns", [])),
            )
        except KeyError as exc:
            raise DatasetError(f"manifest entry missing key {exc}") from exc


def load_manifest(path: str | Path) -> list[DatasetManifest]:
    """Read a manifest file: a JSON array of dataset objects (or one object)."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = [data]
    entries = [DatasetManifest.from_dict(obj) for obj in data]
    if not entries:
        raise DatasetError(f"manifest {path} is empty")
    return entries


def load_csv(manifest: DatasetManifest, base_dir: str | Path | None = None) -> LabeledDataset:
    """Load a labeled dataset per its manifest entry.

    The label column is removed from the features and mapped to positive /
    negative by membership in ``positive_labels``; row order is preserved.
    """
    path = Path(manifest.csv_path)
    if base_dir is not None and not path.is_absolute():
        path = Path(base_dir) / path
    if not path.exists():
        raise DatasetError(f"{manifest.name}: file not found: {path}")

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{manifest.name}: {path} is empty") from None
        rows = list(reader)

    if isinstance(manifest.label_column, int):
        label_idx = manifest.label_column
        if not 0 <= label_idx < len(header):
            raise DatasetError(f"{manifest.name}: label column index {label_idx} out of range")
    else:
        if manifest.label_column not in header:
            raise DatasetError(f"{manifest.name}: label column {manifest.label_column!r} not in header")
        label_idx = header.index(manifest.label_column)

    drop_idx = {i for i, name in enumerate(header) if name in manifest.drop_columns}
    drop_idx.discard(label_idx)
    feat_idx = [i for i in range(len(header)) if i != label_idx and i not in drop_idx]
    if not feat_idx:
        raise DatasetError(f"{manifest.name}: no feature columns left")

    features = np.empty((len(rows), len(feat_idx)), dtype=float)
    raw_labels = []
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise DatasetError(f"{manifest.name}: row {r + 2} has {len(row)} cells, expected {len(header)}")
        for c, i in enumerate(feat_idx):
            cell = row[i].strip()
            if cell == "":
                raise DatasetError(f"{manifest.name}: blank cell at row {r + 2}, column {header[i]!r}")
            try:
                value = float(cell)
            except ValueError:
                raise DatasetError(
                    f"{manifest.name}: unparsable cell {cell!r} at row {r + 2}, column {header[i]!r}"
                ) from None
            if not np.isfinite(value):
                raise DatasetError(f"{manifest.name}: non-finite cell at row {r + 2}, column {header[i]!r}")
            features[r, c] = value
        raw_labels.append(row[label_idx].strip())

    observed = set(raw_labels)
    if not manifest.positive_labels:
        raise DatasetError(f"{manifest.name}: positive_labels is empty")
    if not manifest.positive_labels < observed:
        raise DatasetError(
            f"{manifest.name}: positive_labels {sorted(manifest.positive_labels)} must be a "
            f"strict subset of observed label values {sorted(observed)}"
        )

    labels = np.array([lab in manifest.positive_labels for lab in raw_labels], dtype=bool)
    if labels.all() or not labels.any():
        raise DatasetError(f"{manifest.name}: one of the classes is empty")
    return LabeledDataset(X=features, labels=labels, name=manifest.name)


def preprocess(ds: LabeledDataset, mode: str) -> LabeledDataset:
    """Apply one of the three preprocessing modes to the features.

    ``standardise``: per-column zero mean, unit population variance.
    ``minmax``: per-column rescale onto [0, 1].
    Constant columns map to all-zero under either mode.
    """
    if mode not in PREPROCESS_MODES:
        raise ValueError(f"unknown preprocessing mode {mode!r}")
    if mode == "empty":
        return replace(ds, X=ds.X.copy())
    X = ds.X
    if mode == "standardise":
        mean = X.mean(axis=0)
        sd = X.std(axis=0)  # population sd
        out = np.where(sd > 0, (X - mean) / np.where(sd > 0, sd, 1.0), 0.0)
    else:
        lo = X.min(axis=0)
        hi = X.max(axis=0)
        span = hi - lo
        out = np.where(span > 0, (X - lo) / np.where(span > 0, span, 1.0), 0.0)
    return replace(ds, X=out)


def gen_uniform_cube(n: int, d: int, seed: int) -> np.ndarray:
    """n points with i.i.d. uniform [0, 1) coordinates; deterministic per seed."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    return np.random.default_rng(seed).random((n, d))


def prefix_dims(X: np.ndarray, d_prime: int) -> np.ndarray:
    """First d' columns; the nested lower-dimensional view of X."""
    X = np.asarray(X)
    if not 1 <= d_prime <= X.shape[1]:
        raise ValueError(f"d'={d_prime} out of range [1, {X.shape[1]}]")
    return X[:, :d_prime]


def duplicate_attributes(X: np.ndarray, t: int) -> np.ndarray:
    """Repeat the column block t times (t = total number of copies, t=1 is identity)."""
    if t < 1:
        raise ValueError("t must be >= 1")
    X = np.asarray(X)
    return np.tile(X, (1, t))
