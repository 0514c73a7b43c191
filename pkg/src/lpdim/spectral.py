"""Covariance, symmetric eigendecomposition and fraction of variance explained.

Shared substrate for the PCA-based dimension estimators.  The covariance is
column-centered and divided by n; the three PCA retention rules only use
eigenvalue ratios, so they are unaffected by the scale convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpectralSummary:
    """Descending eigenvalues and their variance fractions."""

    eigenvalues: np.ndarray
    fve: np.ndarray


def covariance(X) -> np.ndarray:
    """Centered covariance matrix, population convention (divide by n)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("need an n x d matrix with n >= 2")
    Xc = X - X.mean(axis=0)
    S = Xc.T @ Xc / X.shape[0]
    return (S + S.T) / 2.0


def _check_symmetric(S: np.ndarray) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(1.0, float(np.abs(S).max()))
    if np.abs(S - S.T).max() > 1e-9 * scale:
        raise ValueError("matrix is not symmetric")
    return S


def eigh_descending(S) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching eigenvector columns."""
    S = _check_symmetric(S)
    w, V = np.linalg.eigh(S)
    order = np.argsort(w)[::-1]
    return w[order], V[:, order]


def sym_eigen(S) -> SpectralSummary:
    """Spectral summary of a symmetric matrix with non-negative spectrum.

    Round-off eigenvalues slightly below zero are clamped; anything clearly
    negative indicates the input was not a covariance matrix.
    """
    w, _ = eigh_descending(S)
    scale = max(1.0, float(np.abs(w).max()))
    tol = 1e-9 * scale
    if w.min() < -tol:
        raise ValueError(f"eigenvalue {w.min():g} below -{tol:g}; matrix is not PSD")
    w = np.clip(w, 0.0, None)
    return SpectralSummary(eigenvalues=w, fve=fve(w))


def fve(eigenvalues) -> np.ndarray:
    """Fractions of total variance, order preserved."""
    w = np.asarray(eigenvalues, dtype=float)
    if np.any(w < 0):
        raise ValueError("eigenvalues must be non-negative")
    total = w.sum()
    if not total > 0:
        raise ValueError("all-zero spectrum")
    return w / total
