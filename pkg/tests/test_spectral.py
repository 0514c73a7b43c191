import math

import numpy as np
import pytest

from lpdim.dataset import duplicate_attributes
from lpdim.spectral import covariance, eigh_descending, fve, sym_eigen


def _eigen_2x2_oracle(S):
    # roots of the characteristic polynomial
    a, b, c = S[0, 0], S[0, 1], S[1, 1]
    tr, det = a + c, a * c - b * b
    disc = math.sqrt(max(tr * tr - 4 * det, 0.0))
    return sorted([(tr + disc) / 2, (tr - disc) / 2], reverse=True)


class TestCovariance:
    def test_constant_column_zero(self):
        X = np.column_stack([np.random.default_rng(0).random(10), np.full(10, 3.0)])
        S = covariance(X)
        assert np.all(S[1, :] == 0) and np.all(S[:, 1] == 0)

    def test_two_point_hand_case(self):
        S = covariance(np.array([[1.0], [-1.0]]))
        assert S == pytest.approx(np.array([[1.0]]))

    def test_shape_and_symmetry(self):
        S = covariance(np.random.default_rng(1).random((5, 3)))
        assert S.shape == (3, 3)
        assert np.abs(S - S.T).max() <= 1e-12

    def test_requires_two_rows(self):
        with pytest.raises(ValueError):
            covariance(np.ones((1, 2)))


class TestSymEigen:
    def test_identity(self):
        s = sym_eigen(np.eye(3))
        assert s.eigenvalues == pytest.approx([1, 1, 1])
        assert s.fve == pytest.approx([1 / 3] * 3)

    def test_diagonal(self):
        s = sym_eigen(np.diag([3.0, 1.0, 0.0]))
        assert s.eigenvalues == pytest.approx([3, 1, 0])
        assert s.fve == pytest.approx([0.75, 0.25, 0.0])

    def test_hand_2x2(self):
        s = sym_eigen(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert s.eigenvalues == pytest.approx([3.0, 1.0])

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            sym_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_descending_order_and_residuals(self):
        rng = np.random.default_rng(2)
        A = rng.normal(size=(6, 6))
        S = A @ A.T
        w, V = eigh_descending(S)
        assert np.all(np.diff(w) <= 1e-12)
        norm = np.linalg.norm(S)
        for i in range(6):
            assert np.linalg.norm(S @ V[:, i] - w[i] * V[:, i]) <= 1e-8 * norm

    @pytest.mark.parametrize("seed", range(5))
    def test_2x2_characteristic_polynomial_oracle(self, seed):
        rng = np.random.default_rng(seed)
        A = rng.normal(size=(2, 2))
        S = A @ A.T
        w, _ = eigh_descending(S)
        assert w == pytest.approx(_eigen_2x2_oracle(S), rel=1e-8, abs=1e-10)

    def test_trace_preservation(self):
        rng = np.random.default_rng(3)
        A = rng.normal(size=(8, 8))
        S = A @ A.T
        s = sym_eigen(S)
        assert s.eigenvalues.sum() == pytest.approx(np.trace(S), rel=1e-8)


class TestFve:
    def test_even_split(self):
        assert fve([2.0, 2.0]) == pytest.approx([0.5, 0.5])

    def test_with_zero(self):
        assert fve([3.0, 1.0, 0.0]) == pytest.approx([0.75, 0.25, 0.0])

    def test_single(self):
        assert fve([5.0]) == pytest.approx([1.0])

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError):
            fve([0.0, 0.0])

    def test_sums_to_one(self):
        rng = np.random.default_rng(4)
        w = rng.random(10)
        assert fve(w).sum() == pytest.approx(1.0, abs=1e-9)


class TestDuplicationLaw:
    def test_eigenvalues_double_and_fve_unchanged(self):
        X = np.random.default_rng(5).random((30, 4))
        s1 = sym_eigen(covariance(X))
        s2 = sym_eigen(covariance(duplicate_attributes(X, 2)))
        assert s2.eigenvalues[:4] == pytest.approx(2 * s1.eigenvalues, rel=1e-9)
        assert np.abs(s2.eigenvalues[4:]).max() <= 1e-9 * s1.eigenvalues[0]
        assert s2.fve[:4] == pytest.approx(s1.fve, rel=1e-9, abs=1e-12)
