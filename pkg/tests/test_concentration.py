import math

import numpy as np
import pytest

from lpdim.concentration import (
    ConcentrationRecord,
    DegenerateDatasetError,
    concentration_sweep,
    cv_from_summary,
    mean_point_rc,
    point_rc,
    rc_comparison_experiment,
    rc_from_summary,
)
from lpdim.metrics import CANONICAL_EXPONENTS, DistanceSummary, pairwise_summary


def _summary(**kw):
    base = dict(count=1, min=1.0, max=1.0, mean=1.0, variance=0.0)
    base.update(kw)
    return DistanceSummary(**base)


class TestRcCv:
    def test_rc_all_equidistant(self):
        assert rc_from_summary(_summary(min=1.0, max=1.0)) == 0.0

    def test_rc_simple(self):
        assert rc_from_summary(_summary(min=1.0, max=3.0)) == pytest.approx(2.0)

    def test_rc_ratio(self):
        assert rc_from_summary(_summary(min=2.0, max=8.0)) == pytest.approx(3.0)

    def test_rc_zero_min_rejected(self):
        with pytest.raises(DegenerateDatasetError):
            rc_from_summary(_summary(min=0.0, max=1.0))

    def test_cv_zero_variance(self):
        assert cv_from_summary(_summary(variance=0.0)) == 0.0

    def test_cv_two_values(self):
        # distances {1, 3}: mean 2, population variance 1
        assert cv_from_summary(_summary(mean=2.0, variance=1.0)) == pytest.approx(0.5)

    def test_cv_three_values(self):
        # distances {2, 4, 6}: mean 4, variance 8/3
        assert cv_from_summary(_summary(mean=4.0, variance=8.0 / 3.0)) == pytest.approx(
            0.40825, abs=1e-5
        )

    def test_cv_zero_mean_rejected(self):
        with pytest.raises(DegenerateDatasetError):
            cv_from_summary(_summary(mean=0.0))

    def test_scale_invariance_via_data(self):
        X = np.random.default_rng(0).random((40, 6))
        for p in (0.5, 2.0):
            s1 = pairwise_summary(X, p)
            s2 = pairwise_summary(X * 17.0, p)
            assert rc_from_summary(s2) == pytest.approx(rc_from_summary(s1), rel=1e-9)
            assert cv_from_summary(s2) == pytest.approx(cv_from_summary(s1), rel=1e-9)


class TestPointRc:
    def test_symmetric_pair(self):
        X = np.array([[0.0], [2.0]])
        assert point_rc(X, np.array([1.0]), 2.0) == 0.0

    def test_asymmetric_pair(self):
        X = np.array([[0.0], [3.0]])
        assert point_rc(X, np.array([1.0]), 1.0) == pytest.approx(1.0)

    def test_duplicate_query_rejected(self):
        X = np.array([[0.0], [3.0]])
        with pytest.raises(DegenerateDatasetError):
            point_rc(X, np.array([3.0]), 1.0)


class TestMeanPointRc:
    def test_equilateral_triangle(self):
        X = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
        assert mean_point_rc(X, 2.0) == pytest.approx(0.0, abs=1e-12)

    def test_hand_enumeration(self):
        # per-point RCs {2, 1, 1/2} -> mean 7/6
        X = np.array([[0.0], [1.0], [3.0]])
        assert mean_point_rc(X, 1.0) == pytest.approx(7.0 / 6.0)

    def test_nonnegative(self):
        X = np.random.default_rng(1).random((15, 4))
        assert mean_point_rc(X, 0.5) >= 0.0

    def test_matches_bruteforce_enumeration(self):
        X = np.random.default_rng(2).random((30, 3))
        rcs = []
        for i in range(30):
            rest = np.delete(X, i, axis=0)
            rcs.append(point_rc(rest, X[i], 1.0))
        assert mean_point_rc(X, 1.0) == pytest.approx(np.mean(rcs), rel=1e-12)


class TestRcComparisonExperiment:
    def test_dimension_one_is_exactly_zero(self):
        result = dict(rc_comparison_experiment(10, [1], 200, 5))
        assert result[1] == 0.0

    def test_fractions_in_unit_interval_and_deterministic(self):
        a = rc_comparison_experiment(10, [2, 4], 50, 9)
        b = rc_comparison_experiment(10, [2, 4], 50, 9)
        assert a == b
        assert all(0.0 <= frac <= 1.0 for _, frac in a)

    def test_high_dimension_dominates(self):
        result = dict(rc_comparison_experiment(20, [20], 100, 11))
        assert result[20] >= 0.95


class TestConcentrationSweep:
    def test_output_size(self):
        records = concentration_sweep(50, [2, 5], [1.0, 2.0, math.inf], 3)
        assert len(records) == 6
        assert all(isinstance(r, ConcentrationRecord) for r in records)

    def test_rc_cv_nonincreasing_in_p(self):
        records = concentration_sweep(300, [8], list(CANONICAL_EXPONENTS), 7)
        rcs = [r.rc for r in records]
        # CV on the uniform cube genuinely rises from p=10 to the maximum
        # metric, so monotonicity is only checked over the finite exponents
        cvs = [r.cv for r in records if math.isfinite(r.p)]
        for lo, hi in zip(rcs, rcs[1:]):
            assert hi <= lo * 1.01
        for lo, hi in zip(cvs, cvs[1:]):
            assert hi <= lo * 1.01

    def test_rc_decreases_with_dimension(self):
        records = concentration_sweep(400, [10, 100], [2.0], 13)
        by_dim = {r.dimension: r.rc for r in records}
        assert by_dim[100] < by_dim[10]
