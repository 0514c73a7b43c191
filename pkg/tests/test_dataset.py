import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpdim.dataset import (
    DatasetError,
    DatasetManifest,
    LabeledDataset,
    duplicate_attributes,
    gen_uniform_cube,
    load_csv,
    load_manifest,
    prefix_dims,
    preprocess,
)


def _write_csv(path, text):
    path.write_text(text, encoding="utf-8")


def _manifest(tmp_path, csv_text, **overrides):
    csv_path = tmp_path / "data.csv"
    _write_csv(csv_path, csv_text)
    kwargs = dict(
        name="toy",
        csv_path=str(csv_path),
        label_column="cls",
        positive_labels=frozenset({"1"}),
    )
    kwargs.update(overrides)
    return DatasetManifest(**kwargs)


class TestLoadCsv:
    def test_basic_mapping(self, tmp_path):
        mf = _manifest(tmp_path, "a,b,cls\n1,2,1\n3,4,0\n5,6,1\n")
        ds = load_csv(mf)
        assert ds.d == 2 and ds.n == 3
        assert ds.labels.tolist() == [True, False, True]
        assert ds.X[1].tolist() == [3.0, 4.0]

    def test_blank_cell_named(self, tmp_path):
        mf = _manifest(tmp_path, "a,b,cls\n1,,1\n3,4,0\n")
        with pytest.raises(DatasetError, match="row 2.*'b'"):
            load_csv(mf)

    def test_unparsable_cell_named(self, tmp_path):
        mf = _manifest(tmp_path, "a,b,cls\n1,2,1\n3,oops,0\n")
        with pytest.raises(DatasetError, match="row 3.*'b'"):
            load_csv(mf)

    def test_missing_file(self, tmp_path):
        mf = DatasetManifest(
            name="gone",
            csv_path=str(tmp_path / "nope.csv"),
            label_column="cls",
            positive_labels=frozenset({"1"}),
        )
        with pytest.raises(DatasetError, match="not found"):
            load_csv(mf)

    def test_empty_class_rejected(self, tmp_path):
        mf = _manifest(tmp_path, "a,b,cls\n1,2,1\n3,4,1\n")
        with pytest.raises(DatasetError):
            load_csv(mf)

    def test_positive_labels_must_be_strict_subset(self, tmp_path):
        mf = _manifest(tmp_path, "a,b,cls\n1,2,1\n3,4,0\n", positive_labels=frozenset({"2"}))
        with pytest.raises(DatasetError, match="strict subset"):
            load_csv(mf)

    def test_drop_columns(self, tmp_path):
        mf = _manifest(tmp_path, "id,a,cls\n9,1,1\n8,2,0\n", drop_columns=frozenset({"id"}))
        ds = load_csv(mf)
        assert ds.d == 1
        assert ds.X[:, 0].tolist() == [1.0, 2.0]

    def test_label_column_by_index(self, tmp_path):
        mf = _manifest(tmp_path, "cls,a\n1,7\n0,8\n", label_column=0)
        ds = load_csv(mf)
        assert ds.labels.tolist() == [True, False]


class TestManifestFile:
    def test_round_trip(self, tmp_path):
        csv_path = tmp_path / "d.csv"
        _write_csv(csv_path, "a,cls\n1,1\n2,0\n")
        manifest_path = tmp_path / "manifest.json"
        manifest_path.write_text(
            '[{"name": "d", "csv_path": "d.csv", "label_column": "cls",'
            ' "positive_labels": ["1"], "drop_columns": []}]'
        )
        entries = load_manifest(manifest_path)
        assert entries[0].name == "d"
        ds = load_csv(entries[0], base_dir=tmp_path)
        assert ds.n == 2


class TestPreprocess:
    def _ds(self, X):
        X = np.asarray(X, dtype=float)
        labels = np.zeros(X.shape[0], dtype=bool)
        labels[0] = True
        return LabeledDataset(X=X, labels=labels, name="t")

    def test_minmax_column(self):
        ds = preprocess(self._ds([[2], [4], [6]]), "minmax")
        assert ds.X[:, 0].tolist() == [0.0, 0.5, 1.0]

    def test_standardise_column(self):
        ds = preprocess(self._ds([[1], [2], [3]]), "standardise")
        assert ds.X[:, 0] == pytest.approx([-1.2247, 0.0, 1.2247], abs=1e-4)

    @pytest.mark.parametrize("mode", ["standardise", "minmax"])
    def test_constant_column_goes_to_zero(self, mode):
        ds = preprocess(self._ds([[5], [5], [5]]), mode)
        assert ds.X[:, 0].tolist() == [0.0, 0.0, 0.0]

    def test_empty_is_identity(self):
        src = self._ds([[1.5], [2.5]])
        ds = preprocess(src, "empty")
        assert np.array_equal(ds.X, src.X)

    def test_standardise_moments(self):
        X = np.random.default_rng(0).random((40, 3)) * 7 + 2
        ds = preprocess(self._ds(X), "standardise")
        assert np.abs(ds.X.mean(axis=0)).max() < 1e-9
        assert np.abs(ds.X.var(axis=0) - 1).max() < 1e-9

    @pytest.mark.parametrize("mode", ["standardise", "minmax"])
    def test_idempotent(self, mode):
        ds = self._ds(np.random.default_rng(1).random((20, 4)))
        once = preprocess(ds, mode)
        twice = preprocess(once, mode)
        assert np.abs(twice.X - once.X).max() < 1e-9

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            preprocess(self._ds([[1], [2]]), "whiten")


class TestSynthetic:
    def test_cube_deterministic(self):
        a = gen_uniform_cube(5, 3, 7)
        b = gen_uniform_cube(5, 3, 7)
        assert np.array_equal(a, b)

    def test_cube_range_and_shape(self):
        X = gen_uniform_cube(200, 20, 3)
        assert X.shape == (200, 20)
        assert X.min() >= 0.0 and X.max() < 1.0

    def test_single_cell(self):
        X = gen_uniform_cube(1, 1, 0)
        assert X.shape == (1, 1) and 0 <= X[0, 0] < 1

    def test_prefix_identity(self):
        X = gen_uniform_cube(10, 8, 0)
        assert np.array_equal(prefix_dims(X, 8), X)

    def test_prefix_first_column(self):
        X = gen_uniform_cube(10, 8, 0)
        assert np.array_equal(prefix_dims(X, 1), X[:, :1])

    def test_prefix_out_of_range(self):
        X = gen_uniform_cube(10, 8, 0)
        with pytest.raises(ValueError):
            prefix_dims(X, 0)

    @given(st.integers(min_value=1, max_value=8), st.integers(min_value=1, max_value=8))
    @settings(max_examples=30)
    def test_prefix_composition(self, a, b):
        lo, hi = sorted((a, b))
        X = gen_uniform_cube(6, 8, 1)
        assert np.array_equal(prefix_dims(prefix_dims(X, hi), lo), prefix_dims(X, lo))


class TestDuplicateAttributes:
    def test_identity(self):
        X = np.array([[1.0, 2.0]])
        assert np.array_equal(duplicate_attributes(X, 1), X)

    def test_two_copies(self):
        assert duplicate_attributes(np.array([[1.0, 2.0]]), 2).tolist() == [[1, 2, 1, 2]]

    def test_dot_products_scale(self):
        X = np.random.default_rng(2).random((20, 5))
        X3 = duplicate_attributes(X, 3)
        assert np.allclose(X3 @ X3.T, 3 * (X @ X.T), rtol=1e-12)
