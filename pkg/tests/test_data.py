import numpy as np
import pytest

from fairsel import data
from fairsel.errors import DataError


def write(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadCsv:
    def test_missing_numeric_cell_gets_sentinel(self, tmp_path):
        p = write(tmp_path, "a,b,label\n1,2,0\n,3,1\n4,5,0\n")
        ds = data.load_csv(p, "label", sentinel=-999.0)
        assert ds.features[1, 0] == -999.0
        assert ds.kinds == ("continuous", "continuous")

    def test_na_token_counts_as_missing(self, tmp_path):
        p = write(tmp_path, "a,label\n1,0\nN/A,1\n2,0\n")
        ds = data.load_csv(p, "label", sentinel=-7.0)
        assert ds.features[1, 0] == -7.0
        assert ds.kinds == ("continuous",)

    def test_categorical_first_appearance_encoding(self, tmp_path):
        p = write(tmp_path, "c,label\nA,0\nB,1\nA,0\n")
        ds = data.load_csv(p, "label")
        assert ds.features[:, 0].tolist() == [0.0, 1.0, 0.0]
        assert ds.kinds == ("categorical",)

    def test_missing_category_gets_sentinel(self, tmp_path):
        p = write(tmp_path, "c,label\nA,0\n,1\nB,0\n")
        ds = data.load_csv(p, "label", sentinel=-1.0)
        assert ds.features[:, 0].tolist() == [0.0, -1.0, 1.0]

    def test_target_not_binary(self, tmp_path):
        p = write(tmp_path, "a,label\n1,0\n2,2\n")
        with pytest.raises(DataError, match="target not binary"):
            data.load_csv(p, "label")

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="no such file"):
            data.load_csv(tmp_path / "nope.csv", "label")

    def test_missing_target_column(self, tmp_path):
        p = write(tmp_path, "a,b\n1,2\n")
        with pytest.raises(DataError, match="target column"):
            data.load_csv(p, "label")

    def test_zero_data_rows(self, tmp_path):
        p = write(tmp_path, "a,label\n")
        with pytest.raises(DataError, match="no data rows"):
            data.load_csv(p, "label")

    def test_target_removed_from_features(self, tmp_path):
        p = write(tmp_path, "a,label,b\n1,0,2\n3,1,4\n")
        ds = data.load_csv(p, "label")
        assert ds.names == ("a", "b")
        assert ds.labels.tolist() == [0, 1]

    def test_reencoding_numeric_is_identity(self, tmp_path, tiny_synth):
        out = tmp_path / "round.csv"
        data.write_csv(tiny_synth, out, target="label")
        back = data.load_csv(out, "label")
        assert back.names == tiny_synth.names
        assert np.array_equal(back.features, tiny_synth.features)
        assert np.array_equal(back.labels, tiny_synth.labels)


class TestSplit:
    def test_deterministic_in_seed(self, tiny_synth):
        a1, b1 = data.split(tiny_synth, 0.3, 7)
        a2, b2 = data.split(tiny_synth, 0.3, 7)
        assert np.array_equal(a1.features, a2.features)
        assert np.array_equal(b1.features, b2.features)

    def test_rounding_rule(self):
        feats = np.arange(10, dtype=float).reshape(10, 1)
        labels = np.array([0, 1] * 5)
        ds = data.Dataset(feats, labels, ("x",), ("continuous",))
        train, valid = data.split(ds, 0.3, 7)
        assert valid.n_rows == 3
        assert train.n_rows == 7

    def test_class_absent_raises(self):
        feats = np.arange(6, dtype=float).reshape(6, 1)
        ds = data.Dataset(feats, np.ones(6, dtype=int), ("x",),
                          ("continuous",))
        with pytest.raises(DataError, match="class absent"):
            data.split(ds, 0.3, 0)

    def test_fraction_bounds(self, tiny_synth):
        for bad in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(DataError):
                data.split(tiny_synth, bad, 0)

    def test_partition_preserves_rows_and_labels(self, tiny_synth):
        rng = np.random.default_rng(0)
        for _ in range(10):
            frac = float(rng.uniform(0.1, 0.9))
            seed = int(rng.integers(0, 1000))
            train, valid = data.split(tiny_synth, frac, seed)
            assert train.n_rows + valid.n_rows == tiny_synth.n_rows
            combined = np.sort(
                np.concatenate((train.labels, valid.labels))
            )
            assert np.array_equal(combined, np.sort(tiny_synth.labels))

    def test_both_classes_in_each_split(self, tiny_synth):
        for seed in range(5):
            train, valid = data.split(tiny_synth, 0.25, seed)
            for part in (train, valid):
                assert set(np.unique(part.labels)) == {0, 1}


class TestStandardize:
    def test_closed_form(self):
        ds = data.Dataset(np.array([[1.0], [2.0], [3.0]]),
                          np.array([0, 1, 0]), ("x",), ("continuous",))
        out, means, stds = data.standardize(ds)
        expect = np.array([-1.2247448713915890, 0.0, 1.2247448713915890])
        assert np.allclose(out.features[:, 0], expect, atol=1e-12)
        assert means[0] == 2.0

    def test_constant_column(self):
        ds = data.Dataset(np.full((3, 1), 5.0), np.array([0, 1, 0]),
                          ("x",), ("continuous",))
        out, _, stds = data.standardize(ds)
        assert np.all(out.features == 0.0)
        assert stds[0] == 1.0

    def test_idempotent(self, tiny_synth):
        once, _, _ = data.standardize(tiny_synth)
        twice, _, _ = data.standardize(once)
        assert np.allclose(once.features, twice.features, atol=1e-9)

    def test_output_moments(self, tiny_synth):
        out, _, _ = data.standardize(tiny_synth)
        assert np.allclose(out.features.mean(axis=0), 0.0, atol=1e-9)
        assert np.allclose(out.features.std(axis=0), 1.0, atol=1e-9)


class TestGenerateSynthetic:
    def test_proxy_correlation_near_target(self):
        spec = data.SyntheticSpec(
            n_rows=5000, n_sensitive=1, n_proxies_per_sensitive=1,
            proxy_correlation=0.9, n_informative=1, n_noise=0, seed=0,
        )
        ds = data.generate_synthetic(spec)
        i = ds.names.index("sens_0")
        j = ds.names.index("proxy_0_0")
        r = np.corrcoef(ds.features[:, i], ds.features[:, j])[0, 1]
        assert abs(r - 0.9) < 0.03

    def test_sensitive_independent_of_label(self):
        spec = data.SyntheticSpec(
            n_rows=5000, n_sensitive=2, n_proxies_per_sensitive=1,
            proxy_correlation=0.8, n_informative=3, n_noise=1, seed=1,
        )
        ds = data.generate_synthetic(spec)
        for i in range(2):
            col = ds.features[:, ds.names.index(f"sens_{i}")]
            r = np.corrcoef(col, ds.labels.astype(float))[0, 1]
            assert abs(r) < 0.05

    def test_deterministic(self):
        spec = data.SyntheticSpec(n_rows=100, seed=9)
        a = data.generate_synthetic(spec)
        b = data.generate_synthetic(spec)
        assert np.array_equal(a.features, b.features)
        assert np.array_equal(a.labels, b.labels)

    def test_proxy_unit_variance(self):
        spec = data.SyntheticSpec(
            n_rows=5000, n_sensitive=2, n_proxies_per_sensitive=2,
            proxy_correlation=0.7, n_informative=1, n_noise=0, seed=2,
        )
        ds = data.generate_synthetic(spec)
        for name in ds.names:
            if name.startswith("proxy_"):
                v = ds.features[:, ds.names.index(name)].var()
                assert abs(v - 1.0) < 0.05

    def test_names_and_kinds(self):
        spec = data.SyntheticSpec(
            n_rows=20, n_sensitive=1, n_proxies_per_sensitive=2,
            proxy_correlation=0.5, n_informative=1, n_noise=1, seed=0,
        )
        ds = data.generate_synthetic(spec)
        assert ds.names == ("sens_0", "proxy_0_0", "proxy_0_1", "info_0",
                            "noise_0")
        assert all(k == "continuous" for k in ds.kinds)

    def test_spec_validation(self):
        with pytest.raises(DataError):
            data.SyntheticSpec(proxy_correlation=1.0)
        with pytest.raises(DataError):
            data.SyntheticSpec(n_rows=5)
        with pytest.raises(DataError):
            data.SyntheticSpec(n_noise=-1)


class TestDataset:
    def test_duplicate_names_rejected(self):
        with pytest.raises(DataError, match="distinct"):
            data.Dataset(np.zeros((2, 2)), np.array([0, 1]), ("a", "a"),
                         ("continuous", "continuous"))

    def test_non_binary_labels_rejected(self):
        with pytest.raises(DataError, match="labels"):
            data.Dataset(np.zeros((2, 1)), np.array([0, 2]), ("a",),
                         ("continuous",))

    def test_row_mismatch_rejected(self):
        with pytest.raises(DataError, match="row mismatch"):
            data.Dataset(np.zeros((3, 1)), np.array([0, 1]), ("a",),
                         ("continuous",))

    def test_arrays_read_only(self, tiny_synth):
        with pytest.raises(ValueError):
            tiny_synth.features[0, 0] = 1.0
