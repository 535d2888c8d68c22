import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pi3nn.data import (
    Dataset,
    NoiseSpec,
    apply_norm,
    cubic_10d,
    denormalize,
    gen_cubic_1d,
    gen_cubic_10d,
    load_csv,
    normalize,
    save_csv,
    split,
    split_indices,
)
from pi3nn.errors import ConfigError, DataError, NormalizationError


def test_load_csv_basic(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("a,b,y\n1,2,3\n4,5,6\n7,8,9\n")
    ds = load_csv(p, "y")
    assert (ds.n, ds.d) == (3, 2)
    assert ds.feature_names == ["a", "b"]
    np.testing.assert_array_equal(ds.y, [3, 6, 9])
    np.testing.assert_array_equal(ds.x[:, 1], [2, 5, 8])
    by_index = load_csv(p, 0)
    assert by_index.feature_names == ["b", "y"]


def test_load_csv_zero_target(tmp_path):
    p = tmp_path / "z.csv"
    p.write_text("x,y\n1,0\n2,0\n3,0\n")
    np.testing.assert_array_equal(load_csv(p, "y").y, [0, 0, 0])


def test_load_csv_errors(tmp_path):
    with pytest.raises(DataError, match="no such file"):
        load_csv(tmp_path / "missing.csv", "y")
    p = tmp_path / "bad.csv"
    p.write_text("a,y\n1,2\n3,oops\n")
    with pytest.raises(DataError, match=r"bad.csv:3.*'oops'.*'y'"):
        load_csv(p, "y")
    with pytest.raises(DataError, match="not in header"):
        load_csv(p, "target")


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    ds = Dataset(rng.normal(size=(100, 3)) * 1e3, rng.normal(size=100) / 7, ["p", "q", "r"])
    save_csv(ds, tmp_path / "r.csv", target_name="t")
    back = load_csv(tmp_path / "r.csv", "t")
    np.testing.assert_array_equal(back.x, ds.x)
    np.testing.assert_array_equal(back.y, ds.y)
    assert back.feature_names == ds.feature_names


def test_dataset_validation():
    with pytest.raises(DataError):
        Dataset([[1.0], [np.inf]], [0.0, 1.0])
    with pytest.raises(DataError):
        Dataset(np.zeros((2, 1)), np.zeros(3))


def test_normalize_unit_column():
    ds = Dataset([[-1.0], [1.0]], [0.0, 2.0])
    nds, stats = normalize(ds)
    np.testing.assert_allclose(nds.x[:, 0], [-1.0, 1.0])
    assert stats.y_mean == 1.0 and stats.y_std == 1.0


def test_normalize_hand_computed():
    ds = Dataset(np.array([[1.0], [2.0], [3.0], [4.0]]), [1.0, 0.0, 0.0, 1.0])
    nds, stats = normalize(ds)
    pop_std = math.sqrt(((1 - 2.5) ** 2 + (2 - 2.5) ** 2 + (3 - 2.5) ** 2 + (4 - 2.5) ** 2) / 4)
    assert stats.x_mean[0] == 2.5
    assert stats.x_std[0] == pytest.approx(pop_std, rel=1e-15)
    np.testing.assert_allclose(nds.x[:, 0], [(v - 2.5) / pop_std for v in (1, 2, 3, 4)], rtol=1e-15)


def test_normalize_constant_column_named():
    ds = Dataset(np.array([[1.0, 5.0], [2.0, 5.0]]), [0.0, 1.0], ["a", "flat"])
    with pytest.raises(NormalizationError, match="'flat'"):
        normalize(ds)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 200), st.integers(1, 5), st.integers(0, 2**31))
def test_normalize_moments_and_inverse(n, d, seed):
    rng = np.random.default_rng(seed)
    ds = Dataset(rng.normal(3, 10, size=(n, d)), rng.normal(-5, 2, size=n))
    nds, stats = normalize(ds)
    assert np.all(np.abs(nds.x.mean(axis=0)) < 1e-10 * n)
    np.testing.assert_allclose(nds.x.std(axis=0), 1.0, rtol=1e-10)
    back = denormalize(nds, stats)
    np.testing.assert_allclose(back.x, ds.x, rtol=1e-12, atol=1e-12 * np.abs(ds.x).max())
    np.testing.assert_allclose(back.y, ds.y, rtol=1e-12, atol=1e-12 * np.abs(ds.y).max())


def test_test_data_uses_training_stats():
    tr = Dataset([[0.0], [2.0]], [0.0, 2.0])
    te = Dataset([[4.0]], [4.0])
    _, stats = normalize(tr)
    assert apply_norm(te, stats).x[0, 0] == 3.0


def test_split_sizes_and_determinism():
    ds = Dataset(np.arange(10.0)[:, None], np.arange(10.0))
    tr, te = split(ds, 0.1, seed=3)
    assert (tr.n, te.n) == (9, 1)
    tr2, te2 = split(ds, 0.1, seed=3)
    np.testing.assert_array_equal(te.x, te2.x)
    with pytest.raises(ConfigError):
        split(ds, 1.0)
    with pytest.raises(ConfigError):
        split(ds, 0.0)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 500), st.floats(0.01, 0.99), st.integers(0, 2**31))
def test_split_partitions(n, frac, seed):
    a, b = split_indices(n, frac, seed)
    assert len(set(a) & set(b)) == 0
    assert sorted(np.concatenate([a, b]).tolist()) == list(range(n))


def test_cubic_1d_default_noise_is_asymmetric():
    assert NoiseSpec.asymmetric().params == {"s_pos": 30.0, "s_neg": 10.0}
    assert NoiseSpec().kind == "asymmetric"


def test_cubic_1d_noiseless_and_ranges():
    tr, te = gen_cubic_1d(200, 300, noise=NoiseSpec.none(), seed=1)
    np.testing.assert_array_equal(tr.y, tr.x[:, 0] ** 3)
    assert tr.x.min() >= -4 and tr.x.max() <= 4
    assert te.x.min() >= -7 and te.x.max() <= 7 and te.n == 300
    with pytest.raises(ConfigError):
        gen_cubic_1d(10, 10, train_range=(1, -1))


def test_cubic_1d_noise_sign_balance():
    tr, _ = gen_cubic_1d(10_000, 1, seed=5)
    eps = tr.y - tr.x[:, 0] ** 3
    assert abs(np.mean(eps > 0) - 0.5) < 0.03
    # the positive side is three times wider
    assert eps[eps > 0].mean() / -eps[eps < 0].mean() == pytest.approx(3.0, rel=0.1)


def test_generators_seeded():
    a = gen_cubic_10d(50, seed=1)
    b = gen_cubic_10d(50, seed=1)
    c = gen_cubic_10d(50, seed=2)
    np.testing.assert_array_equal(a.x, b.x)
    assert not np.array_equal(a.x, c.x)
    d1, _ = gen_cubic_1d(20, 5, seed=1)
    d2, _ = gen_cubic_1d(20, 5, seed=2)
    assert not np.array_equal(d1.y, d2.y)


def test_cubic_10d():
    assert cubic_10d(np.zeros(10)) == 0.0
    assert cubic_10d(np.ones(10)) == pytest.approx(1.0)
    ind = gen_cubic_10d(5000, 0.0, seed=0)
    ood = gen_cubic_10d(1000, 2.0, seed=1)
    assert ind.d == 10 and ood.n == 1000
    assert np.all(np.abs(ind.x.mean(axis=0)) < 0.05)
    assert np.all(np.abs(gen_cubic_10d(5000, 2.0, seed=2).x.mean(axis=0) - 2.0) < 0.05)
    clean = gen_cubic_10d(30, 2.0, seed=3, noise_std=0.0)
    np.testing.assert_allclose(clean.y, (clean.x**3).sum(axis=1) / 10)
