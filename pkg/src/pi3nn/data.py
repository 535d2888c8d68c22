"""Datasets, normalisation, splitting, CSV I/O and the synthetic cubic generators."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError, NormalizationError, ShapeError


@dataclass
class Dataset:
    x: np.ndarray
    y: np.ndarray
    feature_names: list[str] | None = None

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float).reshape(-1)
        if self.x.ndim == 1:
            self.x = self.x[:, None]
        if self.x.ndim != 2:
            raise ShapeError(f"x must be 2-D, got shape {self.x.shape}")
        if self.x.shape[0] != self.y.shape[0]:
            raise ShapeError(f"{self.x.shape[0]} input rows but {self.y.shape[0]} targets")
        if self.x.shape[0] < 1 or self.x.shape[1] < 1:
            raise DataError(f"dataset must have N >= 1 and d >= 1, got {self.x.shape}")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.y))):
            raise DataError("dataset contains NaN or Inf")
        if self.feature_names is not None and len(self.feature_names) != self.x.shape[1]:
            raise ShapeError("feature_names length does not match the number of columns")

    def __len__(self):
        return self.x.shape[0]

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]

    def subset(self, idx) -> Dataset:
        return Dataset(self.x[idx], self.y[idx], self.feature_names)


@dataclass
class NormStats:
    """Per-column population mean/std (ddof = 0) of inputs and targets."""

    x_mean: np.ndarray
    x_std: np.ndarray
    y_mean: float
    y_std: float

    def __post_init__(self):
        self.x_mean = np.asarray(self.x_mean, dtype=float).reshape(-1)
        self.x_std = np.asarray(self.x_std, dtype=float).reshape(-1)
        self.y_mean = float(self.y_mean)
        self.y_std = float(self.y_std)
        if np.any(self.x_std <= 0) or self.y_std <= 0:
            raise NormalizationError("standard deviations must be positive")

    @classmethod
    def identity(cls, d: int) -> NormStats:
        return cls(np.zeros(d), np.ones(d), 0.0, 1.0)

    def transform_x(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x[:, None] if self.x_mean.size == 1 else x[None, :]
        if x.shape[1] != self.x_mean.size:
            raise ShapeError(f"expected {self.x_mean.size} features, got {x.shape[1]}")
        return (x - self.x_mean) / self.x_std

    def transform_y(self, y) -> np.ndarray:
        return (np.asarray(y, dtype=float) - self.y_mean) / self.y_std

    def inverse_x(self, xn) -> np.ndarray:
        return np.asarray(xn, dtype=float) * self.x_std + self.x_mean

    def inverse_y(self, yn) -> np.ndarray:
        return np.asarray(yn, dtype=float) * self.y_std + self.y_mean

    def to_dict(self) -> dict:
        return {
            "x_mean": self.x_mean.tolist(),
            "x_std": self.x_std.tolist(),
            "y_mean": self.y_mean,
            "y_std": self.y_std,
        }

    @classmethod
    def from_dict(cls, d: dict) -> NormStats:
        return cls(d["x_mean"], d["x_std"], d["y_mean"], d["y_std"])


def fit_norm(ds: Dataset) -> NormStats:
    x_std = ds.x.std(axis=0)
    y_std = float(ds.y.std())
    names = ds.feature_names or [f"x{j}" for j in range(ds.d)]
    for j, s in enumerate(x_std):
        if not s > 0:
            raise NormalizationError(f"feature column {names[j]!r} is constant")
    if not y_std > 0:
        raise NormalizationError("target column is constant")
    return NormStats(ds.x.mean(axis=0), x_std, float(ds.y.mean()), y_std)


def apply_norm(ds: Dataset, stats: NormStats) -> Dataset:
    return Dataset(stats.transform_x(ds.x), stats.transform_y(ds.y), ds.feature_names)


def normalize(ds: Dataset) -> tuple[Dataset, NormStats]:
    """Standardise inputs and targets with the dataset's own statistics."""
    stats = fit_norm(ds)
    return apply_norm(ds, stats), stats


def denormalize(ds: Dataset, stats: NormStats) -> Dataset:
    return Dataset(stats.inverse_x(ds.x), stats.inverse_y(ds.y), ds.feature_names)


def split_indices(n: int, test_fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    if not 0 < test_fraction < 1:
        raise ConfigError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    if n < 2:
        raise DataError("need at least 2 rows to split")
    n_test = min(max(int(round(n * test_fraction)), 1), n - 1)
    perm = np.random.default_rng(seed).permutation(n)
    return np.sort(perm[n_test:]), np.sort(perm[:n_test])


def split(ds: Dataset, test_fraction: float = 0.1, seed: int = 0) -> tuple[Dataset, Dataset]:
    """Random train/test split; the default 10% test share mirrors the UCI protocol."""
    train_idx, test_idx = split_indices(ds.n, test_fraction, seed)
    return ds.subset(train_idx), ds.subset(test_idx)


def load_csv(path, target_column: str | int) -> Dataset:
    """Read a headered, comma-separated numeric table.

    ``target_column`` is a header name or a zero-based column index. Every
    other column becomes an input feature, in file order.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path} is empty") from None
        if isinstance(target_column, int):
            if not 0 <= target_column < len(header):
                raise DataError(f"target column index {target_column} out of range")
            t = target_column
        elif target_column in header:
            t = header.index(target_column)
        else:
            raise DataError(f"target column {target_column!r} not in header {header}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} cells, got {len(row)}")
            vals = []
            for name, cell in zip(header, row):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise DataError(
                        f"{path}:{lineno}: non-numeric value {cell!r} in column {name!r}"
                    ) from None
            rows.append(vals)
    if not rows:
        raise DataError(f"{path} has no data rows")
    table = np.array(rows)
    feats = [j for j in range(len(header)) if j != t]
    return Dataset(table[:, feats], table[:, t], [header[j] for j in feats])


def save_csv(ds: Dataset, path, target_name: str = "y") -> None:
    names = ds.feature_names or [f"x{j}" for j in range(ds.d)]
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*names, target_name])
        for xi, yi in zip(ds.x, ds.y):
            w.writerow([repr(float(v)) for v in xi] + [repr(float(yi))])


@dataclass(frozen=True)
class NoiseSpec:
    """Additive target noise.

    ``gaussian`` draws sigma * zeta; ``asymmetric`` draws s(zeta) * zeta with
    s = s_pos for zeta >= 0 and s_neg otherwise; ``none`` is noiseless.
    """

    kind: str = "asymmetric"
    params: dict = field(default_factory=lambda: {"s_pos": 30.0, "s_neg": 10.0})

    def __post_init__(self):
        if self.kind == "gaussian":
            if not self.params.get("sigma", 0) > 0:
                raise ConfigError("gaussian noise needs sigma > 0")
        elif self.kind == "asymmetric":
            if not (self.params.get("s_pos", 0) > 0 and self.params.get("s_neg", 0) > 0):
                raise ConfigError("asymmetric noise needs s_pos > 0 and s_neg > 0")
        elif self.kind != "none":
            raise ConfigError(f"unknown noise kind {self.kind!r}")

    @classmethod
    def gaussian(cls, sigma: float = 1.0) -> NoiseSpec:
        return cls("gaussian", {"sigma": float(sigma)})

    @classmethod
    def asymmetric(cls, s_pos: float = 30.0, s_neg: float = 10.0) -> NoiseSpec:
        return cls("asymmetric", {"s_pos": float(s_pos), "s_neg": float(s_neg)})

    @classmethod
    def none(cls) -> NoiseSpec:
        return cls("none", {})

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == "none":
            return np.zeros(n)
        zeta = rng.standard_normal(n)
        if self.kind == "gaussian":
            return self.params["sigma"] * zeta
        return np.where(zeta >= 0, self.params["s_pos"], self.params["s_neg"]) * zeta


def gen_cubic_1d(
    n_train: int,
    n_test: int,
    train_range=(-4.0, 4.0),
    test_range=(-7.0, 7.0),
    noise: NoiseSpec | None = None,
    seed: int = 0,
) -> tuple[Dataset, Dataset]:
    """y = x**3 + noise with x uniform on each range (default noise: scales 30 above, 10 below)."""
    noise = NoiseSpec.asymmetric() if noise is None else noise
    if n_train < 1 or n_test < 1:
        raise ConfigError("sample counts must be >= 1")
    for lo, hi in (train_range, test_range):
        if not lo < hi:
            raise ConfigError(f"invalid range ({lo}, {hi})")
    rng = np.random.default_rng(seed)
    out = []
    for n, (lo, hi) in ((n_train, train_range), (n_test, test_range)):
        x = rng.uniform(lo, hi, size=n)
        y = x**3 + noise.sample(rng, n)
        out.append(Dataset(x[:, None], y, ["x"]))
    return out[0], out[1]


def cubic_10d(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return (x**3).sum(axis=-1) / 10.0


def gen_cubic_10d(n: int, input_mean: float = 0.0, seed: int = 0, noise_std: float = 1.0) -> Dataset:
    """x ~ N(input_mean, 1) in 10 dims, y = sum(x**3) / 10 + N(0, noise_std**2)."""
    if n < 1:
        raise ConfigError("n must be >= 1")
    if noise_std < 0:
        raise ConfigError("noise_std must be nonnegative")
    rng = np.random.default_rng(seed)
    x = rng.normal(input_mean, 1.0, size=(n, 10))
    y = cubic_10d(x)
    if noise_std > 0:
        y = y + noise_std * rng.standard_normal(n)
    return Dataset(x, y, [f"x{j + 1}" for j in range(10)])
