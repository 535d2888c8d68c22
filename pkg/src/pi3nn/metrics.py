"""Coverage and width metrics for prediction intervals."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, ShapeError

QUANTILE_LEVELS = (0.05, 0.25, 0.5, 0.75, 0.95)


@dataclass(frozen=True)
class CoverageReport:
    gamma: float
    picp: float
    mpiw: float
    n: int


@dataclass
class WidthDistribution:
    widths: np.ndarray
    mean: float
    std: float
    quantiles: dict[float, float]
    bin_edges: np.ndarray
    counts: np.ndarray

    @property
    def n(self) -> int:
        return self.widths.size

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "std": self.std,
            "quantiles": {repr(q): v for q, v in self.quantiles.items()},
            "bin_edges": self.bin_edges.tolist(),
            "counts": self.counts.tolist(),
        }

    def histogram_to_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["bin_left", "bin_right", "count"])
            for left, right, c in zip(self.bin_edges[:-1], self.bin_edges[1:], self.counts):
                w.writerow([repr(float(left)), repr(float(right)), int(c)])


@dataclass(frozen=True)
class SeparationReport:
    mean_ratio: float
    overlap: float
    separated: bool
    threshold: float

    def to_dict(self) -> dict:
        return asdict(self)


def _bounds(band=None, lower=None, upper=None):
    if band is not None:
        lower, upper = band.lower, band.upper
    return np.asarray(lower, dtype=float), np.asarray(upper, dtype=float)


def picp(band, y) -> float:
    """Fraction of targets with lower <= y <= upper."""
    lower, upper = _bounds(band)
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != lower.size:
        raise ShapeError(f"{y.size} targets for a band of {lower.size} points")
    if y.size == 0:
        raise DataError("picp of an empty band")
    return float(np.mean((lower <= y) & (y <= upper)))


def mpiw(band) -> float:
    w = np.asarray(band.width, dtype=float)
    if w.size == 0:
        raise DataError("mpiw of an empty band")
    return float(np.mean(w))


def coverage_report(band, y) -> CoverageReport:
    return CoverageReport(float(band.gamma), picp(band, y), mpiw(band), int(len(band.width)))


def width_distribution(band_or_widths, bins: int = 30) -> WidthDistribution:
    """Summary statistics and histogram of interval widths.

    Accepts a band or a raw width array. Quantiles interpolate linearly
    between order statistics.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    w = getattr(band_or_widths, "width", band_or_widths)
    w = np.sort(np.asarray(w, dtype=float).reshape(-1))
    if w.size == 0:
        raise DataError("width distribution of an empty sample")
    qs = np.quantile(w, QUANTILE_LEVELS, method="linear")
    counts, edges = np.histogram(w, bins=bins)
    return WidthDistribution(
        widths=w,
        mean=float(w.mean()),
        std=float(w.std()),
        quantiles={q: float(v) for q, v in zip(QUANTILE_LEVELS, qs)},
        bin_edges=edges,
        counts=counts,
    )


def histogram_overlap(a, b, bins: int) -> float:
    """Overlap coefficient sum(min(p, q)) of two samples binned on shared edges."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lo = min(a.min(), b.min())
    hi = max(a.max(), b.max())
    if hi <= lo:
        return 1.0
    edges = np.linspace(lo, hi, bins + 1)
    p = np.histogram(a, bins=edges)[0] / a.size
    q = np.histogram(b, bins=edges)[0] / b.size
    return float(np.minimum(p, q).sum())


def separation_report(ind: WidthDistribution, ood: WidthDistribution, threshold: float = 1.5) -> SeparationReport:
    """Compare OOD widths against in-distribution widths.

    ``separated`` is a tooling convenience (mean ratio above ``threshold``);
    the raw ratio and histogram overlap are always reported.
    """
    if ind.n == 0 or ood.n == 0:
        raise DataError("both width distributions must be nonempty")
    ratio = ood.mean / ind.mean if ind.mean > 0 else (1.0 if ood.mean == 0 else np.inf)
    bins = max(ind.counts.size, ood.counts.size)
    overlap = histogram_overlap(ind.widths, ood.widths, bins)
    return SeparationReport(float(ratio), overlap, bool(ratio > threshold), float(threshold))


def save_json(obj, path) -> None:
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    elif hasattr(obj, "__dataclass_fields__"):
        obj = asdict(obj)
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n")
