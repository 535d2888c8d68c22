"""Prediction intervals from three independently trained networks.

``fit`` trains a mean network ``f``, finds the scalar shift ``nu`` that puts
half the training targets above ``f + nu``, and trains two positive networks
``u`` and ``l`` on the one-sided distances to ``f + nu``. For any confidence
level gamma, ``solve_gammas`` then picks scalars alpha and beta so that

    upper(x) = f(x) + nu + alpha * u(x)
    lower(x) = f(x) + nu - beta * l(x)

leave exactly ceil(N (1 - gamma) / 2) training points above and below. No
network is touched when gamma changes, and the bands for increasing gamma
are nested.

Training happens on standardised inputs and targets; bands are reported in
the original target units.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import nnet
from .data import Dataset, NormStats, apply_norm, fit_norm
from .errors import ConfigError, DataError, InfeasibleGammaError, ShapeError
from .nnet import MlpModel, MlpSpec, TrainConfig
from .rootfind import ExceedanceProblem, solve_exceedance, solve_median_shift


@dataclass(frozen=True)
class OodConfig:
    """Large output-bias initialisation for the two scale networks.

    ``pretrain_epochs`` defaults to the main epoch budget; the retraining pass
    always uses the main budget with a fresh optimiser state.
    """

    enabled: bool = False
    c: float = 10.0
    pretrain_epochs: int | None = None

    def __post_init__(self):
        if not self.c > 0:
            raise ConfigError(f"c must be positive, got {self.c}")
        if self.pretrain_epochs is not None and self.pretrain_epochs < 1:
            raise ConfigError("pretrain_epochs must be >= 1")


@dataclass
class TrainedTriplet:
    f: MlpModel
    nu: float
    u: MlpModel
    l: MlpModel
    norm: NormStats
    d_upper_idx: np.ndarray
    d_lower_idx: np.ndarray
    mu_upper: float | None = None
    mu_lower: float | None = None

    def __post_init__(self):
        self.d_upper_idx = np.asarray(self.d_upper_idx, dtype=np.int64)
        self.d_lower_idx = np.asarray(self.d_lower_idx, dtype=np.int64)

    @property
    def n_train(self) -> int:
        return self.d_upper_idx.size + self.d_lower_idx.size

    def networks_normalized(self, x_norm: np.ndarray):
        """(f, u, l) evaluated on already-standardised inputs."""
        return (
            nnet.forward(self.f, x_norm),
            nnet.forward(self.u, x_norm),
            nnet.forward(self.l, x_norm),
        )

    def to_dict(self) -> dict:
        return {
            "f": nnet.model_to_dict(self.f),
            "nu": self.nu,
            "u": nnet.model_to_dict(self.u),
            "l": nnet.model_to_dict(self.l),
            "norm": self.norm.to_dict(),
            "d_upper_idx": self.d_upper_idx.tolist(),
            "d_lower_idx": self.d_lower_idx.tolist(),
            "mu_upper": self.mu_upper,
            "mu_lower": self.mu_lower,
        }

    @classmethod
    def from_dict(cls, d: dict) -> TrainedTriplet:
        return cls(
            f=nnet.model_from_dict(d["f"]),
            nu=float(d["nu"]),
            u=nnet.model_from_dict(d["u"]),
            l=nnet.model_from_dict(d["l"]),
            norm=NormStats.from_dict(d["norm"]),
            d_upper_idx=d["d_upper_idx"],
            d_lower_idx=d["d_lower_idx"],
            mu_upper=d.get("mu_upper"),
            mu_lower=d.get("mu_lower"),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path) -> TrainedTriplet:
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class GammaSolution:
    gamma: float
    alpha: float
    beta: float


@dataclass
class IntervalBand:
    gamma: float
    lower: np.ndarray
    upper: np.ndarray
    point_mean: np.ndarray
    point_median: np.ndarray
    width: np.ndarray = field(init=False)

    def __post_init__(self):
        self.width = self.upper - self.lower

    def __len__(self):
        return self.lower.size

    def to_csv(self, path, x=None, feature_names=None) -> None:
        """Write one row per point: inputs (if given), lower, upper, point estimates, width."""
        cols = []
        names = []
        if x is not None:
            x = np.asarray(x, dtype=float)
            if x.ndim == 1:
                x = x[:, None]
            names += feature_names or [f"x{j}" for j in range(x.shape[1])]
            cols += [x[:, j] for j in range(x.shape[1])]
        names += ["lower", "upper", "point_mean", "point_median", "width"]
        cols += [self.lower, self.upper, self.point_mean, self.point_median, self.width]
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(names)
            for row in zip(*cols):
                w.writerow([repr(float(v)) for v in row])


def exceedance_target(n: int, gamma: float) -> int:
    """ceil(N (1 - gamma) / 2), immune to representation error in gamma.

    For example 1000 * (1 - 0.95) / 2 evaluates to 25.000000000000021 in
    binary floating point; rounding to 9 decimals first gives the intended 25.
    """
    return math.ceil(round(n * (1.0 - gamma) / 2.0, 9))


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0 < gamma < 1:
        raise ConfigError(f"confidence level must lie in (0, 1), got {gamma}")
    return gamma


def _train_scale_net(spec, x, targets, cfg, ood, x_all):
    """Train u or l; with the OOD option, pretrain and restart from a scaled output bias."""
    net = nnet.init_model(spec)
    if not ood.enabled:
        return nnet.train_mse(net, x, targets, cfg), None
    pre_cfg = replace(cfg, epochs=ood.pretrain_epochs or cfg.epochs)
    pretrained = nnet.train_mse(net, x, targets, pre_cfg)
    mu = nnet.mean_output(pretrained, x_all)
    restart = nnet.set_output_bias(nnet.init_model(spec), ood.c * mu)
    return nnet.train_mse(restart, x, targets, cfg), mu


def fit(
    train: Dataset,
    spec: MlpSpec | None = None,
    cfg: TrainConfig | None = None,
    ood: OodConfig | None = None,
) -> TrainedTriplet:
    """Train the mean network, the median shift and the two scale networks.

    ``spec`` describes the architecture shared by all three networks. Its
    ``output_positivity`` flag is overridden (off for the mean network, on
    for the scale networks) and the three networks get seeds ``seed``,
    ``seed + 1`` and ``seed + 2``.
    """
    if train.n < 4:
        raise DataError(f"need at least 4 training samples, got {train.n}")
    spec = MlpSpec(train.d) if spec is None else spec
    cfg = TrainConfig() if cfg is None else cfg
    ood = OodConfig() if ood is None else ood
    if spec.input_dim != train.d:
        raise ShapeError(f"spec.input_dim={spec.input_dim} but data has {train.d} features")

    norm = fit_norm(train)
    tn = apply_norm(train, norm)
    x, y = tn.x, tn.y

    f = nnet.train_mse(
        nnet.init_model(replace(spec, output_positivity=False)), x, y, cfg
    )
    resid = y - nnet.forward(f, x)
    nu = solve_median_shift(resid)

    shifted = resid - nu
    upper_mask = shifted >= 0
    d_upper = np.flatnonzero(upper_mask)
    d_lower = np.flatnonzero(~upper_mask)
    if d_upper.size == 0 or d_lower.size == 0:
        raise DataError("median shift left one side of the split empty")

    u_spec = replace(spec, output_positivity=True, seed=spec.seed + 1)
    l_spec = replace(spec, output_positivity=True, seed=spec.seed + 2)
    u, mu_u = _train_scale_net(u_spec, x[d_upper], shifted[d_upper], cfg, ood, x)
    l, mu_l = _train_scale_net(l_spec, x[d_lower], -shifted[d_lower], cfg, ood, x)
    return TrainedTriplet(f, nu, u, l, norm, d_upper, d_lower, mu_u, mu_l)


def _one_sided(t: TrainedTriplet, train: Dataset):
    if train.n != t.n_train:
        raise ShapeError(f"triplet was fitted on {t.n_train} samples, got {train.n}")
    tn = apply_norm(train, t.norm)
    fx, ux, lx = t.networks_normalized(tn.x)
    shifted = tn.y - fx - t.nu
    up, lo = t.d_upper_idx, t.d_lower_idx
    return shifted[up], ux[up], -shifted[lo], lx[lo]


def _ratios(dist, scale, side):
    if np.any(scale <= 0):
        raise DataError(f"{side} scale network outputs zero on a training point")
    with np.errstate(divide="ignore"):
        r = dist / scale
    # a point sitting exactly on f + nu is never outside any band
    return r[r > 0]


def solve_gammas(t: TrainedTriplet, train: Dataset, gammas) -> list[GammaSolution]:
    """Solve alpha(gamma) and beta(gamma) for each confidence level.

    N in the exceedance target is the full training-set size while counting
    runs over each half, so every gamma with ceil(N (1 - gamma) / 2) larger
    than a half's size is infeasible. The networks are only read.
    """
    gammas = [_check_gamma(g) for g in gammas]
    up_dist, up_scale, lo_dist, lo_scale = _one_sided(t, train)
    r_up = _ratios(up_dist, up_scale, "upper")
    r_lo = _ratios(lo_dist, lo_scale, "lower")
    sols = []
    for g in gammas:
        k = exceedance_target(train.n, g)
        if k > r_up.size or k > r_lo.size:
            raise InfeasibleGammaError(
                f"gamma={g} needs {k} exceedances per side but the halves hold "
                f"{r_up.size} and {r_lo.size} points"
            )
        alpha = solve_exceedance(ExceedanceProblem(r_up, k)).value
        beta = solve_exceedance(ExceedanceProblem(r_lo, k)).value
        sols.append(GammaSolution(g, alpha, beta))
    return sols


def predict_intervals(t: TrainedTriplet, sols, x) -> list[IntervalBand]:
    xn = t.norm.transform_x(x)
    fx, ux, lx = t.networks_normalized(xn)
    med = fx + t.nu
    bands = []
    for s in sols:
        bands.append(
            IntervalBand(
                gamma=s.gamma,
                lower=t.norm.inverse_y(med - s.beta * lx),
                upper=t.norm.inverse_y(med + s.alpha * ux),
                point_mean=t.norm.inverse_y(fx),
                point_median=t.norm.inverse_y(med),
            )
        )
    return bands


def score_from_widths(widths, reference_mpiw: float) -> np.ndarray:
    """min(reference / width, 1), with zero width scoring 1."""
    w = np.asarray(widths, dtype=float)
    with np.errstate(divide="ignore"):
        ratio = np.where(w > 0, reference_mpiw / np.where(w > 0, w, 1.0), 1.0)
    return np.minimum(ratio, 1.0)


def confidence_scores(t: TrainedTriplet, sol: GammaSolution, train: Dataset, x) -> np.ndarray:
    """Training mean width over the width at ``x``, capped at 1."""
    train_band = predict_intervals(t, [sol], train.x)[0]
    band = predict_intervals(t, [sol], x)[0]
    return score_from_widths(band.width, float(np.mean(train_band.width)))
