"""Prediction intervals from three independently trained regression networks."""

from .data import Dataset, NoiseSpec, NormStats, gen_cubic_1d, gen_cubic_10d, load_csv, normalize, split
from .errors import (
    ConfigError,
    DataError,
    DivergenceError,
    InfeasibleGammaError,
    PI3NNError,
    ShapeError,
    TieError,
)
from .metrics import coverage_report, mpiw, picp, separation_report, width_distribution
from .nnet import MlpModel, MlpSpec, TrainConfig
from .pipeline import (
    GammaSolution,
    IntervalBand,
    OodConfig,
    TrainedTriplet,
    confidence_scores,
    fit,
    predict_intervals,
    solve_gammas,
)

__version__ = "0.1.0"
