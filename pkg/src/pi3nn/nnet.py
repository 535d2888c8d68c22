"""A small fully-connected regression network written directly in numpy.

Dense ReLU hidden layers feed one scalar output. Training minimises the mean
squared error plus optional L1/L2 weight penalties with Adam updates.
Everything is seeded, so the same inputs always give the same parameters
down to the last bit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError, DivergenceError, ShapeError

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class MlpSpec:
    input_dim: int
    hidden_widths: tuple[int, ...] = (100,)
    output_positivity: bool = False
    l1: float = 0.0
    l2: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "hidden_widths", tuple(int(w) for w in self.hidden_widths))
        if self.input_dim < 1:
            raise ConfigError(f"input_dim must be positive, got {self.input_dim}")
        if not self.hidden_widths or min(self.hidden_widths) < 1:
            raise ConfigError(f"hidden_widths must be non-empty and positive, got {self.hidden_widths}")
        if self.l1 < 0 or self.l2 < 0:
            raise ConfigError("l1 and l2 must be nonnegative")

    @property
    def layer_sizes(self) -> list[int]:
        return [self.input_dim, *self.hidden_widths, 1]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.01
    epochs: int = 1000
    batch_size: int | None = None  # None means full batch
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size is not None and self.batch_size < 1:
            raise ConfigError(f"batch_size must be positive, got {self.batch_size}")


@dataclass
class MlpModel:
    """Network parameters. ``weights[k]`` has shape ``(fan_in, fan_out)``."""

    spec: MlpSpec
    weights: list[np.ndarray] = field(default_factory=list)
    biases: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        sizes = self.spec.layer_sizes
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise ShapeError("number of parameter arrays does not match the spec")
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[k], sizes[k + 1]) or b.shape != (sizes[k + 1],):
                raise ShapeError(
                    f"layer {k}: expected W{(sizes[k], sizes[k + 1])} b{(sizes[k + 1],)}, "
                    f"got W{w.shape} b{b.shape}"
                )

    def copy(self) -> MlpModel:
        return MlpModel(self.spec, [w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def __call__(self, x):
        return forward(self, x)


def init_model(spec: MlpSpec) -> MlpModel:
    """He-uniform weights (limit sqrt(6 / fan_in)) and zero biases."""
    rng = np.random.default_rng(spec.seed)
    sizes = spec.layer_sizes
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpModel(spec, weights, biases)


def _as_batch(model: MlpModel, x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != model.spec.input_dim:
        raise ShapeError(f"expected inputs with {model.spec.input_dim} features, got shape {x.shape}")
    return x, single


def _forward_pass(model: MlpModel, x: np.ndarray):
    """Return (output, pre-activations, activations) for backprop."""
    acts = [x]
    pres = []
    h = x
    last = len(model.weights) - 1
    for k, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = h @ w + b
        pres.append(z)
        if k < last:
            h = np.maximum(z, 0.0)
            acts.append(h)
    z_out = pres[-1][:, 0]
    out = np.abs(z_out) if model.spec.output_positivity else z_out
    return out, pres, acts


def forward(model: MlpModel, x):
    """Evaluate the network.

    A 1-D ``x`` is one sample and gives a float; a 2-D ``x`` is a batch of
    rows and gives a 1-D array.
    """
    xb, single = _as_batch(model, x)
    out = _forward_pass(model, xb)[0]
    return float(out[0]) if single else out


def mean_output(model: MlpModel, inputs) -> float:
    if np.asarray(inputs).size == 0:
        raise DataError("mean_output needs at least one input")
    xb, _ = _as_batch(model, inputs)
    return float(np.mean(forward(model, xb)))


def penalty(model: MlpModel) -> float:
    spec = model.spec
    total = 0.0
    if spec.l1:
        total += spec.l1 * sum(float(np.abs(w).sum()) for w in model.weights)
    if spec.l2:
        total += spec.l2 * sum(float((w * w).sum()) for w in model.weights)
    return total


def loss_and_grad(model: MlpModel, x, targets):
    """Penalised MSE and its gradient with respect to every parameter.

    Penalties apply to weights only. The derivative of |z| at z = 0 is taken
    as 0.
    """
    xb, _ = _as_batch(model, x)
    t = np.asarray(targets, dtype=float).reshape(-1)
    out, pres, acts = _forward_pass(model, xb)
    n = xb.shape[0]
    err = out - t
    with np.errstate(over="ignore", invalid="ignore"):
        loss = float(np.mean(err * err)) + penalty(model)

    delta = (2.0 / n) * err
    if model.spec.output_positivity:
        delta = delta * np.sign(pres[-1][:, 0])
    delta = delta[:, None]

    n_layers = len(model.weights)
    grad_w = [None] * n_layers
    grad_b = [None] * n_layers
    for k in range(n_layers - 1, -1, -1):
        grad_w[k] = acts[k].T @ delta
        grad_b[k] = delta.sum(axis=0)
        if k > 0:
            delta = (delta @ model.weights[k].T) * (pres[k - 1] > 0)

    l1, l2 = model.spec.l1, model.spec.l2
    if l1 or l2:
        for k, w in enumerate(model.weights):
            grad_w[k] = grad_w[k] + l1 * np.sign(w) + 2.0 * l2 * w
    return loss, grad_w, grad_b


def mse(model: MlpModel, inputs, targets) -> float:
    """Unpenalised mean squared error."""
    err = forward(model, np.asarray(inputs, dtype=float)) - np.asarray(targets, dtype=float).reshape(-1)
    return float(np.mean(err * err))


def train_mse(model: MlpModel, inputs, targets, cfg: TrainConfig) -> MlpModel:
    """Fit ``model`` to ``targets`` with Adam; returns a new model."""
    x, _ = _as_batch(model, inputs)
    t = np.asarray(targets, dtype=float).reshape(-1)
    if x.shape[0] == 0:
        raise DataError("cannot train on an empty dataset")
    if t.shape[0] != x.shape[0]:
        raise ShapeError(f"{x.shape[0]} inputs but {t.shape[0]} targets")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(t))):
        raise DataError("training data contains NaN or Inf")

    trained = model.copy()
    params = trained.weights + trained.biases
    m = [np.zeros_like(p) for p in params]
    v = [np.zeros_like(p) for p in params]
    n = x.shape[0]
    batch = n if cfg.batch_size is None else min(cfg.batch_size, n)
    rng = np.random.default_rng(cfg.seed)
    step = 0
    for epoch in range(cfg.epochs):
        if batch < n:
            order = rng.permutation(n)
            batches = [order[i:i + batch] for i in range(0, n, batch)]
        else:
            batches = [slice(None)]
        for idx in batches:
            loss, gw, gb = loss_and_grad(trained, x[idx], t[idx])
            if not np.isfinite(loss):
                raise DivergenceError(f"loss became non-finite at epoch {epoch}", epoch=epoch)
            step += 1
            lr_t = cfg.learning_rate * np.sqrt(1 - ADAM_BETA2**step) / (1 - ADAM_BETA1**step)
            for p, g, mi, vi in zip(params, gw + gb, m, v):
                mi *= ADAM_BETA1
                mi += (1 - ADAM_BETA1) * g
                vi *= ADAM_BETA2
                vi += (1 - ADAM_BETA2) * g * g
                p -= lr_t * mi / (np.sqrt(vi) + ADAM_EPS)
    return trained


def set_output_bias(model: MlpModel, value: float) -> MlpModel:
    out = model.copy()
    out.biases[-1] = np.array([float(value)])
    return out


def parameter_hash(model: MlpModel) -> str:
    h = hashlib.sha256()
    for p in model.weights + model.biases:
        h.update(np.ascontiguousarray(p, dtype="<f8").tobytes())
    return h.hexdigest()


def model_to_dict(model: MlpModel) -> dict:
    spec = asdict(model.spec)
    spec["hidden_widths"] = list(spec["hidden_widths"])
    return {
        "spec": spec,
        "weights": [{"shape": list(w.shape), "data": w.ravel().tolist()} for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
    }


def model_from_dict(d: dict) -> MlpModel:
    spec = MlpSpec(**d["spec"])
    weights = [np.array(w["data"], dtype=float).reshape(w["shape"]) for w in d["weights"]]
    biases = [np.array(b, dtype=float) for b in d["biases"]]
    return MlpModel(spec, weights, biases)


def save_model(model: MlpModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model)))


def load_model(path) -> MlpModel:
    return model_from_dict(json.loads(Path(path).read_text()))
