"""Single-hidden-layer MLP: rectifier, softmax + cross-entropy, Adam.

Initialization is uniform +-sqrt(6/(fan_in+fan_out)) per layer, biases zero.
Optimization is mini-batch Adam (decays 0.9/0.999, stabilizer 1e-8, base
rate 1e-3) for at most E epochs, with early stopping on a stratified
validation slice: per class, round-half-up of val_fraction * count rows are
held out; when that slice comes out empty (tiny datasets) or swallows the
whole set, early stopping is skipped and training runs all E epochs. On an
early stop the best-validation-loss parameters are restored.

Streams: (seed,"mlp","init") for weights, (seed,"mlp","val") for the slice,
(seed,"mlp","batches") for epoch shuffles. Training is single-threaded per
model; the loss/gradient pair below exists so the analytic backward pass can
be checked against finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from readlevel.models.tree import ModelError, _check_xy
from readlevel.rng import derived_rng

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class MlpModel:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    expects_standardized: bool = True

    def __post_init__(self):
        h, p = self.W1.shape
        k = self.W2.shape[0]
        if h < 1:
            raise ModelError("hidden layer must have at least 1 unit")
        if self.b1.shape != (h,) or self.W2.shape != (k, h) or self.b2.shape != (k,):
            raise ModelError("inconsistent MLP parameter shapes")
        for arr in (self.W1, self.b1, self.W2, self.b2):
            if not np.all(np.isfinite(arr)):
                raise ModelError("non-finite MLP parameters")

    @property
    def n_classes(self) -> int:
        return self.W2.shape[0]

    @property
    def n_features(self) -> int:
        return self.W1.shape[1]


def _forward(W1, b1, W2, b2, X):
    hidden = np.maximum(X @ W1.T + b1, 0.0)
    scores = hidden @ W2.T + b2
    return hidden, scores


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _loss_and_grad(W1, b1, W2, b2, X, y):
    n = X.shape[0]
    hidden, scores = _forward(W1, b1, W2, b2, X)
    probs = _softmax(scores)
    loss = float(-np.log(probs[np.arange(n), y] + 1e-300).mean())
    dscores = probs.copy()
    dscores[np.arange(n), y] -= 1.0
    dscores /= n
    gW2 = dscores.T @ hidden
    gb2 = dscores.sum(axis=0)
    dhidden = (dscores @ W2) * (hidden > 0.0)
    gW1 = dhidden.T @ X
    gb1 = dhidden.sum(axis=0)
    return loss, {"W1": gW1, "b1": gb1, "W2": gW2, "b2": gb2}


def mlp_loss_and_grad(model: MlpModel, X, y):
    """Mean cross-entropy and its analytic gradient for every parameter."""
    X, y = _check_xy(X, y)
    if X.shape[1] != model.n_features:
        raise ModelError(f"model fitted on p={model.n_features}, got p={X.shape[1]}")
    if y.max() >= model.n_classes:
        raise ModelError("class index outside model range")
    return _loss_and_grad(model.W1, model.b1, model.W2, model.b2, X, y)


def _round_half_up(x: float) -> int:
    return int(math.floor(round(x, 9) + 0.5))


def _val_split(y: np.ndarray, fraction: float, rng) -> np.ndarray:
    """Stratified validation row mask; all-False when the slice degenerates."""
    n = y.shape[0]
    mask = np.zeros(n, dtype=bool)
    for c in np.unique(y):
        rows = np.nonzero(y == c)[0]
        take = _round_half_up(rows.size * fraction)
        if take == 0:
            continue
        mask[rng.permutation(rows)[:take]] = True
    if mask.all():
        return np.zeros(n, dtype=bool)
    return mask


def fit_mlp(X, y, params, seed: int) -> MlpModel:
    X, y = _check_xy(X, y)
    if X.shape[0] < 2 or np.unique(y).size < 2:
        raise ModelError("need at least 2 samples spanning at least 2 classes")
    n, p = X.shape
    k = int(y.max()) + 1
    h = params.mlp_hidden

    init_rng = derived_rng(seed, "mlp", "init")
    r1 = math.sqrt(6.0 / (p + h))
    r2 = math.sqrt(6.0 / (h + k))
    W1 = init_rng.uniform(-r1, r1, size=(h, p))
    b1 = np.zeros(h)
    W2 = init_rng.uniform(-r2, r2, size=(k, h))
    b2 = np.zeros(k)

    val_mask = _val_split(y, params.mlp_val_fraction, derived_rng(seed, "mlp", "val"))
    use_early_stop = bool(val_mask.any())
    X_tr, y_tr = (X[~val_mask], y[~val_mask]) if use_early_stop else (X, y)
    X_val, y_val = X[val_mask], y[val_mask]

    batch_rng = derived_rng(seed, "mlp", "batches")
    momts = {name: [np.zeros_like(arr), np.zeros_like(arr)] for name, arr in
             (("W1", W1), ("b1", b1), ("W2", W2), ("b2", b2))}
    weights = {"W1": W1, "b1": b1, "W2": W2, "b2": b2}
    step = 0
    best_val = math.inf
    best_weights = None
    stall = 0
    for _ in range(params.mlp_epochs):
        order = batch_rng.permutation(X_tr.shape[0])
        for start in range(0, order.size, params.mlp_batch):
            batch = order[start : start + params.mlp_batch]
            _, grads = _loss_and_grad(
                weights["W1"], weights["b1"], weights["W2"], weights["b2"], X_tr[batch], y_tr[batch]
            )
            step += 1
            for name, g in grads.items():
                m, v = momts[name]
                m *= ADAM_BETA1
                m += (1.0 - ADAM_BETA1) * g
                v *= ADAM_BETA2
                v += (1.0 - ADAM_BETA2) * np.square(g)
                m_hat = m / (1.0 - ADAM_BETA1**step)
                v_hat = v / (1.0 - ADAM_BETA2**step)
                weights[name] -= params.mlp_lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
        if use_early_stop:
            val_loss, _ = _loss_and_grad(
                weights["W1"], weights["b1"], weights["W2"], weights["b2"], X_val, y_val
            )
            if val_loss < best_val:
                best_val = val_loss
                best_weights = {name: arr.copy() for name, arr in weights.items()}
                stall = 0
            else:
                stall += 1
                if stall >= params.mlp_patience:
                    break
    if use_early_stop and best_weights is not None:
        weights = best_weights
    return MlpModel(W1=weights["W1"], b1=weights["b1"], W2=weights["W2"], b2=weights["b2"])


def mlp_probabilities(model: MlpModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ModelError("X must be a non-empty 2-D matrix")
    if X.shape[1] != model.n_features:
        raise ModelError(f"model fitted on p={model.n_features}, got p={X.shape[1]}")
    _, scores = _forward(model.W1, model.b1, model.W2, model.b2, X)
    return _softmax(scores)


def predict_mlp(model: MlpModel, X: np.ndarray) -> np.ndarray:
    return np.argmax(mlp_probabilities(model, X), axis=1).astype(np.int64)
