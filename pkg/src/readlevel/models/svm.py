"""One-vs-rest linear SVM trained by stochastic subgradient descent.

Per class c the objective is lambda/2 ||w||^2 + mean_i max(0, 1 - s_i (w.x_i + b)),
with s_i = +1 for class c and -1 otherwise. Step size eta_t = 1/(lambda (t + t0))
with t0 = 1/lambda, so (1 - eta_t lambda) stays in (0, 1) from the first step.
The bias is unregularized. Each class owns an rng stream derived from
(seed, "linear_svm", class index), so one-vs-rest fits can run in any order
or in parallel without changing the result.

Inputs are expected standardized; the model carries a flag so callers can
check they applied the same transform at prediction time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from readlevel.models.tree import ModelError, _check_xy
from readlevel.rng import derived_rng


@dataclass(frozen=True)
class SvmModel:
    W: np.ndarray
    b: np.ndarray
    expects_standardized: bool = True

    def __post_init__(self):
        if self.W.ndim != 2 or self.b.shape != (self.W.shape[0],):
            raise ModelError(f"inconsistent parameter shapes W{self.W.shape}, b{self.b.shape}")
        if not (np.all(np.isfinite(self.W)) and np.all(np.isfinite(self.b))):
            raise ModelError("non-finite SVM parameters")

    @property
    def n_classes(self) -> int:
        return self.W.shape[0]

    @property
    def n_features(self) -> int:
        return self.W.shape[1]


def _fit_one_class(X: np.ndarray, signs: np.ndarray, lam: float, epochs: int, rng) -> tuple[np.ndarray, float]:
    n, p = X.shape
    w = np.zeros(p)
    b = 0.0
    t0 = 1.0 / lam
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * (t + t0))
            x = X[i]
            s = signs[i]
            margin = s * (x @ w + b)
            w *= 1.0 - eta * lam
            if margin < 1.0:
                w += (eta * s) * x
                b += eta * s
    return w, b


def fit_linear_svm(X, y, params, seed: int) -> SvmModel:
    X, y = _check_xy(X, y)
    k = int(y.max()) + 1
    if X.shape[0] < 2 or np.unique(y).size < 2:
        raise ModelError("need at least 2 samples spanning at least 2 classes")
    W = np.zeros((k, X.shape[1]))
    b = np.zeros(k)
    for c in range(k):
        signs = np.where(y == c, 1.0, -1.0)
        rng = derived_rng(seed, "linear_svm", c)
        W[c], b[c] = _fit_one_class(X, signs, params.svm_lambda, params.svm_epochs, rng)
    return SvmModel(W=W, b=b)


def svm_scores(model: SvmModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ModelError("X must be a non-empty 2-D matrix")
    if X.shape[1] != model.n_features:
        raise ModelError(f"model fitted on p={model.n_features}, got p={X.shape[1]}")
    return X @ model.W.T + model.b


def predict_svm(model: SvmModel, X: np.ndarray) -> np.ndarray:
    return np.argmax(svm_scores(model, X), axis=1).astype(np.int64)
