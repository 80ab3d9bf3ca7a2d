"""Random Forest and Extra Trees over the CART builder.

Per-tree randomness comes from a stream derived from (seed, variant, tree
index), so fitting is reproducible regardless of how many worker threads
build trees. Random Forest bootstraps n rows with replacement and sweeps
best thresholds; Extra Trees keeps the full sample and draws thresholds
uniformly. Both default to m = ceil(sqrt(p)) candidate features per node.

Prediction sums raw per-tree leaf count histograms and takes the argmax,
ties resolved toward the smallest class index.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from readlevel.models.tree import ModelError, TreeNode, _check_xy, grow_tree, tree_histograms
from readlevel.rng import derived_rng

VARIANTS = ("random_forest", "extra_trees")


@dataclass(frozen=True)
class ForestModel:
    trees: tuple[TreeNode, ...]
    n_classes: int
    n_features: int
    variant: str
    params: "object"
    seed: int

    def __post_init__(self):
        if not self.trees:
            raise ModelError("a forest needs at least one tree")
        if self.variant not in VARIANTS:
            raise ModelError(f"unknown forest variant {self.variant!r}")


def _default_m(p: int) -> int:
    return math.ceil(math.sqrt(p))


def _fit_one_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    variant: str,
    params,
    seed: int,
    tree_index: int,
    bootstrap: bool,
) -> TreeNode:
    n, p = X.shape
    m = params.max_features if params.max_features is not None else _default_m(p)
    threshold_mode = "best" if variant == "random_forest" else "random"
    needs_rng = bootstrap or m < p or threshold_mode == "random"
    rng = derived_rng(seed, variant, tree_index) if needs_rng else None
    if bootstrap:
        rows = rng.integers(0, n, size=n)
        Xt, yt = X[rows], y[rows]
    else:
        Xt, yt = X, y
    return grow_tree(
        Xt,
        yt,
        n_classes,
        max_features=m,
        min_samples_split=params.min_samples_split,
        max_depth=params.max_depth,
        threshold_mode=threshold_mode,
        rng=rng,
    )


def _fit_forest(X, y, params, seed: int, variant: str, bootstrap: bool, n_jobs: int) -> ForestModel:
    X, y = _check_xy(X, y)
    n_classes = int(y.max()) + 1
    T = params.n_trees
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            futures = [
                pool.submit(_fit_one_tree, X, y, n_classes, variant, params, seed, t, bootstrap)
                for t in range(T)
            ]
            trees = tuple(f.result() for f in futures)
    else:
        trees = tuple(
            _fit_one_tree(X, y, n_classes, variant, params, seed, t, bootstrap) for t in range(T)
        )
    return ForestModel(
        trees=trees,
        n_classes=n_classes,
        n_features=X.shape[1],
        variant=variant,
        params=params,
        seed=seed,
    )


def fit_random_forest(X, y, params, seed: int, n_jobs: int = 1) -> ForestModel:
    return _fit_forest(X, y, params, seed, "random_forest", bootstrap=params.bootstrap, n_jobs=n_jobs)


def fit_extra_trees(X, y, params, seed: int, n_jobs: int = 1) -> ForestModel:
    return _fit_forest(X, y, params, seed, "extra_trees", bootstrap=False, n_jobs=n_jobs)


def predict_forest(model: ForestModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ModelError("X must be a non-empty 2-D matrix")
    if X.shape[1] != model.n_features:
        raise ModelError(f"model fitted on p={model.n_features}, got p={X.shape[1]}")
    votes = np.zeros((X.shape[0], model.n_classes), dtype=np.float64)
    for tree in model.trees:
        votes += tree_histograms(tree, X, model.n_classes)
    return np.argmax(votes, axis=1).astype(np.int64)
