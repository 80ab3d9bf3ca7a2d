"""CART-style binary decision tree, Gini impurity, from scratch.

Split search modes: `best` sweeps midpoints of sorted unique values per
candidate feature; `random` draws one uniform threshold in [min, max) per
non-constant candidate feature. A split is accepted only when the Gini
decrease exceeds 1e-12, so constant or uninformative nodes collapse to
leaves. Rows satisfying value <= threshold go left; with either threshold
mode both children are guaranteed non-empty.

Building is iterative (explicit stack, depth-first, left child first) so
degenerate chains never hit the interpreter recursion limit, and the rng
consumption order is a pure function of the data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from readlevel.rng import derived_rng

GAIN_EPS = 1e-12

THRESHOLD_MODES = ("best", "random")


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class TreeNode:
    """Either a split (feature/threshold/left/right set) or a leaf (klass/histogram set)."""

    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    klass: int | None = None
    histogram: np.ndarray | None = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


def _leaf(counts: np.ndarray) -> TreeNode:
    return TreeNode(klass=int(np.argmax(counts)), histogram=counts.copy())


def _gini_from_counts(counts: np.ndarray, n: int) -> float:
    return 1.0 - float(np.square(counts / n).sum())


def _best_threshold(values: np.ndarray, onehot: np.ndarray, parent_gini: float):
    """Best midpoint split of one feature; returns (gain, threshold) or None."""
    n = values.shape[0]
    order = np.argsort(values, kind="stable")
    vs = values[order]
    cum = np.cumsum(onehot[order], axis=0)
    cut = np.nonzero(vs[:-1] < vs[1:])[0]
    if cut.size == 0:
        return None
    n_left = (cut + 1).astype(np.float64)
    n_right = n - n_left
    left = cum[cut]
    right = cum[-1] - left
    gini_left = 1.0 - np.square(left / n_left[:, None]).sum(axis=1)
    gini_right = 1.0 - np.square(right / n_right[:, None]).sum(axis=1)
    gains = parent_gini - (n_left * gini_left + n_right * gini_right) / n
    best = int(np.argmax(gains))
    return float(gains[best]), float((vs[cut[best]] + vs[cut[best] + 1]) / 2.0)


def _random_threshold(values: np.ndarray, onehot: np.ndarray, parent_gini: float, rng):
    lo = float(values.min())
    hi = float(values.max())
    if lo == hi:
        return None
    threshold = float(rng.uniform(lo, hi))
    n = values.shape[0]
    mask = values <= threshold
    n_left = int(mask.sum())
    left = onehot[mask].sum(axis=0)
    right = onehot.sum(axis=0) - left
    gain = parent_gini - (
        n_left * _gini_from_counts(left, n_left)
        + (n - n_left) * _gini_from_counts(right, n - n_left)
    ) / n
    return gain, threshold


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    *,
    max_features: int,
    min_samples_split: int,
    max_depth: int | None,
    threshold_mode: str,
    rng: np.random.Generator | None,
) -> TreeNode:
    """Shared builder for standalone trees and forest members.

    `rng` may be None only when no randomness is needed (best mode, all
    features as candidates).
    """
    if threshold_mode not in THRESHOLD_MODES:
        raise ModelError(f"unknown threshold mode {threshold_mode!r}")
    n, p = X.shape
    m = min(max_features, p)
    needs_rng = m < p or threshold_mode == "random"
    if needs_rng and rng is None:
        raise ModelError("this configuration draws random numbers but no rng was given")
    onehot = np.equal.outer(y, np.arange(n_classes)).astype(np.float64)

    # placeholder tree assembled bottom-up: stack holds (indices, depth, parent_slot)
    # where parent_slot is (parent_record, "left"|"right") or None for the root.
    root_slot: list = [None]
    stack = [(np.arange(n), 0, None)]
    while stack:
        idx, depth, slot = stack.pop()
        counts = onehot[idx].sum(axis=0)
        n_node = idx.shape[0]
        pure = np.max(counts) == n_node
        depth_capped = max_depth is not None and depth >= max_depth
        node: dict | None = None
        if not (pure or n_node < min_samples_split or depth_capped):
            if m < p:
                candidates = rng.permutation(p)[:m]
            else:
                candidates = np.arange(p)
            parent_gini = _gini_from_counts(counts, n_node)
            best_gain = GAIN_EPS
            best_feature = -1
            best_threshold = 0.0
            for j in candidates:
                col = X[idx, j]
                if threshold_mode == "best":
                    found = _best_threshold(col, onehot[idx], parent_gini)
                else:
                    found = _random_threshold(col, onehot[idx], parent_gini, rng)
                if found is not None and found[0] > best_gain:
                    best_gain, best_threshold = found
                    best_feature = int(j)
            if best_feature >= 0:
                node = {
                    "feature": best_feature,
                    "threshold": best_threshold,
                    "left": None,
                    "right": None,
                }
                mask = X[idx, best_feature] <= best_threshold
                # push right first so the left child is grown first (rng order)
                stack.append((idx[~mask], depth + 1, (node, "right")))
                stack.append((idx[mask], depth + 1, (node, "left")))
        if node is None:
            node = {"counts": counts.astype(np.int64)}
        if slot is None:
            root_slot[0] = node
        else:
            parent, side = slot
            parent[side] = node

    def freeze(rec: dict) -> TreeNode:
        # records form a DAG-free tree; freeze bottom-up without recursion
        out: dict[int, TreeNode] = {}
        post = []
        walk = [rec]
        while walk:
            cur = walk.pop()
            post.append(cur)
            if "feature" in cur:
                walk.append(cur["left"])
                walk.append(cur["right"])
        for cur in reversed(post):
            if "feature" in cur:
                out[id(cur)] = TreeNode(
                    feature=cur["feature"],
                    threshold=cur["threshold"],
                    left=out[id(cur["left"])],
                    right=out[id(cur["right"])],
                )
            else:
                out[id(cur)] = _leaf(cur["counts"])
        return out[id(rec)]

    return freeze(root_slot[0])


def fit_tree(X, y, params, seed: int) -> TreeNode:
    """Standalone tree: all features are candidates unless params narrows m."""
    X, y = _check_xy(X, y)
    p = X.shape[1]
    m = params.max_features if params.max_features is not None else p
    needs_rng = m < p or params.threshold_mode == "random"
    rng = derived_rng(seed, "tree") if needs_rng else None
    return grow_tree(
        X,
        y,
        int(y.max()) + 1,
        max_features=m,
        min_samples_split=params.min_samples_split,
        max_depth=params.max_depth,
        threshold_mode=params.threshold_mode,
        rng=rng,
    )


def tree_max_feature(root: TreeNode) -> int:
    """Largest feature index referenced; -1 for a bare leaf."""
    top = -1
    stack = [root]
    while stack:
        node = stack.pop()
        if not node.is_leaf:
            top = max(top, node.feature)
            stack.append(node.left)
            stack.append(node.right)
    return top


def route_to_leaf(root: TreeNode, x: np.ndarray) -> TreeNode:
    node = root
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node


def predict_tree(root: TreeNode, X: np.ndarray) -> np.ndarray:
    if X.ndim != 2 or X.shape[0] == 0:
        raise ModelError("X must be a non-empty 2-D matrix")
    top = tree_max_feature(root)
    if X.shape[1] <= top:
        raise ModelError(f"tree references feature {top}, but X has {X.shape[1]} columns")
    return np.array([route_to_leaf(root, row).klass for row in X], dtype=np.int64)


def tree_histograms(root: TreeNode, X: np.ndarray, n_classes: int) -> np.ndarray:
    """Per-row leaf count histogram, shape (n, n_classes)."""
    out = np.zeros((X.shape[0], n_classes), dtype=np.float64)
    for i, row in enumerate(X):
        hist = route_to_leaf(root, row).histogram
        out[i, : hist.shape[0]] = hist
    return out


def _check_xy(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2:
        raise ModelError(f"X must be 2-D, got ndim={X.ndim}")
    if X.shape[0] == 0:
        raise ModelError("X has no rows")
    if y.shape != (X.shape[0],):
        raise ModelError(f"y has shape {y.shape}, expected ({X.shape[0]},)")
    if not np.all(np.isfinite(X)):
        raise ModelError("X contains non-finite values")
    if y.min() < 0:
        raise ModelError("y has a negative class index")
    return X, y
