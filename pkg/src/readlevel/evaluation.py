"""Confusion-matrix metrics: accuracy, per-class precision/recall/F1, macro-F1.

Rows of the confusion matrix are true classes, columns are predictions.
Degenerate 0/0 quotients (empty class, never-predicted class) are defined
as 0 so macro averaging stays total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray

    def __post_init__(self):
        c = self.counts
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise MetricError(f"confusion matrix must be square, got shape {c.shape}")
        if c.dtype.kind not in "iu" or np.any(c < 0):
            raise MetricError("confusion counts must be non-negative integers")

    @property
    def k(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def confusion(y_true, y_pred, k: int) -> ConfusionMatrix:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise MetricError(f"label arrays must be equal-length 1-D, got {y_true.shape} and {y_pred.shape}")
    if y_true.size == 0:
        raise MetricError("no samples to evaluate")
    if k <= 0:
        raise MetricError(f"k must be positive, got {k}")
    for name, arr in (("y_true", y_true), ("y_pred", y_pred)):
        if arr.min() < 0 or arr.max() >= k:
            raise MetricError(f"{name} has an index outside 0..{k - 1}")
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    return ConfusionMatrix(counts)


def _safe_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num, dtype=np.float64)
    np.divide(num, den, out=out, where=den != 0)
    return out


def per_class_prf(cm: ConfusionMatrix) -> list[tuple[float, float, float]]:
    c = cm.counts.astype(np.float64)
    diag = np.diag(c)
    precision = _safe_div(diag, c.sum(axis=0))
    recall = _safe_div(diag, c.sum(axis=1))
    f1 = _safe_div(2.0 * precision * recall, precision + recall)
    return [(float(p), float(r), float(f)) for p, r, f in zip(precision, recall, f1)]


def accuracy(cm: ConfusionMatrix) -> float:
    return float(np.trace(cm.counts) / cm.total)


def macro_f1(cm: ConfusionMatrix) -> float:
    prf = per_class_prf(cm)
    return float(sum(f for _, _, f in prf) / cm.k)


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    per_class: list[tuple[float, float, float]]
    macro_f1: float
    confusion: ConfusionMatrix
    n: int

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "per_class": [
                {"precision": p, "recall": r, "f1": f} for p, r, f in self.per_class
            ],
            "macro_f1": self.macro_f1,
            "confusion": self.confusion.counts.tolist(),
            "n": self.n,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def evaluate(y_true, y_pred, k: int) -> EvalReport:
    cm = confusion(y_true, y_pred, k)
    return EvalReport(
        accuracy=accuracy(cm),
        per_class=per_class_prf(cm),
        macro_f1=macro_f1(cm),
        confusion=cm,
        n=cm.total,
    )
