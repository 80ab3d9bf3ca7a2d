"""Hyperparameters for every model family, one flat bundle.

The forest/tree fields and the SVM/MLP fields are disjoint; fit functions
read only their own slice. `seed` is a convenience default: every fit
function also takes an explicit seed argument which wins when given.
"""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class TrainParams:
    # trees and forests
    n_trees: int = 100
    max_features: int | None = None
    min_samples_split: int = 2
    max_depth: int | None = None
    threshold_mode: str = "best"
    bootstrap: bool = True
    # linear SVM (Pegasos-style subgradient descent)
    svm_lambda: float = 1e-4
    svm_epochs: int = 50
    # MLP
    mlp_hidden: int = 100
    mlp_batch: int = 32
    mlp_epochs: int = 200
    mlp_lr: float = 1e-3
    mlp_patience: int = 10
    mlp_val_fraction: float = 0.1
    seed: int = 0

    def __post_init__(self):
        counts = {
            "n_trees": self.n_trees,
            "min_samples_split": self.min_samples_split,
            "svm_epochs": self.svm_epochs,
            "mlp_hidden": self.mlp_hidden,
            "mlp_batch": self.mlp_batch,
            "mlp_epochs": self.mlp_epochs,
            "mlp_patience": self.mlp_patience,
        }
        for name, value in counts.items():
            if value < 1:
                raise ValueError(f"{name} must be positive, got {value}")
        if self.max_features is not None and self.max_features < 1:
            raise ValueError(f"max_features must be positive, got {self.max_features}")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError(f"max_depth must be >= 0, got {self.max_depth}")
        if self.threshold_mode not in ("best", "random"):
            raise ValueError(f"threshold_mode must be 'best' or 'random', got {self.threshold_mode!r}")
        for name, value in (("svm_lambda", self.svm_lambda), ("mlp_lr", self.mlp_lr)):
            if not value > 0.0:
                raise ValueError(f"{name} must be positive, got {value}")
        if not 0.0 <= self.mlp_val_fraction < 1.0:
            raise ValueError(f"mlp_val_fraction must be in [0, 1), got {self.mlp_val_fraction}")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "TrainParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown TrainParams fields: {sorted(unknown)}")
        return cls(**data)
