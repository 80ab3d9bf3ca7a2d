"""From-scratch classifier families: tree, forests, linear SVM, MLP."""

from __future__ import annotations

import numpy as np

from readlevel.models.forest import ForestModel, fit_extra_trees, fit_random_forest, predict_forest
from readlevel.models.io import (
    load_model,
    model_from_dict,
    model_from_json,
    model_to_dict,
    model_to_json,
    save_model,
)
from readlevel.models.mlp import MlpModel, fit_mlp, mlp_loss_and_grad, mlp_probabilities, predict_mlp
from readlevel.models.params import TrainParams
from readlevel.models.svm import SvmModel, fit_linear_svm, predict_svm, svm_scores
from readlevel.models.tree import ModelError, TreeNode, fit_tree, predict_tree

__all__ = [
    "ForestModel",
    "MlpModel",
    "ModelError",
    "SvmModel",
    "TrainParams",
    "TreeNode",
    "fit_extra_trees",
    "fit_linear_svm",
    "fit_mlp",
    "fit_random_forest",
    "fit_tree",
    "load_model",
    "mlp_loss_and_grad",
    "mlp_probabilities",
    "model_from_dict",
    "model_from_json",
    "model_to_dict",
    "model_to_json",
    "predict",
    "predict_forest",
    "predict_mlp",
    "predict_svm",
    "predict_tree",
    "save_model",
    "svm_scores",
]


def predict(model, X) -> np.ndarray:
    """Class indices for any fitted model; ties go to the smallest index."""
    if isinstance(model, TreeNode):
        return predict_tree(model, np.asarray(X, dtype=np.float64))
    if isinstance(model, ForestModel):
        return predict_forest(model, X)
    if isinstance(model, SvmModel):
        return predict_svm(model, X)
    if isinstance(model, MlpModel):
        return predict_mlp(model, X)
    raise ModelError(f"cannot predict with object of type {type(model).__name__}")
