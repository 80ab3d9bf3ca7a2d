"""Versioned JSON serialization for every model family.

Floats go through Python's shortest-exact repr, so a save/load round trip
reproduces predictions bit for bit. Trees are stored as flat preorder node
lists (children always at higher indices), which keeps both encoding and
decoding iterative.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from readlevel.models.forest import ForestModel
from readlevel.models.mlp import MlpModel
from readlevel.models.params import TrainParams
from readlevel.models.svm import SvmModel
from readlevel.models.tree import ModelError, TreeNode

FORMAT_VERSION = 1


def _encode_tree(root: TreeNode) -> list[dict]:
    nodes: list[dict] = []
    # preorder with explicit child-slot patching
    stack: list[tuple[TreeNode, tuple[int, str] | None]] = [(root, None)]
    while stack:
        node, slot = stack.pop()
        index = len(nodes)
        if slot is not None:
            parent_index, side = slot
            nodes[parent_index][side] = index
        if node.is_leaf:
            nodes.append({"c": node.klass, "h": node.histogram.tolist()})
        else:
            nodes.append({"f": node.feature, "t": node.threshold, "l": None, "r": None})
            stack.append((node.right, (index, "r")))
            stack.append((node.left, (index, "l")))
    return nodes


def _decode_tree(nodes: list[dict]) -> TreeNode:
    if not nodes:
        raise ModelError("empty tree encoding")
    built: list[TreeNode | None] = [None] * len(nodes)
    for i in range(len(nodes) - 1, -1, -1):
        spec = nodes[i]
        if "c" in spec:
            built[i] = TreeNode(klass=int(spec["c"]), histogram=np.array(spec["h"], dtype=np.int64))
        else:
            built[i] = TreeNode(
                feature=int(spec["f"]),
                threshold=float(spec["t"]),
                left=built[spec["l"]],
                right=built[spec["r"]],
            )
    return built[0]


def model_to_dict(model) -> dict:
    if isinstance(model, TreeNode):
        return {"format_version": FORMAT_VERSION, "kind": "tree", "nodes": _encode_tree(model)}
    if isinstance(model, ForestModel):
        return {
            "format_version": FORMAT_VERSION,
            "kind": model.variant,
            "n_classes": model.n_classes,
            "n_features": model.n_features,
            "seed": model.seed,
            "params": model.params.to_dict(),
            "trees": [_encode_tree(t) for t in model.trees],
        }
    if isinstance(model, SvmModel):
        return {
            "format_version": FORMAT_VERSION,
            "kind": "svm",
            "W": model.W.tolist(),
            "b": model.b.tolist(),
            "expects_standardized": model.expects_standardized,
        }
    if isinstance(model, MlpModel):
        return {
            "format_version": FORMAT_VERSION,
            "kind": "mlp",
            "W1": model.W1.tolist(),
            "b1": model.b1.tolist(),
            "W2": model.W2.tolist(),
            "b2": model.b2.tolist(),
            "expects_standardized": model.expects_standardized,
        }
    raise ModelError(f"cannot serialize object of type {type(model).__name__}")


def model_from_dict(data: dict):
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelError(f"unsupported model format version {version!r}")
    kind = data.get("kind")
    if kind == "tree":
        return _decode_tree(data["nodes"])
    if kind in ("random_forest", "extra_trees"):
        return ForestModel(
            trees=tuple(_decode_tree(nodes) for nodes in data["trees"]),
            n_classes=int(data["n_classes"]),
            n_features=int(data["n_features"]),
            variant=kind,
            params=TrainParams.from_dict(data["params"]),
            seed=int(data["seed"]),
        )
    if kind == "svm":
        return SvmModel(
            W=np.array(data["W"], dtype=np.float64),
            b=np.array(data["b"], dtype=np.float64),
            expects_standardized=bool(data["expects_standardized"]),
        )
    if kind == "mlp":
        return MlpModel(
            W1=np.array(data["W1"], dtype=np.float64),
            b1=np.array(data["b1"], dtype=np.float64),
            W2=np.array(data["W2"], dtype=np.float64),
            b2=np.array(data["b2"], dtype=np.float64),
            expects_standardized=bool(data["expects_standardized"]),
        )
    raise ModelError(f"unknown model kind {kind!r}")


def model_to_json(model) -> str:
    return json.dumps(model_to_dict(model)) + "\n"


def model_from_json(text: str):
    return model_from_dict(json.loads(text))


def save_model(model, path) -> None:
    Path(path).write_text(model_to_json(model), encoding="utf-8")


def load_model(path):
    return model_from_json(Path(path).read_text(encoding="utf-8"))
