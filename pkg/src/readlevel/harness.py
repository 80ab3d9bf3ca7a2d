"""Experiment protocols: per-mode training runs, feature-group ablation,
data-size sweep, feature-range summary.

One run makes one stratified split from the run seed; every (mode, model,
scope) cell then derives its own fit seed from (seed, "fit", mode, model,
scope), so cells can execute in any order, or in parallel, without changing
any number. Scope is "all" for plain runs, the feature-group name for
ablation rows, and the training fraction for sweep rows; a sweep at fraction
1.0 uses scope "all" on purpose, which makes it reproduce the plain run
exactly.

SVM and MLP inputs are standardized on the training rows; tree models
consume raw features.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from readlevel.corpus import (
    Corpus,
    parse_conllu,
    parse_jsonl,
    parse_label_map,
    stratified_split,
    subsample,
)
from readlevel.embeddings import (
    DesignMatrix,
    EmbeddingTable,
    Standardizer,
    assemble,
    load_embedding_table,
    standardize_apply,
    standardize_fit,
)
from readlevel.evaluation import EvalReport, evaluate
from readlevel.features import (
    DEFAULT_TAGMAP,
    FEATURE_GROUPS,
    FEATURE_NAMES,
    Lexicon,
    TagMap,
    extract_corpus_features,
    load_lexicon,
    load_tagmap,
)
from readlevel.models import (
    fit_extra_trees,
    fit_linear_svm,
    fit_mlp,
    fit_random_forest,
    fit_tree,
    model_from_dict,
    model_to_dict,
    predict,
)
from readlevel.models.params import TrainParams
from readlevel.rng import derive_seed

MODEL_NAMES = ("decision_tree", "random_forest", "extra_trees", "svm", "mlp")
STANDARDIZED_MODELS = ("svm", "mlp")
SWEEP_FRACTIONS = (0.25, 0.5, 0.75)

BUNDLE_VERSION = 1


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    corpus_path: str = ""
    corpus_format: str = "conllu"
    labels_path: str | None = None
    lexicon_borrowed_path: str | None = None
    lexicon_sino_path: str | None = None
    tagmap_path: str | None = None
    embeddings_path: str | None = None
    modes: tuple[str, ...] = ("statistical",)
    models: tuple[str, ...] = ("random_forest",)
    params: TrainParams = field(default_factory=TrainParams)
    test_fraction: float = 0.2
    seed: int = 0
    out_dir: str | None = None
    dataset: str = ""
    n_jobs: int = 1

    def __post_init__(self):
        if self.corpus_format not in ("conllu", "jsonl"):
            raise ConfigError(f"corpus_format must be conllu or jsonl, got {self.corpus_format!r}")
        for mode in self.modes:
            if mode not in ("statistical", "semantic", "joint"):
                raise ConfigError(f"unknown mode {mode!r}")
        for model in self.models:
            if model not in MODEL_NAMES:
                raise ConfigError(f"unknown model {model!r}; known: {', '.join(MODEL_NAMES)}")
        if any(m in ("semantic", "joint") for m in self.modes) and not self.embeddings_path:
            raise ConfigError("semantic/joint modes need an embedding table path")
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError(f"test_fraction must be in (0,1), got {self.test_fraction}")
        if self.n_jobs < 1:
            raise ConfigError(f"n_jobs must be >= 1, got {self.n_jobs}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        data = dict(data)
        if "params" in data and isinstance(data["params"], dict):
            data["params"] = TrainParams.from_dict(data["params"])
        for key in ("modes", "models"):
            if key in data and isinstance(data[key], list):
                data[key] = tuple(data[key])
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    mode: str
    model: str
    scope: str
    accuracy: float
    macro_f1: float
    report: EvalReport

    def __post_init__(self):
        if not (0.0 <= self.accuracy <= 1.0 and 0.0 <= self.macro_f1 <= 1.0):
            raise ValueError("metrics must lie in [0,1]")


@dataclass(frozen=True)
class LoadedInputs:
    corpus: Corpus
    borrowed: Lexicon
    sino: Lexicon
    tags: TagMap
    table: EmbeddingTable | None
    dataset: str


def load_inputs(config: ExperimentConfig) -> LoadedInputs:
    if not config.corpus_path:
        raise ConfigError("no corpus path configured")
    text = Path(config.corpus_path).read_text(encoding="utf-8")
    stem = Path(config.corpus_path).stem
    if config.corpus_format == "conllu":
        label_map = None
        if config.labels_path:
            label_map = parse_label_map(Path(config.labels_path).read_text(encoding="utf-8"))
        corpus = parse_conllu(text, label_map, name=stem)
    else:
        # a JSONL header's self-declared corpus name beats the file name
        corpus = parse_jsonl(text)
    if not config.lexicon_borrowed_path or not config.lexicon_sino_path:
        raise ConfigError("both lexicon paths are required")
    borrowed = load_lexicon(
        Path(config.lexicon_borrowed_path).read_text(encoding="utf-8"), "borrowed"
    )
    sino = load_lexicon(
        Path(config.lexicon_sino_path).read_text(encoding="utf-8"), "sino_vietnamese"
    )
    tags = DEFAULT_TAGMAP
    if config.tagmap_path:
        tags = load_tagmap(Path(config.tagmap_path).read_text(encoding="utf-8"))
    table = None
    if config.embeddings_path:
        table = load_embedding_table(Path(config.embeddings_path).read_text(encoding="utf-8"))
    dataset = config.dataset or corpus.name or stem or "corpus"
    return LoadedInputs(corpus, borrowed, sino, tags, table, dataset)


def _fit(name: str, X, y, params: TrainParams, seed: int, n_jobs: int):
    if name == "decision_tree":
        return fit_tree(X, y, params, seed)
    if name == "random_forest":
        return fit_random_forest(X, y, params, seed, n_jobs=n_jobs)
    if name == "extra_trees":
        return fit_extra_trees(X, y, params, seed, n_jobs=n_jobs)
    if name == "svm":
        return fit_linear_svm(X, y, params, seed)
    if name == "mlp":
        return fit_mlp(X, y, params, seed)
    raise ConfigError(f"unknown model {name!r}")


def _n_classes(train: DesignMatrix, test: DesignMatrix) -> int:
    if train.label_set:
        return len(train.label_set)
    return int(max(train.y.max(), test.y.max())) + 1


def run_cell(
    dataset: str,
    mode: str,
    model_name: str,
    scope: str,
    train: DesignMatrix,
    test: DesignMatrix,
    params: TrainParams,
    seed: int,
    n_jobs: int = 1,
) -> tuple[ResultRow, object, Standardizer | None]:
    """Fit one (mode, model, scope) cell and evaluate it on the test rows."""
    fit_seed = derive_seed(seed, "fit", mode, model_name, scope)
    standardizer = None
    if model_name in STANDARDIZED_MODELS:
        standardizer = standardize_fit(train)
        train = standardize_apply(standardizer, train)
        test = standardize_apply(standardizer, test)
    fitted = _fit(model_name, train.X, train.y, params, fit_seed, n_jobs)
    y_pred = predict(fitted, test.X)
    report = evaluate(test.y, y_pred, _n_classes(train, test))
    row = ResultRow(
        dataset=dataset,
        mode=mode,
        model=model_name,
        scope=scope,
        accuracy=report.accuracy,
        macro_f1=report.macro_f1,
        report=report,
    )
    return row, fitted, standardizer


def _split_and_features(config: ExperimentConfig, inputs: LoadedInputs):
    features = extract_corpus_features(inputs.corpus, inputs.borrowed, inputs.sino, inputs.tags)
    train_c, test_c = stratified_split(inputs.corpus, config.test_fraction, config.seed)
    return features, train_c, test_c


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    inputs = load_inputs(config)
    features, train_c, test_c = _split_and_features(config, inputs)
    rows = []
    for mode in config.modes:
        train_dm = assemble(train_c, mode, features, inputs.table)
        test_dm = assemble(test_c, mode, features, inputs.table)
        for model in config.models:
            row, _, _ = run_cell(
                inputs.dataset, mode, model, "all", train_dm, test_dm,
                config.params, config.seed, config.n_jobs,
            )
            rows.append(row)
    return rows


def slice_columns(dm: DesignMatrix, stat_indices: tuple[int, ...], keep_embedding: bool) -> DesignMatrix:
    """Restrict the statistical block to the given indices, keeping row order."""
    cols = list(stat_indices)
    if keep_embedding:
        cols += list(range(dm.p_stat, dm.p))
    return DesignMatrix(
        X=dm.X[:, cols],
        y=dm.y,
        p_stat=len(stat_indices),
        column_names=tuple(dm.column_names[i] for i in cols),
        mode=dm.mode,
        doc_ids=dm.doc_ids,
        label_set=dm.label_set,
    )


def run_ablation(
    config: ExperimentConfig,
    groups: tuple[str, ...] | None = None,
    statistical_only: bool = False,
) -> list[ResultRow]:
    """One row per (feature group, model) on the joint matrix restricted to
    that group's statistical columns; group "all" keeps every column.

    `statistical_only` drops the embedding block instead, ablating within the
    statistical mode.
    """
    if groups is None:
        groups = tuple(FEATURE_GROUPS)
    for g in groups:
        if g != "all" and g not in FEATURE_GROUPS:
            raise ConfigError(f"unknown feature group {g!r}")
    inputs = load_inputs(config)
    mode = "statistical" if statistical_only else "joint"
    if mode == "joint" and inputs.table is None:
        raise ConfigError("ablation over joint matrices needs an embedding table")
    features, train_c, test_c = _split_and_features(config, inputs)
    train_dm = assemble(train_c, mode, features, inputs.table)
    test_dm = assemble(test_c, mode, features, inputs.table)
    rows = []
    for group in groups:
        stat_idx = tuple(range(len(FEATURE_NAMES))) if group == "all" else FEATURE_GROUPS[group]
        train_g = slice_columns(train_dm, stat_idx, keep_embedding=not statistical_only)
        test_g = slice_columns(test_dm, stat_idx, keep_embedding=not statistical_only)
        for model in config.models:
            row, _, _ = run_cell(
                inputs.dataset, mode, model, group, train_g, test_g,
                config.params, config.seed, config.n_jobs,
            )
            rows.append(row)
    return rows


def run_size_sweep(
    config: ExperimentConfig,
    fractions: tuple[float, ...] = SWEEP_FRACTIONS,
) -> list[ResultRow]:
    """Fixed test split; per fraction, a nested stratified subsample of the
    training documents feeds every configured (mode, model) pair."""
    for f in fractions:
        if not 0.0 < f <= 1.0:
            raise ConfigError(f"sweep fraction must be in (0,1], got {f}")
    inputs = load_inputs(config)
    features, train_c, test_c = _split_and_features(config, inputs)
    rows = []
    for fraction in fractions:
        sub_c = subsample(train_c, fraction, config.seed)
        scope = "all" if fraction == 1.0 else f"{fraction:g}"
        for mode in config.modes:
            train_dm = assemble(sub_c, mode, features, inputs.table)
            test_dm = assemble(test_c, mode, features, inputs.table)
            for model in config.models:
                row, _, _ = run_cell(
                    inputs.dataset, mode, model, scope, train_dm, test_dm,
                    config.params, config.seed, config.n_jobs,
                )
                rows.append(row)
    return rows


def summarize_ranges(
    corpus: Corpus,
    borrowed: Lexicon,
    sino: Lexicon,
    tags: TagMap = DEFAULT_TAGMAP,
) -> list[tuple[str, float, float]]:
    """Per-feature (min, max) across all documents, in feature order."""
    if not corpus.documents:
        raise ValueError("cannot summarize an empty corpus")
    feats = extract_corpus_features(corpus, borrowed, sino, tags)
    arr = np.array([fv.values() for fv in feats.values()], dtype=np.float64)
    mins = arr.min(axis=0)
    maxs = arr.max(axis=0)
    return [(name, float(mins[i]), float(maxs[i])) for i, name in enumerate(FEATURE_NAMES)]


def results_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["dataset", "mode", "model", "scope", "accuracy", "macro_f1"])
    for row in rows:
        writer.writerow(
            [row.dataset, row.mode, row.model, row.scope, repr(row.accuracy), repr(row.macro_f1)]
        )
    return buf.getvalue()


def results_json(rows: list[ResultRow]) -> str:
    payload = [
        {
            "dataset": row.dataset,
            "mode": row.mode,
            "model": row.model,
            "scope": row.scope,
            "accuracy": row.accuracy,
            "macro_f1": row.macro_f1,
            "report": row.report.to_dict(),
        }
        for row in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def render_rows(rows: list[ResultRow]) -> str:
    """Fixed-width 2-decimal table for eyeballing."""
    header = f"{'dataset':<16} {'mode':<12} {'model':<14} {'scope':<14} {'acc':>6} {'f1':>6}"
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{row.dataset:<16} {row.mode:<12} {row.model:<14} {row.scope:<14}"
            f" {row.accuracy:>6.2f} {row.macro_f1:>6.2f}"
        )
    return "\n".join(lines) + "\n"


def ranges_csv(ranges: list[tuple[str, float, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["feature", "min", "max"])
    for name, lo, hi in ranges:
        writer.writerow([name, repr(lo), repr(hi)])
    return buf.getvalue()


def write_results(rows: list[ResultRow], out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(results_csv(rows), encoding="utf-8")
    (out / "results.json").write_text(results_json(rows), encoding="utf-8")


@dataclass(frozen=True)
class TrainedBundle:
    """A fitted model plus everything needed to apply it to new documents."""

    model_name: str
    mode: str
    label_set: tuple[str, ...]
    column_names: tuple[str, ...]
    model: object
    standardizer: Standardizer | None
    params: TrainParams
    seed: int


def _bundle_for(
    inputs: LoadedInputs,
    features,
    config: ExperimentConfig,
    mode: str,
    name: str,
) -> TrainedBundle:
    dm = assemble(inputs.corpus, mode, features, inputs.table)
    fit_seed = derive_seed(config.seed, "fit", mode, name, "bundle")
    standardizer = None
    if name in STANDARDIZED_MODELS:
        standardizer = standardize_fit(dm)
        dm = standardize_apply(standardizer, dm)
    fitted = _fit(name, dm.X, dm.y, config.params, fit_seed, config.n_jobs)
    return TrainedBundle(
        model_name=name,
        mode=mode,
        label_set=dm.label_set,
        column_names=dm.column_names,
        model=fitted,
        standardizer=standardizer,
        params=config.params,
        seed=config.seed,
    )


def _pick_single(values: tuple[str, ...], override: str | None, what: str) -> str:
    if override is not None:
        return override
    if len(values) != 1:
        raise ConfigError(f"config lists {len(values)} {what}s; pass one explicitly")
    return values[0]


def train_bundle(
    config: ExperimentConfig,
    model_name: str | None = None,
    mode: str | None = None,
) -> TrainedBundle:
    """Fit one model on every labeled document (no held-out split)."""
    inputs = load_inputs(config)
    name = _pick_single(config.models, model_name, "model")
    mode = _pick_single(config.modes, mode, "mode")
    features = extract_corpus_features(inputs.corpus, inputs.borrowed, inputs.sino, inputs.tags)
    return _bundle_for(inputs, features, config, mode, name)


def train_models(config: ExperimentConfig) -> tuple[list[ResultRow], dict[str, TrainedBundle]]:
    """Held-out rows for every (mode, model) plus a deployable bundle per cell.

    Rows match run_experiment exactly; each bundle refits on all labeled
    documents, which is what one would actually ship.
    """
    inputs = load_inputs(config)
    features, train_c, test_c = _split_and_features(config, inputs)
    rows: list[ResultRow] = []
    bundles: dict[str, TrainedBundle] = {}
    for mode in config.modes:
        train_dm = assemble(train_c, mode, features, inputs.table)
        test_dm = assemble(test_c, mode, features, inputs.table)
        for model in config.models:
            row, _, _ = run_cell(
                inputs.dataset, mode, model, "all", train_dm, test_dm,
                config.params, config.seed, config.n_jobs,
            )
            rows.append(row)
            bundles[f"{mode}_{model}"] = _bundle_for(inputs, features, config, mode, model)
    return rows, bundles


def bundle_to_json(bundle: TrainedBundle) -> str:
    std = None
    if bundle.standardizer is not None:
        std = {
            "mean": bundle.standardizer.mean.tolist(),
            "std": bundle.standardizer.std.tolist(),
        }
    doc = {
        "format_version": BUNDLE_VERSION,
        "kind": "bundle",
        "model_name": bundle.model_name,
        "mode": bundle.mode,
        "label_set": list(bundle.label_set),
        "column_names": list(bundle.column_names),
        "standardizer": std,
        "model": model_to_dict(bundle.model),
        "params": bundle.params.to_dict(),
        "seed": bundle.seed,
    }
    return json.dumps(doc) + "\n"


def bundle_from_json(text: str) -> TrainedBundle:
    doc = json.loads(text)
    if doc.get("format_version") != BUNDLE_VERSION or doc.get("kind") != "bundle":
        raise ValueError("not a recognized training bundle")
    std = None
    if doc["standardizer"] is not None:
        mean = np.array(doc["standardizer"]["mean"], dtype=np.float64)
        stdv = np.array(doc["standardizer"]["std"], dtype=np.float64)
        std = Standardizer(mean=mean, std=stdv, zero_variance=stdv == 0.0)
    return TrainedBundle(
        model_name=doc["model_name"],
        mode=doc["mode"],
        label_set=tuple(doc["label_set"]),
        column_names=tuple(doc["column_names"]),
        model=model_from_dict(doc["model"]),
        standardizer=std,
        params=TrainParams.from_dict(doc["params"]),
        seed=int(doc["seed"]),
    )


def assemble_unlabeled(
    corpus: Corpus,
    mode: str,
    features=None,
    table: EmbeddingTable | None = None,
) -> tuple[np.ndarray, tuple[str, ...]]:
    """Design rows for every document, labeled or not (prediction path)."""
    docs = corpus.documents
    if not docs:
        raise ValueError("corpus has no documents")
    if mode in ("statistical", "joint") and features is None:
        raise ValueError(f"mode {mode!r} requires feature vectors")
    if mode in ("semantic", "joint") and table is None:
        raise ValueError(f"mode {mode!r} requires an embedding table")
    blocks = []
    if mode in ("statistical", "joint"):
        missing = [d.id for d in docs if d.id not in features]
        if missing:
            raise ValueError(f"missing feature vectors for: {', '.join(missing)}")
        blocks.append(np.array([features[d.id].values() for d in docs], dtype=np.float64))
    if mode in ("semantic", "joint"):
        missing = [d.id for d in docs if d.id not in table]
        if missing:
            raise ValueError(f"missing embeddings for: {', '.join(missing)}")
        blocks.append(np.stack([table.rows[d.id] for d in docs]).astype(np.float64))
    X = np.hstack(blocks) if len(blocks) > 1 else blocks[0]
    return X, tuple(d.id for d in docs)


def predict_with_bundle(bundle: TrainedBundle, inputs: LoadedInputs) -> list[tuple[str, str]]:
    features = None
    if bundle.mode in ("statistical", "joint"):
        features = extract_corpus_features(inputs.corpus, inputs.borrowed, inputs.sino, inputs.tags)
    X, doc_ids = assemble_unlabeled(inputs.corpus, bundle.mode, features, inputs.table)
    if X.shape[1] != len(bundle.column_names):
        raise ValueError(
            f"bundle expects {len(bundle.column_names)} columns, corpus yields {X.shape[1]}"
        )
    if bundle.standardizer is not None:
        X = bundle.standardizer.transform(X)
    y_pred = predict(bundle.model, X)
    return [(doc_id, bundle.label_set[int(c)]) for doc_id, c in zip(doc_ids, y_pred)]
