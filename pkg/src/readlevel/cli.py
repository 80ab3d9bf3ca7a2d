"""Command-line interface.

Subcommands: extract, train, evaluate, predict, ablate, sweep, ranges.
A JSON config file (--config) can carry any ExperimentConfig field; explicit
flags override file values. All outputs are deterministic in the seed,
including under --jobs > 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from readlevel.corpus import CorpusError
from readlevel.features import FEATURE_NAMES, extract_corpus_features
from readlevel.harness import (
    ConfigError,
    ExperimentConfig,
    bundle_from_json,
    bundle_to_json,
    load_inputs,
    predict_with_bundle,
    ranges_csv,
    render_rows,
    run_ablation,
    run_experiment,
    run_size_sweep,
    summarize_ranges,
    train_models,
    write_results,
)
from readlevel.models.params import TrainParams

_CONFIG_FLAGS = {
    "corpus": "corpus_path",
    "format": "corpus_format",
    "labels": "labels_path",
    "lexicon_borrowed": "lexicon_borrowed_path",
    "lexicon_sino": "lexicon_sino_path",
    "tagmap": "tagmap_path",
    "embeddings": "embeddings_path",
    "seed": "seed",
    "test_fraction": "test_fraction",
    "jobs": "n_jobs",
    "dataset": "dataset",
    "out": "out_dir",
}


def _add_input_flags(sub: argparse.ArgumentParser, with_embeddings: bool = True):
    sub.add_argument("--config", help="JSON file of config fields; flags override it")
    sub.add_argument("--corpus", help="corpus file")
    sub.add_argument("--format", choices=("conllu", "jsonl"), help="corpus format")
    sub.add_argument("--labels", help="doc_id<TAB>label file attaching labels")
    sub.add_argument("--lexicon-borrowed", dest="lexicon_borrowed", help="borrowed-word lexicon")
    sub.add_argument("--lexicon-sino", dest="lexicon_sino", help="Sino-Vietnamese lexicon")
    sub.add_argument("--tagmap", help="role=tag[,tag...] file remapping POS roles")
    if with_embeddings:
        sub.add_argument("--embeddings", help="precomputed embedding table")
    sub.add_argument("--dataset", help="dataset name used in result rows")


def _add_run_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--mode", help="statistical, semantic or joint (comma list allowed)")
    sub.add_argument("--model", help="model name(s), comma separated")
    sub.add_argument("--seed", type=int, help="run seed")
    sub.add_argument("--test-fraction", dest="test_fraction", type=float, help="held-out share")
    sub.add_argument("--jobs", type=int, help="worker threads for forest fitting")
    sub.add_argument("--params", help="JSON file of training hyperparameters")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="readlevel",
        description="Readability features, embedding fusion, classifiers, experiment protocols.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("extract", help="write the per-document feature CSV")
    _add_input_flags(p, with_embeddings=False)
    p.add_argument("--out", help="output CSV path (default: stdout)")

    p = subs.add_parser("train", help="score each configured mode and model, then save refitted bundles")
    _add_input_flags(p)
    _add_run_flags(p)
    p.add_argument("--out", required=True, help="directory for results.csv/.json and model_<mode>_<model>.json files")

    p = subs.add_parser("evaluate", help="split, fit and score each configured mode and model")
    _add_input_flags(p)
    _add_run_flags(p)
    p.add_argument("--out", help="directory for results.csv / results.json")

    p = subs.add_parser("predict", help="label documents with a trained bundle")
    _add_input_flags(p)
    p.add_argument("--model", required=True, help="bundle file from `train`")
    p.add_argument("--out", help="output CSV path (default: stdout)")

    p = subs.add_parser("ablate", help="score each feature group on the joint matrix")
    _add_input_flags(p)
    _add_run_flags(p)
    p.add_argument("--statistical-only", action="store_true",
                   help="ablate within the statistical mode (drop the embedding block)")
    p.add_argument("--out", help="directory for results.csv / results.json")

    p = subs.add_parser("sweep", help="vary the training-set size over nested subsamples")
    _add_input_flags(p)
    _add_run_flags(p)
    p.add_argument("--fractions", default="0.25,0.5,0.75", help="comma list of fractions")
    p.add_argument("--out", help="directory for results.csv / results.json")

    p = subs.add_parser("ranges", help="per-feature min/max across the corpus")
    _add_input_flags(p, with_embeddings=False)
    p.add_argument("--out", help="output CSV path (default: stdout)")

    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    data: dict = {}
    if getattr(args, "config", None):
        data.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
    for flag, field in _CONFIG_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            data[field] = value
    if getattr(args, "mode", None):
        data["modes"] = tuple(m.strip() for m in args.mode.split(",") if m.strip())
    if getattr(args, "model", None) and args.command != "predict":
        data["models"] = tuple(m.strip() for m in args.model.split(",") if m.strip())
    if getattr(args, "params", None):
        data["params"] = json.loads(Path(args.params).read_text(encoding="utf-8"))
    if isinstance(data.get("params"), dict):
        data["params"] = TrainParams.from_dict(data["params"])
    return ExperimentConfig.from_dict(data)


def _write_or_print(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _features_csv(corpus, features) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["doc_id", "label", *FEATURE_NAMES])
    for doc in corpus.documents:
        fv = features[doc.id]
        writer.writerow([doc.id, doc.label or "", *[repr(v) for v in fv.values()]])
    return buf.getvalue()


def _emit_rows(rows, out_dir: str | None):
    if out_dir:
        write_results(rows, out_dir)
    sys.stdout.write(render_rows(rows))


def _run(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    if args.command == "extract":
        inputs = load_inputs(config)
        features = extract_corpus_features(inputs.corpus, inputs.borrowed, inputs.sino, inputs.tags)
        _write_or_print(_features_csv(inputs.corpus, features), args.out)
    elif args.command == "ranges":
        inputs = load_inputs(config)
        ranges = summarize_ranges(inputs.corpus, inputs.borrowed, inputs.sino, inputs.tags)
        _write_or_print(ranges_csv(ranges), args.out)
    elif args.command == "train":
        rows, bundles = train_models(config)
        out = Path(args.out)
        write_results(rows, out)
        for key, bundle in bundles.items():
            (out / f"model_{key}.json").write_text(bundle_to_json(bundle), encoding="utf-8")
        sys.stdout.write(render_rows(rows))
    elif args.command == "predict":
        bundle = bundle_from_json(Path(args.model).read_text(encoding="utf-8"))
        inputs = load_inputs(config)
        pairs = predict_with_bundle(bundle, inputs)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["doc_id", "predicted_label"])
        writer.writerows(pairs)
        _write_or_print(buf.getvalue(), args.out)
    elif args.command == "evaluate":
        _emit_rows(run_experiment(config), config.out_dir)
    elif args.command == "ablate":
        _emit_rows(run_ablation(config, statistical_only=args.statistical_only), config.out_dir)
    elif args.command == "sweep":
        fractions = tuple(float(f) for f in args.fractions.split(",") if f.strip())
        _emit_rows(run_size_sweep(config, fractions), config.out_dir)
    else:
        raise ConfigError(f"unknown command {args.command!r}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (CorpusError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
