"""Document readability toolkit.

Parses annotated corpora, extracts the 14 statistical linguistic features,
fuses them with externally produced document embeddings, trains from-scratch
classifiers (trees, forests, linear SVM, MLP), and runs the evaluation /
ablation / data-size experiment protocols.
"""

from readlevel.corpus import (
    Corpus,
    Document,
    Sentence,
    Token,
    parse_conllu,
    parse_jsonl,
    parse_label_map,
    serialize_jsonl,
    stratified_split,
    subsample,
    syllable_count,
)
from readlevel.features import (
    FEATURE_GROUPS,
    FEATURE_NAMES,
    FeatureVector,
    Lexicon,
    TagMap,
    extract_corpus_features,
    extract_features,
    load_lexicon,
    load_tagmap,
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
from readlevel.evaluation import ConfusionMatrix, EvalReport, accuracy, confusion, evaluate, macro_f1
from readlevel.models import TrainParams

__all__ = [
    "Corpus",
    "Document",
    "Sentence",
    "Token",
    "parse_conllu",
    "parse_jsonl",
    "parse_label_map",
    "serialize_jsonl",
    "stratified_split",
    "subsample",
    "syllable_count",
    "FEATURE_GROUPS",
    "FEATURE_NAMES",
    "FeatureVector",
    "Lexicon",
    "TagMap",
    "extract_corpus_features",
    "extract_features",
    "load_lexicon",
    "load_tagmap",
    "DesignMatrix",
    "EmbeddingTable",
    "Standardizer",
    "assemble",
    "load_embedding_table",
    "standardize_apply",
    "standardize_fit",
    "ConfusionMatrix",
    "EvalReport",
    "accuracy",
    "confusion",
    "evaluate",
    "macro_f1",
    "TrainParams",
]

__version__ = "0.1.0"
