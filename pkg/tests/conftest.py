"""Shared fixtures: bundled hand-annotated corpus, synthetic corpora, random documents."""
import json
from pathlib import Path

import numpy as np
import pytest

from readlevel import (
    Corpus,
    Document,
    Lexicon,
    Sentence,
    Token,
    load_lexicon,
    load_tagmap,
    parse_conllu,
    parse_label_map,
    serialize_jsonl,
)
from readlevel.embeddings import serialize_embedding_table
from readlevel.synthetic import make_corpus, make_noise_embeddings

FIXTURE_DIR = Path(__file__).parent / "fixtures"

# kept small so corpus-level property tests stay fast; acceptance uses its own sizes
SYNTH_N_PER_CLASS = 20
SYNTH_SEED = 0
SYNTH_EMB_DIM = 16


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def fixture_corpus():
    text = (FIXTURE_DIR / "fixture_corpus.conllu").read_text(encoding="utf-8")
    labels = parse_label_map((FIXTURE_DIR / "fixture_labels.tsv").read_text(encoding="utf-8"))
    return parse_conllu(text, label_map=labels, name="fixture")


@pytest.fixture(scope="session")
def borrowed_lexicon():
    return load_lexicon((FIXTURE_DIR / "lexicon_borrowed.txt").read_text(encoding="utf-8"), "borrowed")


@pytest.fixture(scope="session")
def sino_lexicon():
    return load_lexicon((FIXTURE_DIR / "lexicon_sino.txt").read_text(encoding="utf-8"), "sino_vietnamese")


@pytest.fixture(scope="session")
def fixture_tagmap():
    return load_tagmap((FIXTURE_DIR / "tagmap.txt").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def oracle_rows():
    """doc_id -> (label, 14 floats) parsed from the precomputed feature table."""
    lines = (FIXTURE_DIR / "fixture_features.csv").read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    assert header[0] == "doc_id" and header[1] == "label"
    out = {}
    for line in lines[1:]:
        parts = line.split(",")
        out[parts[0]] = (parts[1], np.array([float(v) for v in parts[2:]]))
    return out


@pytest.fixture(scope="session")
def synth_data():
    return make_corpus(n_per_class=SYNTH_N_PER_CLASS, seed=SYNTH_SEED)


@pytest.fixture(scope="session")
def synth_table(synth_data):
    return make_noise_embeddings(synth_data.corpus, dim=SYNTH_EMB_DIM, seed=SYNTH_SEED)


@pytest.fixture(scope="session")
def synth_files(tmp_path_factory, synth_data, synth_table):
    """Synthetic corpus written to disk in every format the CLI consumes."""
    root = tmp_path_factory.mktemp("synth")
    (root / "corpus.jsonl").write_text(serialize_jsonl(synth_data.corpus), encoding="utf-8")
    (root / "borrowed.txt").write_text("\n".join(sorted(synth_data.borrowed_words)) + "\n", encoding="utf-8")
    (root / "sino.txt").write_text("\n".join(sorted(synth_data.sino_words)) + "\n", encoding="utf-8")
    (root / "embeddings.tsv").write_text(serialize_embedding_table(synth_table), encoding="utf-8")
    (root / "params.json").write_text(
        json.dumps({"n_trees": 25, "svm_epochs": 30, "mlp_epochs": 40, "mlp_hidden": 32}),
        encoding="utf-8",
    )
    return root


POS_POOL = ("N", "V", "A", "R", "C", "Cc", "P", "M")
SYL_POOL = tuple(
    c + v for c in ("b", "c", "d", "g", "h", "k", "l", "m", "n", "p", "r", "s", "t", "v")
    for v in ("a", "e", "i", "o", "u", "ai", "ao", "inh", "uong")
)


def random_document(rng: np.random.Generator, doc_id: str, label=None) -> Document:
    """Structurally valid document with randomized shape; used for range fuzzing."""
    sentences = []
    for _ in range(int(rng.integers(1, 6))):
        n = int(rng.integers(1, 12))
        tokens = []
        for i in range(1, n + 1):
            n_syl = int(rng.integers(1, 4))
            surface = "_".join(SYL_POOL[int(k)] for k in rng.integers(0, len(SYL_POOL), size=n_syl))
            # parent strictly earlier keeps the tree acyclic with a single root at id 1
            head = 0 if i == 1 else int(rng.integers(1, i))
            pos = POS_POOL[int(rng.integers(0, len(POS_POOL)))]
            tokens.append(Token(id=i, surface=surface, pos=pos, head=head, deprel="dep"))
        sentences.append(Sentence(tokens=tuple(tokens)))
    return Document(id=doc_id, sentences=tuple(sentences), label=label)


def random_lexicon(rng: np.random.Generator, kind: str, size: int = 30) -> Lexicon:
    entries = set()
    while len(entries) < size:
        n_syl = int(rng.integers(1, 3))
        entries.add("_".join(SYL_POOL[int(k)] for k in rng.integers(0, len(SYL_POOL), size=n_syl)))
    return Lexicon(kind=kind, entries=frozenset(entries))
