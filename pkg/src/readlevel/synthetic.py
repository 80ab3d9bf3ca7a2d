"""Synthetic benchmark data: Gaussian blobs and a constructed corpus.

The corpus generator builds three readability classes whose documents differ
ONLY in how many syllables their content words carry (the class mix below).
Sentence count, token counts, conjunction/adverb/lexicon allocation, tree
shape and sentence overlap all follow class-independent processes, so the
raw group (word length in characters, long-sentence ratio) is the only
feature group carrying class signal. Several features are exactly constant
by construction (single POS ratio 1.0, adverbs/sentence 1.0, dependency
depth 3.0, overlap 2.0, conjunction counts 20), which also exercises the
zero-variance paths in standardization and tree splitting.

Constructed guarantees, per document:
  - every sentence has >= 4 tokens: ids 1<-2<-3 form a chain, the rest hang
    off the root, so dependency depth is exactly 3;
  - two theme words appear in every sentence and nothing else repeats
    across sentences, so pairwise overlap is exactly 2 and the number of
    word types is exactly (tokens - 18);
  - word pools are disjoint syllable slices, so lexicon bookkeeping is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from readlevel.corpus import Corpus, Document, Sentence, Token
from readlevel.embeddings import EmbeddingTable
from readlevel.rng import derived_rng

_ONSETS = (
    "b", "c", "ch", "d", "g", "h", "k", "kh", "l", "m",
    "n", "ng", "nh", "p", "ph", "qu", "r", "s", "t", "th",
    "tr", "v", "x", "dz",
)
_RHYMES = (
    "a", "am", "an", "ang", "anh", "ao", "au", "ay", "e", "em",
    "en", "eo", "i", "ich", "im", "in", "inh", "o", "oc", "on",
    "ong", "u", "uc", "ung", "uong", "y",
)
_SYLLABLES = tuple(o + r for o in _ONSETS for r in _RHYMES)

_CONTENT = _SYLLABLES[0:360]
_BORROWED_POOL = tuple(
    a + "_" + b for a in _SYLLABLES[360:400] for b in _SYLLABLES[400:410]
)
_SINO_POOL = tuple(
    a + "_" + b for a in _SYLLABLES[440:480] for b in _SYLLABLES[480:490]
)
_THEME_POOL = _SYLLABLES[520:560]
_ADVERB_POOL = tuple(
    a + "_" + b for a in _SYLLABLES[560:576] for b in _SYLLABLES[576:592]
)
_CC_POOL = tuple(a + "_" + b for a in _SYLLABLES[592:600] for b in _SYLLABLES[600:608])
_C_POOL = tuple(a + "_" + b for a in _SYLLABLES[608:616] for b in _SYLLABLES[616:624])

LABELS = ("easy", "medium", "hard")

# probability of a content word having 1, 2 or 3 syllables, per class
_SYLLABLE_MIX = {
    "easy": (0.9, 0.1, 0.0),
    "medium": (0.1, 0.8, 0.1),
    "hard": (0.0, 0.15, 0.85),
}

_SENTENCE_WORDS = (6, 8, 10, 12, 14, 16, 18, 20, 24, 28)


def make_blobs(
    n_per_class: int,
    n_features: int,
    n_classes: int,
    seed: int,
    separation: float = 6.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Spherical unit-noise Gaussian blobs on axis-aligned centers.

    With the default separation the classes are essentially non-overlapping,
    so a sound classifier should approach 100% held-out accuracy. Rows come
    back shuffled.
    """
    if n_classes > n_features:
        raise ValueError("need n_features >= n_classes for axis-aligned centers")
    rng = derived_rng(seed, "blobs")
    centers = np.zeros((n_classes, n_features))
    centers[np.arange(n_classes), np.arange(n_classes)] = separation
    y = np.repeat(np.arange(n_classes), n_per_class)
    X = centers[y] + rng.normal(size=(y.size, n_features))
    order = rng.permutation(y.size)
    return X[order], y[order]


@dataclass(frozen=True)
class SyntheticData:
    corpus: Corpus
    borrowed_words: tuple[str, ...]
    sino_words: tuple[str, ...]


def _fresh_content_word(rng, n_syllables: int, used: set[str]) -> str:
    while True:
        parts = rng.choice(len(_CONTENT), size=n_syllables, replace=True)
        word = "_".join(_CONTENT[i] for i in parts)
        if word not in used:
            used.add(word)
            return word


def _sample(rng, pool: tuple[str, ...], count: int) -> list[str]:
    picks = rng.choice(len(pool), size=count, replace=False)
    return [pool[i] for i in picks]


def _make_document(doc_id: str, label: str, rng) -> Document:
    mix = np.array(_SYLLABLE_MIX[label])
    words_per_sentence = [
        int(base + rng.integers(-2, 3)) for base in _SENTENCE_WORDS
    ]
    n_sent = len(words_per_sentence)
    pool_slots = sum(words_per_sentence) - 4 * n_sent

    n_borrowed = round(0.08 * pool_slots)
    n_sino = round(0.08 * pool_slots)
    n_cc = int(rng.integers(2, 7))
    n_c = 20 - n_cc
    n_noun = round(0.35 * pool_slots)
    n_verb = pool_slots - n_borrowed - n_sino - n_cc - n_c - n_noun
    if n_verb < 0:
        raise ValueError("sentence profile too small for the slot allocation")

    used: set[str] = set()
    theme = _sample(rng, _THEME_POOL, 2)
    adverbs = _sample(rng, _ADVERB_POOL, n_sent)
    borrowed = _sample(rng, _BORROWED_POOL, n_borrowed)
    sino = _sample(rng, _SINO_POOL, n_sino)
    cc = _sample(rng, _CC_POOL, n_cc)
    c = _sample(rng, _C_POOL, n_c)

    def content(pos: str) -> tuple[str, str]:
        n_syl = int(rng.choice(3, p=mix)) + 1
        return _fresh_content_word(rng, n_syl, used), pos

    pool: list[tuple[str, str]] = []
    pool += [content("N") for _ in range(n_noun)]
    pool += [content("V") for _ in range(n_verb)]
    pool += [(w, "X") for w in borrowed + sino]
    pool += [(w, "Cc") for w in cc]
    pool += [(w, "C") for w in c]
    order = rng.permutation(len(pool))
    pool = [pool[i] for i in order]

    sentences = []
    cursor = 0
    for s_i, n_words in enumerate(words_per_sentence):
        take = n_words - 4
        rest = [(theme[0], "E"), (theme[1], "E"), (adverbs[s_i], "R")]
        rest += pool[cursor : cursor + take]
        cursor += take
        shuffle = rng.permutation(len(rest))
        rest = [rest[i] for i in shuffle]
        surfaces = [content("V")] + rest
        tokens = []
        for t_i, (surface, pos) in enumerate(surfaces, start=1):
            if t_i == 1:
                head, deprel = 0, "root"
            elif t_i in (2, 3):
                head, deprel = t_i - 1, "dep"
            else:
                head, deprel = 1, "dep"
            tokens.append(Token(t_i, surface, pos, head, deprel))
        sentences.append(Sentence(tuple(tokens)))
    if cursor != len(pool):
        raise ValueError("slot accounting is off")
    return Document(doc_id, tuple(sentences), label)


def make_corpus(n_per_class: int = 40, seed: int = 0) -> SyntheticData:
    documents = []
    index = 0
    for label in LABELS:
        for _ in range(n_per_class):
            doc_id = f"syn{index:04d}"
            documents.append(_make_document(doc_id, label, derived_rng(seed, "doc", index)))
            index += 1
    corpus = Corpus("synthetic", LABELS, tuple(documents))
    return SyntheticData(corpus, _BORROWED_POOL, _SINO_POOL)


def make_noise_embeddings(corpus: Corpus, dim: int, seed: int) -> EmbeddingTable:
    """Standard-normal rows independent of the labels; pure distractor."""
    rows = {
        doc.id: derived_rng(seed, "noise_emb", doc.id).normal(size=dim)
        for doc in corpus.documents
    }
    return EmbeddingTable(dim=dim, rows=rows, source_tag="noise")
