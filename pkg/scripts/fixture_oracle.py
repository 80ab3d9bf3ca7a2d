"""Compute the frozen feature oracle for the fixture corpus.

Standalone on purpose: this script parses the fixture files with its own
minimal code and counts every feature directly, so the checked-in
fixture_features.csv is an independent reference for the library. Do not
import the library here.

Run from the repo root:  python scripts/fixture_oracle.py
"""

import csv
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
FIX = os.path.join(HERE, "..", "tests", "fixtures")

COMMON_NOUN = {"N"}
COORD_CONJ = {"Cc"}
SUBORD_CONJ = {"C"}
ADVERB = {"R"}


def read_conllu(path):
    docs = []  # (doc_id, [ [ (surface,pos,head) ... ] ... ])
    cur_id, cur_doc, cur_sent = None, None, []
    with open(path, encoding="utf-8") as f:
        for raw in f:
            line = raw.rstrip("\n")
            if line.startswith("#"):
                if "newdoc id =" in line:
                    if cur_sent:
                        cur_doc.append(cur_sent)
                        cur_sent = []
                    if cur_id is not None:
                        docs.append((cur_id, cur_doc))
                    cur_id = line.split("=", 1)[1].strip()
                    cur_doc = []
                continue
            if not line.strip():
                if cur_sent:
                    cur_doc.append(cur_sent)
                    cur_sent = []
                continue
            cols = line.split("\t")
            assert len(cols) == 10, line
            cur_sent.append((cols[1], cols[3], int(cols[6])))
    if cur_sent:
        cur_doc.append(cur_sent)
    if cur_id is not None:
        docs.append((cur_id, cur_doc))
    return docs


def read_lexicon(path):
    entries = set()
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                entries.add(line.lower())
    return entries


def read_labels(path):
    labels = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if line:
                doc_id, label = line.split("\t")
                labels[doc_id] = label
    return labels


def syllables(surface):
    return surface.count("_") + 1


def node_depth(sent, i):
    # nodes on the path from the root down to token i (1-based), inclusive
    depth = 1
    head = sent[i - 1][2]
    while head != 0:
        depth += 1
        head = sent[head - 1][2]
    return depth


def doc_features(sents, borrowed, sino):
    tokens = [t for s in sents for t in s]
    n_tok = len(tokens)
    n_sent = len(sents)

    num_words = float(n_tok)
    avg_word_len = sum(len(t[0].replace("_", "")) for t in tokens) / n_tok
    long_ratio = sum(
        1 for s in sents if sum(syllables(t[0]) for t in s) > 20
    ) / n_sent

    types = {}
    for surface, pos, _head in tokens:
        types.setdefault(surface.lower(), set()).add(pos)
    n_types = len(types)

    noun_types = sum(1 for ps in types.values() if ps & COMMON_NOUN)
    cc_types = sum(1 for ps in types.values() if ps & COORD_CONJ)
    single_pos = sum(1 for ps in types.values() if len(ps) == 1)
    adverbs = sum(1 for t in tokens if t[1] in ADVERB)

    conj_tags = COORD_CONJ | SUBORD_CONJ
    conj_tokens = sum(1 for t in tokens if t[1] in conj_tags)
    conj_types = sum(1 for ps in types.values() if ps & conj_tags)

    borrowed_tokens = sum(1 for t in tokens if t[0].lower() in borrowed)
    borrowed_types = sum(1 for ty in types if ty in borrowed)
    sino_types = sum(1 for ty in types if ty in sino)

    depths = [max(node_depth(s, i) for i in range(1, len(s) + 1)) for s in sents]
    mean_depth = sum(depths) / n_sent

    sets = [set(t[0].lower() for t in s) for s in sents]
    if n_sent < 2:
        overlap = 0.0
    else:
        pair_counts = [
            len(sets[i] & sets[j])
            for i in range(n_sent)
            for j in range(i + 1, n_sent)
        ]
        overlap = sum(pair_counts) / len(pair_counts)

    return [
        num_words,
        avg_word_len,
        long_ratio,
        noun_types / n_types,
        cc_types / n_types,
        single_pos / n_types,
        adverbs / n_sent,
        float(conj_types),
        float(conj_tokens),
        borrowed_tokens / n_tok,
        borrowed_types / n_types,
        sino_types / n_types,
        mean_depth,
        overlap,
    ]


NAMES = [
    "num_words",
    "avg_word_len_chars",
    "long_sentence_ratio",
    "distinct_common_nouns_ratio",
    "distinct_parallel_conj_ratio",
    "single_pos_tag_ratio",
    "adverbs_per_sentence",
    "distinct_conjunction_count",
    "conjunction_count",
    "borrowed_ratio",
    "distinct_borrowed_ratio",
    "distinct_sino_ratio",
    "mean_dependency_depth",
    "mean_sentence_overlap",
]


def main():
    docs = read_conllu(os.path.join(FIX, "fixture_corpus.conllu"))
    borrowed = read_lexicon(os.path.join(FIX, "lexicon_borrowed.txt"))
    sino = read_lexicon(os.path.join(FIX, "lexicon_sino.txt"))
    labels = read_labels(os.path.join(FIX, "fixture_labels.tsv"))

    feats = {doc_id: doc_features(sents, borrowed, sino) for doc_id, sents in docs}

    # hand-checked anchors (worked out on paper before freezing the oracle)
    f = {n: dict(zip(NAMES, feats[n])) for n in feats}
    assert f["fx01"]["long_sentence_ratio"] == 0.5  # 21-syllable S1, 5-syllable S2
    assert f["fx01"]["num_words"] == 16.0
    assert f["fx02"]["mean_dependency_depth"] == 2.0  # depths 1 (single), 3 (chain), 2 (star)
    assert abs(f["fx03"]["mean_sentence_overlap"] - 2.0 / 3.0) < 1e-15
    assert f["fx04"]["distinct_common_nouns_ratio"] == 0.5
    assert f["fx04"]["distinct_parallel_conj_ratio"] == 0.25
    assert f["fx04"]["single_pos_tag_ratio"] == 1.0
    assert f["fx04"]["adverbs_per_sentence"] == 0.0
    assert f["fx05"]["single_pos_tag_ratio"] == 0.5  # "cuốc" seen as V and N
    assert f["fx06"]["distinct_conjunction_count"] == 2.0
    assert f["fx06"]["conjunction_count"] == 3.0
    assert f["fx07"]["borrowed_ratio"] == 0.2
    assert f["fx07"]["distinct_borrowed_ratio"] == 0.125
    assert f["fx08"]["distinct_sino_ratio"] == 1.0
    assert f["fx09"]["adverbs_per_sentence"] == 1.0
    assert f["fx11"]["mean_sentence_overlap"] == 2.0  # identical 2-type sentences
    assert f["fx12"]["long_sentence_ratio"] == 1.0 / 3.0

    out = os.path.join(FIX, "fixture_features.csv")
    with open(out, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["doc_id", "label"] + NAMES)
        for doc_id, _ in docs:
            w.writerow([doc_id, labels[doc_id]] + [repr(v) for v in feats[doc_id]])
    print(f"wrote {out} ({len(docs)} documents)")


if __name__ == "__main__":
    sys.exit(main())
