"""Annotated corpora: parsing, validation, stratified splitting/subsampling.

Documents arrive pre-segmented and pre-parsed (CoNLL-U or a JSONL mirror);
multi-syllable words join their syllables with underscores ("học_sinh").
All values are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

from readlevel.rng import derived_rng


class CorpusError(Exception):
    pass


class ParseError(CorpusError):
    """Malformed input text (bad column count, bad JSON, missing header)."""


class ValidationError(CorpusError):
    """Structurally parseable input that violates a corpus invariant."""


@dataclass(frozen=True)
class Token:
    id: int
    surface: str
    pos: str
    head: int
    deprel: str

    def __post_init__(self):
        if not self.surface or any(c.isspace() for c in self.surface):
            raise ValidationError(f"token {self.id}: surface must be non-empty without whitespace")
        if self.head == self.id:
            raise ValidationError(f"token {self.id}: head must not point at itself")
        if self.head < 0:
            raise ValidationError(f"token {self.id}: head must be >= 0")


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __post_init__(self):
        n = len(self.tokens)
        if n == 0:
            raise ValidationError("sentence has no tokens")
        for i, tok in enumerate(self.tokens, start=1):
            if tok.id != i:
                raise ValidationError(f"token ids must be 1..{n} in order, got {tok.id} at position {i}")
            if tok.head > n:
                raise ValidationError(f"token {tok.id}: head {tok.head} out of range for {n} tokens")
        roots = [t.id for t in self.tokens if t.head == 0]
        if len(roots) != 1:
            raise ValidationError(f"sentence must have exactly one root, found {len(roots)}")
        # every token must reach the root by following heads (no cycles)
        for tok in self.tokens:
            seen = set()
            cur = tok.id
            while cur != 0:
                if cur in seen:
                    raise ValidationError(f"head cycle involving token {tok.id}")
                seen.add(cur)
                cur = self.tokens[cur - 1].head


@dataclass(frozen=True)
class Document:
    id: str
    sentences: tuple[Sentence, ...]
    label: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValidationError("document id must be non-empty")
        if not self.sentences:
            raise ValidationError(f"document {self.id!r}: at least one sentence required")

    def tokens(self):
        for sentence in self.sentences:
            yield from sentence.tokens


@dataclass(frozen=True)
class Corpus:
    name: str
    label_set: tuple[str, ...]
    documents: tuple[Document, ...] = field(default=())

    def __post_init__(self):
        if len(set(self.label_set)) != len(self.label_set):
            raise ValidationError("label_set entries must be distinct")
        seen = set()
        allowed = set(self.label_set)
        for doc in self.documents:
            if doc.id in seen:
                raise ValidationError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
            if doc.label is not None and doc.label not in allowed:
                raise ValidationError(f"document {doc.id!r}: unknown label {doc.label!r}")

    def __len__(self):
        return len(self.documents)

    def labeled(self) -> tuple[Document, ...]:
        return tuple(d for d in self.documents if d.label is not None)


def syllable_count(surface: str) -> int:
    """Syllables of a segmented word: 1 + its underscore separators."""
    return surface.count("_") + 1


def _derive_label_set(documents, declared):
    if declared is not None:
        return tuple(declared)
    seen = []
    for doc in documents:
        if doc.label is not None and doc.label not in seen:
            seen.append(doc.label)
    return tuple(seen)


_NEWDOC_RE = re.compile(r"^#\s*newdoc id\s*=\s*(.+?)\s*$")


def parse_conllu(
    text: str,
    label_map: dict[str, str] | None = None,
    name: str = "",
    label_set: list[str] | tuple[str, ...] | None = None,
) -> Corpus:
    """Parse CoNLL-U-style text into a validated Corpus.

    Ten tab-separated columns per token row; a blank line ends a sentence;
    ``# newdoc id = <id>`` starts a document. Token fields come from the
    ID, FORM, UPOS, HEAD and DEPREL columns. ``label_map`` attaches labels
    by document id; ids in the map but not in the text are ignored.
    """
    label_map = label_map or {}
    documents: list[Document] = []
    doc_id: str | None = None
    sentences: list[Sentence] = []
    rows: list[tuple[int, Token]] = []

    def close_sentence():
        nonlocal rows
        if not rows:
            return
        line_no = rows[0][0]
        try:
            sentences.append(Sentence(tuple(tok for _, tok in rows)))
        except ValidationError as err:
            raise ValidationError(
                f"document {doc_id!r}, sentence {len(sentences) + 1} (line {line_no}): {err}"
            ) from None
        rows = []

    def close_document():
        if doc_id is None:
            return
        close_sentence()
        try:
            documents.append(Document(doc_id, tuple(sentences), label_map.get(doc_id)))
        except ValidationError as err:
            raise ValidationError(str(err)) from None
        sentences.clear()

    for line_no, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#"):
            match = _NEWDOC_RE.match(line)
            if match:
                close_document()
                doc_id = match.group(1)
            continue
        if not line.strip():
            close_sentence()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ParseError(f"line {line_no}: expected 10 tab-separated columns, got {len(cols)}")
        if doc_id is None:
            raise ParseError(f"line {line_no}: token row before any '# newdoc id =' marker")
        try:
            tok_id, head = int(cols[0]), int(cols[6])
        except ValueError:
            raise ParseError(f"line {line_no}: ID and HEAD must be integers") from None
        try:
            rows.append((line_no, Token(tok_id, cols[1], cols[3], head, cols[7])))
        except ValidationError as err:
            raise ValidationError(f"document {doc_id!r} (line {line_no}): {err}") from None
    close_document()

    return Corpus(name, _derive_label_set(documents, label_set), tuple(documents))


def parse_label_map(text: str) -> dict[str, str]:
    """Two-column TSV ``doc_id<TAB>label``; blank and ``#`` lines ignored."""
    out: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(f"line {line_no}: expected 'doc_id<TAB>label'")
        out[parts[0]] = parts[1]
    return out


def parse_jsonl(
    text: str,
    name: str | None = None,
    label_set: list[str] | tuple[str, ...] | None = None,
) -> Corpus:
    """Parse the JSONL mirror format.

    One document object per line: ``{"id": ..., "label": ..., "sentences":
    [[{"surface","pos","head","deprel"}, ...], ...]}``. An optional leading
    header object ``{"corpus": ..., "label_set": [...]}`` carries corpus
    metadata so serialize_jsonl round-trips exactly.
    """
    documents: list[Document] = []
    first_data_seen = False
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as err:
            raise ParseError(f"line {line_no}: invalid JSON ({err.msg})") from None
        if not isinstance(obj, dict):
            raise ParseError(f"line {line_no}: expected a JSON object")
        if "corpus" in obj and "id" not in obj:
            if first_data_seen or documents:
                raise ParseError(f"line {line_no}: header object must be the first line")
            if name is None:
                name = obj.get("corpus", "")
            if label_set is None and "label_set" in obj:
                label_set = obj["label_set"]
            first_data_seen = True
            continue
        first_data_seen = True
        try:
            doc_id = obj["id"]
            raw_sentences = obj["sentences"]
        except KeyError as err:
            raise ParseError(f"line {line_no}: missing field {err.args[0]!r}") from None
        try:
            sentences = tuple(
                Sentence(
                    tuple(
                        Token(i, t["surface"], t["pos"], t["head"], t["deprel"])
                        for i, t in enumerate(sent, start=1)
                    )
                )
                for sent in raw_sentences
            )
            documents.append(Document(doc_id, sentences, obj.get("label")))
        except ValidationError as err:
            raise ValidationError(f"document {doc_id!r} (line {line_no}): {err}") from None
        except (KeyError, TypeError) as err:
            raise ParseError(f"line {line_no}: malformed sentence structure ({err})") from None
    return Corpus(name or "", _derive_label_set(documents, label_set), tuple(documents))


def serialize_jsonl(corpus: Corpus) -> str:
    """Inverse of parse_jsonl: header line plus one object per document."""
    lines = [
        json.dumps(
            {"corpus": corpus.name, "label_set": list(corpus.label_set)},
            ensure_ascii=False,
        )
    ]
    for doc in corpus.documents:
        obj: dict = {"id": doc.id}
        if doc.label is not None:
            obj["label"] = doc.label
        obj["sentences"] = [
            [
                {"surface": t.surface, "pos": t.pos, "head": t.head, "deprel": t.deprel}
                for t in sent.tokens
            ]
            for sent in doc.sentences
        ]
        lines.append(json.dumps(obj, ensure_ascii=False))
    return "\n".join(lines) + "\n"


def _round_half_up(x: float) -> int:
    # round to 9 decimals first so binary-float noise cannot flip the half
    return int(math.floor(round(x, 9) + 0.5))


def _by_class(corpus: Corpus, require_min: int = 1):
    groups: dict[str, list[Document]] = {label: [] for label in corpus.label_set}
    for doc in corpus.documents:
        if doc.label is None:
            raise ValidationError(f"document {doc.id!r} is unlabeled")
        groups[doc.label].append(doc)
    for label, docs in groups.items():
        if len(docs) < require_min:
            raise ValidationError(f"class {label!r} has {len(docs)} documents, need >= {require_min}")
    return groups


def stratified_split(corpus: Corpus, test_fraction: float, seed: int) -> tuple[Corpus, Corpus]:
    """Deterministic per-class split; test gets round-half-up(fraction*n_c),
    clamped so both sides keep at least one document per class."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0,1), got {test_fraction}")
    groups = _by_class(corpus, require_min=2)
    rng = derived_rng(seed, "stratified_split")
    train: list[Document] = []
    test: list[Document] = []
    for label in corpus.label_set:
        docs = groups[label]
        k = min(max(_round_half_up(test_fraction * len(docs)), 1), len(docs) - 1)
        order = rng.permutation(len(docs))
        test.extend(docs[i] for i in order[:k])
        train.extend(docs[i] for i in order[k:])
    rng.shuffle(train)
    rng.shuffle(test)
    return (
        Corpus(corpus.name, corpus.label_set, tuple(train)),
        Corpus(corpus.name, corpus.label_set, tuple(test)),
    )


def subsample(corpus: Corpus, fraction: float, seed: int) -> Corpus:
    """Stratified subset keeping round-half-up(fraction*n_c), min 1, per class.

    Nested in the fraction: at a fixed seed each class is permuted once and a
    prefix is kept, so subsample(c, f1, s) ⊆ subsample(c, f2, s) for f1 <= f2.
    Document order of the result follows the input corpus.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0,1], got {fraction}")
    groups = _by_class(corpus)
    rng = derived_rng(seed, "subsample")
    keep: set[str] = set()
    for label in corpus.label_set:
        docs = groups[label]
        k = max(_round_half_up(fraction * len(docs)), 1)
        order = rng.permutation(len(docs))
        keep.update(docs[i].id for i in order[:k])
    return Corpus(corpus.name, corpus.label_set, tuple(d for d in corpus.documents if d.id in keep))
