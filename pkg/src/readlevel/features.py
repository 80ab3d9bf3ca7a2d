"""The 14 statistical linguistic features, in 5 groups.

Group layout (fixed vector order):
  raw            num_words, avg_word_len_chars, long_sentence_ratio
  pos            distinct_common_nouns_ratio, distinct_parallel_conj_ratio,
                 single_pos_tag_ratio, adverbs_per_sentence
  syntax         distinct_conjunction_count, conjunction_count
  viet_spec      borrowed_ratio, distinct_borrowed_ratio, distinct_sino_ratio
  word_cohesion  mean_dependency_depth, mean_sentence_overlap

Word "type" identity is the lowercased surface with underscores preserved.
A sentence is "long" when its summed syllable count exceeds 20. Tag roles
(common noun, conjunctions, adverb) default to the VnCoreNLP tagset and can
be remapped through a tag-map file. Extraction is pure and stateless; safe
for data-parallel use across documents.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from readlevel.corpus import Document, Sentence, ValidationError, syllable_count

FEATURE_NAMES: tuple[str, ...] = (
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
)

FEATURE_GROUPS: dict[str, tuple[int, ...]] = {
    "raw": (0, 1, 2),
    "pos": (3, 4, 5, 6),
    "syntax": (7, 8),
    "viet_spec": (9, 10, 11),
    "word_cohesion": (12, 13),
}

LONG_SENTENCE_SYLLABLES = 20

LEXICON_KINDS = ("borrowed", "sino_vietnamese")


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class TagMap:
    """Tag-role assignment; values are sets of POS-tag strings."""

    common_noun: frozenset[str] = frozenset({"N"})
    coord_conj: frozenset[str] = frozenset({"Cc"})
    subord_conj: frozenset[str] = frozenset({"C"})
    adverb: frozenset[str] = frozenset({"R"})

    @property
    def conjunction(self) -> frozenset[str]:
        return self.coord_conj | self.subord_conj


DEFAULT_TAGMAP = TagMap()

_TAGMAP_ROLES = {f.name for f in fields(TagMap)}


def load_tagmap(text: str) -> TagMap:
    """Parse ``role=tag[,tag...]`` lines; unlisted roles keep their defaults."""
    overrides: dict[str, frozenset[str]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"tag map line {line_no}: expected 'role=tag[,tag...]'")
        role, _, tags = line.partition("=")
        role = role.strip()
        if role not in _TAGMAP_ROLES:
            raise ValueError(f"tag map line {line_no}: unknown role {role!r}")
        tagset = frozenset(t.strip() for t in tags.split(",") if t.strip())
        if not tagset:
            raise ValueError(f"tag map line {line_no}: role {role!r} assigned no tags")
        overrides[role] = tagset
    return TagMap(**overrides)


@dataclass(frozen=True)
class Lexicon:
    kind: str
    entries: frozenset[str]

    def __post_init__(self):
        if self.kind not in LEXICON_KINDS:
            raise LexiconError(f"unknown lexicon kind {self.kind!r}")

    def __contains__(self, word: str) -> bool:
        return word in self.entries


def load_lexicon(text: str, kind: str) -> Lexicon:
    """One entry per line, ``#`` comments; entries lowercased, duplicates collapsed."""
    entries = set()
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if any(c.isspace() for c in line):
            raise LexiconError(f"lexicon line {line_no}: entry contains whitespace")
        entries.add(line.lower())
    if not entries:
        raise LexiconError(f"{kind} lexicon has no entries")
    return Lexicon(kind, frozenset(entries))


@dataclass(frozen=True)
class FeatureVector:
    num_words: float
    avg_word_len_chars: float
    long_sentence_ratio: float
    distinct_common_nouns_ratio: float
    distinct_parallel_conj_ratio: float
    single_pos_tag_ratio: float
    adverbs_per_sentence: float
    distinct_conjunction_count: float
    conjunction_count: float
    borrowed_ratio: float
    distinct_borrowed_ratio: float
    distinct_sino_ratio: float
    mean_dependency_depth: float
    mean_sentence_overlap: float

    def values(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in FEATURE_NAMES)

    @classmethod
    def from_values(cls, values) -> "FeatureVector":
        values = tuple(float(v) for v in values)
        if len(values) != len(FEATURE_NAMES):
            raise ValueError(f"expected {len(FEATURE_NAMES)} values, got {len(values)}")
        return cls(*values)


def normalize(surface: str) -> str:
    """Type identity: lowercase, underscores preserved."""
    return surface.lower()


def _type_tags(doc: Document) -> dict[str, set[str]]:
    types: dict[str, set[str]] = {}
    for tok in doc.tokens():
        types.setdefault(normalize(tok.surface), set()).add(tok.pos)
    return types


def raw_features(doc: Document) -> tuple[float, float, float]:
    tokens = list(doc.tokens())
    n_words = len(tokens)
    chars = sum(len(t.surface) - t.surface.count("_") for t in tokens)
    long_sentences = sum(
        1
        for s in doc.sentences
        if sum(syllable_count(t.surface) for t in s.tokens) > LONG_SENTENCE_SYLLABLES
    )
    return (
        float(n_words),
        chars / n_words,
        long_sentences / len(doc.sentences),
    )


def pos_features(doc: Document, tags: TagMap = DEFAULT_TAGMAP) -> tuple[float, float, float, float]:
    types = _type_tags(doc)
    n_types = len(types)
    noun_types = sum(1 for pos_set in types.values() if pos_set & tags.common_noun)
    cc_types = sum(1 for pos_set in types.values() if pos_set & tags.coord_conj)
    single_pos = sum(1 for pos_set in types.values() if len(pos_set) == 1)
    adverb_tokens = sum(1 for t in doc.tokens() if t.pos in tags.adverb)
    return (
        noun_types / n_types,
        cc_types / n_types,
        single_pos / n_types,
        adverb_tokens / len(doc.sentences),
    )


def syntax_features(doc: Document, tags: TagMap = DEFAULT_TAGMAP) -> tuple[float, float]:
    conj = tags.conjunction
    conj_tokens = sum(1 for t in doc.tokens() if t.pos in conj)
    conj_types = sum(1 for pos_set in _type_tags(doc).values() if pos_set & conj)
    return float(conj_types), float(conj_tokens)


def vnspec_features(doc: Document, borrowed: Lexicon, sino: Lexicon) -> tuple[float, float, float]:
    if borrowed.kind != "borrowed":
        raise LexiconError(f"expected a 'borrowed' lexicon, got kind {borrowed.kind!r}")
    if sino.kind != "sino_vietnamese":
        raise LexiconError(f"expected a 'sino_vietnamese' lexicon, got kind {sino.kind!r}")
    tokens = [normalize(t.surface) for t in doc.tokens()]
    types = set(tokens)
    borrowed_tokens = sum(1 for w in tokens if w in borrowed)
    borrowed_types = sum(1 for w in types if w in borrowed)
    sino_types = sum(1 for w in types if w in sino)
    return (
        borrowed_tokens / len(tokens),
        borrowed_types / len(types),
        sino_types / len(types),
    )


def dependency_depth(sentence: Sentence) -> int:
    """Nodes on the longest root-to-node path; a lone root counts 1."""
    depths = [0] * (len(sentence.tokens) + 1)
    for tok in sentence.tokens:
        if depths[tok.id]:
            continue
        chain = []
        cur = tok.id
        while cur != 0 and not depths[cur]:
            chain.append(cur)
            cur = sentence.tokens[cur - 1].head
        base = depths[cur] if cur != 0 else 0
        for node in reversed(chain):
            base += 1
            depths[node] = base
    return max(depths[1:])


def sentence_overlap(doc: Document) -> float:
    """Mean shared word types over all unordered sentence pairs; 0 if fewer than 2."""
    if len(doc.sentences) < 2:
        return 0.0
    type_sets = [frozenset(normalize(t.surface) for t in s.tokens) for s in doc.sentences]
    total = 0
    pairs = 0
    for i in range(len(type_sets)):
        for j in range(i + 1, len(type_sets)):
            total += len(type_sets[i] & type_sets[j])
            pairs += 1
    return total / pairs


def extract_features(
    doc: Document,
    borrowed: Lexicon,
    sino: Lexicon,
    tags: TagMap = DEFAULT_TAGMAP,
) -> FeatureVector:
    """Assemble all 14 features in the fixed field order."""
    raw = raw_features(doc)
    pos = pos_features(doc, tags)
    syntax = syntax_features(doc, tags)
    viet = vnspec_features(doc, borrowed, sino)
    depth = sum(dependency_depth(s) for s in doc.sentences) / len(doc.sentences)
    overlap = sentence_overlap(doc)
    return FeatureVector(*raw, *pos, *syntax, *viet, depth, overlap)


def extract_corpus_features(
    corpus,
    borrowed: Lexicon,
    sino: Lexicon,
    tags: TagMap = DEFAULT_TAGMAP,
) -> dict[str, FeatureVector]:
    return {doc.id: extract_features(doc, borrowed, sino, tags) for doc in corpus.documents}
