"""Embedding tables and design-matrix assembly.

Embeddings are produced elsewhere and exchanged as plain text so this package
never touches a model runtime. Table format, bit-exact: UTF-8, first line
``#dim=<d>`` optionally followed by a tab and a source tag, then one row per
document ``doc_id<TAB>v1<TAB>...<TAB>vd`` with ``.`` decimals and ``\n`` line
ends.

Design matrices come in three modes: statistical (the 14 linguistic features),
semantic (embedding only), joint (statistical columns first, then embedding).
Standardization is fit on training rows only; zero-variance columns are
centered but not scaled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from readlevel.corpus import Corpus
from readlevel.features import FEATURE_NAMES, FeatureVector

MODES = ("statistical", "semantic", "joint")


class EmbeddingError(ValueError):
    pass


class AssemblyError(ValueError):
    pass


@dataclass(frozen=True)
class EmbeddingTable:
    dim: int
    rows: dict[str, np.ndarray]
    source_tag: str = ""

    def __post_init__(self):
        if self.dim <= 0:
            raise EmbeddingError(f"dim must be positive, got {self.dim}")
        for doc_id, vec in self.rows.items():
            if vec.shape != (self.dim,):
                raise EmbeddingError(
                    f"row {doc_id!r} has length {vec.shape[0] if vec.ndim == 1 else vec.shape},"
                    f" expected {self.dim}"
                )
            if not np.all(np.isfinite(vec)):
                raise EmbeddingError(f"row {doc_id!r} contains a non-finite value")

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self.rows

    def __len__(self) -> int:
        return len(self.rows)


def load_embedding_table(text: str) -> EmbeddingTable:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#dim="):
        raise EmbeddingError("first line must be a '#dim=<d>' header")
    header = lines[0][len("#dim=") :]
    head_dim, _, source_tag = header.partition("\t")
    try:
        dim = int(head_dim)
    except ValueError:
        raise EmbeddingError(f"bad dimension in header: {head_dim!r}") from None
    if dim <= 0:
        raise EmbeddingError(f"dim must be positive, got {dim}")
    rows: dict[str, np.ndarray] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        doc_id = parts[0]
        if len(parts) - 1 != dim:
            raise EmbeddingError(f"line {line_no}: expected {dim} values, got {len(parts) - 1}")
        if doc_id in rows:
            raise EmbeddingError(f"line {line_no}: duplicate doc id {doc_id!r}")
        try:
            vec = np.array([float(v) for v in parts[1:]], dtype=np.float64)
        except ValueError:
            raise EmbeddingError(f"line {line_no}: unparsable value") from None
        if not np.all(np.isfinite(vec)):
            raise EmbeddingError(f"line {line_no}: non-finite value")
        rows[doc_id] = vec
    return EmbeddingTable(dim=dim, rows=rows, source_tag=source_tag)


def serialize_embedding_table(table: EmbeddingTable) -> str:
    header = f"#dim={table.dim}"
    if table.source_tag:
        header += f"\t{table.source_tag}"
    lines = [header]
    for doc_id, vec in table.rows.items():
        lines.append(doc_id + "\t" + "\t".join(repr(float(v)) for v in vec))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DesignMatrix:
    X: np.ndarray
    y: np.ndarray
    p_stat: int
    column_names: tuple[str, ...]
    mode: str
    doc_ids: tuple[str, ...] = ()
    label_set: tuple[str, ...] = ()

    def __post_init__(self):
        if self.mode not in MODES:
            raise AssemblyError(f"unknown mode {self.mode!r}")
        if self.X.ndim != 2:
            raise AssemblyError("X must be 2-dimensional")
        n, p = self.X.shape
        if self.y.shape != (n,):
            raise AssemblyError(f"y has shape {self.y.shape}, expected ({n},)")
        if len(self.column_names) != p:
            raise AssemblyError(f"{len(self.column_names)} column names for {p} columns")
        if not 0 <= self.p_stat <= p:
            raise AssemblyError(f"p_stat {self.p_stat} out of range for p={p}")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


def _embedding_column_names(dim: int) -> tuple[str, ...]:
    return tuple(f"emb_{i}" for i in range(dim))


def assemble(
    corpus: Corpus,
    mode: str,
    features: dict[str, FeatureVector] | None = None,
    table: EmbeddingTable | None = None,
) -> DesignMatrix:
    """Build the n-by-p matrix over labeled documents, in corpus order.

    Joint rows are the 14 statistical values followed by the embedding;
    class indices follow label_set order.
    """
    if mode not in MODES:
        raise AssemblyError(f"unknown mode {mode!r}")
    docs = corpus.labeled()
    if not docs:
        raise AssemblyError("corpus has no labeled documents")
    need_stat = mode in ("statistical", "joint")
    need_emb = mode in ("semantic", "joint")
    if need_stat:
        if features is None:
            raise AssemblyError(f"mode {mode!r} requires feature vectors")
        missing = [d.id for d in docs if d.id not in features]
        if missing:
            raise AssemblyError(f"missing feature vectors for: {', '.join(missing)}")
    if need_emb:
        if table is None:
            raise AssemblyError(f"mode {mode!r} requires an embedding table")
        missing = [d.id for d in docs if d.id not in table]
        if missing:
            raise AssemblyError(f"missing embeddings for: {', '.join(missing)}")

    blocks = []
    names: tuple[str, ...] = ()
    p_stat = 0
    if need_stat:
        blocks.append(np.array([features[d.id].values() for d in docs], dtype=np.float64))
        names += FEATURE_NAMES
        p_stat = len(FEATURE_NAMES)
    if need_emb:
        blocks.append(np.stack([table.rows[d.id] for d in docs]).astype(np.float64))
        names += _embedding_column_names(table.dim)
    X = np.hstack(blocks) if len(blocks) > 1 else blocks[0]
    label_index = {lbl: i for i, lbl in enumerate(corpus.label_set)}
    y = np.array([label_index[d.label] for d in docs], dtype=np.int64)
    return DesignMatrix(
        X=X,
        y=y,
        p_stat=p_stat,
        column_names=names,
        mode=mode,
        doc_ids=tuple(d.id for d in docs),
        label_set=corpus.label_set,
    )


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray
    zero_variance: np.ndarray = field(repr=False)

    @property
    def p(self) -> int:
        return self.mean.shape[0]

    def transform(self, X: np.ndarray) -> np.ndarray:
        if X.shape[1] != self.p:
            raise AssemblyError(f"standardizer fitted on p={self.p}, got p={X.shape[1]}")
        scale = np.where(self.zero_variance, 1.0, self.std)
        return (X - self.mean) / scale

    def inverse_transform(self, X: np.ndarray) -> np.ndarray:
        if X.shape[1] != self.p:
            raise AssemblyError(f"standardizer fitted on p={self.p}, got p={X.shape[1]}")
        scale = np.where(self.zero_variance, 1.0, self.std)
        return X * scale + self.mean


def standardize_fit(train: DesignMatrix) -> Standardizer:
    mean = train.X.mean(axis=0)
    std = train.X.std(axis=0)
    return Standardizer(mean=mean, std=std, zero_variance=std == 0.0)


def standardize_apply(s: Standardizer, m: DesignMatrix) -> DesignMatrix:
    return DesignMatrix(
        X=s.transform(m.X),
        y=m.y,
        p_stat=m.p_stat,
        column_names=m.column_names,
        mode=m.mode,
        doc_ids=m.doc_ids,
        label_set=m.label_set,
    )
