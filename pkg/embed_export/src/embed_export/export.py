"""Batch document embedding export.

Runs a pretrained masked-LM encoder over every document of a corpus and
writes a TSV embedding table: header ``#dim=<d>\t<source_tag>``, then one
``doc_id<TAB>v1...<TAB>vd`` row per document in corpus order. The source tag
records model, pooling, chunking, and max_length so a table is
self-describing.

Documents whose token sequence exceeds the model window are either truncated
or split into window-sized chunks whose vectors are averaged (chunk_mean).
Pooling over one forward pass is a masked mean of final-layer states
(mean_last_layer) or the first position's state (first_token). Identical
document texts are embedded once and share one cached vector, so equal
documents always get byte-identical rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from embed_export.corpus_io import DocText, read_documents

POOLINGS = ("mean_last_layer", "first_token")
CHUNKINGS = ("truncate", "chunk_mean")
FORMATS = ("conllu", "jsonl")


class ExportError(Exception):
    pass


@dataclass(frozen=True)
class ExportJob:
    corpus_path: str
    corpus_format: str
    model: str
    output_path: str
    pooling: str = "mean_last_layer"
    chunking: str = "chunk_mean"
    max_length: int = 256
    batch_size: int = 8

    def __post_init__(self):
        if self.corpus_format not in FORMATS:
            raise ValueError(f"corpus_format must be one of {FORMATS}, got {self.corpus_format!r}")
        if self.pooling not in POOLINGS:
            raise ValueError(f"pooling must be one of {POOLINGS}, got {self.pooling!r}")
        if self.chunking not in CHUNKINGS:
            raise ValueError(f"chunking must be one of {CHUNKINGS}, got {self.chunking!r}")
        if self.max_length < 8:
            raise ValueError(f"max_length must be at least 8, got {self.max_length}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be positive, got {self.batch_size}")


def mean_last_layer(hidden: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
    """Mean of final-layer states over non-padding positions, per sequence."""
    m = mask.unsqueeze(-1).to(hidden.dtype)
    return (hidden * m).sum(dim=1) / m.sum(dim=1)


def first_token(hidden: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
    return hidden[:, 0]


_POOL = {"mean_last_layer": mean_last_layer, "first_token": first_token}


def _load_model(name: str):
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(name)
        model = AutoModel.from_pretrained(name)
    except Exception as exc:
        raise ExportError(f"cannot load model {name!r}: {exc}") from exc
    model.eval()
    return tokenizer, model


def _frame(tokenizer) -> tuple[list[int], list[int]]:
    # single-sequence special-token frame; empty halves for frameless models
    cls_id = getattr(tokenizer, "cls_token_id", None)
    sep_id = getattr(tokenizer, "sep_token_id", None)
    return (
        [cls_id] if cls_id is not None else [],
        [sep_id] if sep_id is not None else [],
    )


def _chunks_for(text: str, doc_id: str, tokenizer, job: ExportJob) -> list[list[int]]:
    ids = tokenizer(text, add_special_tokens=False)["input_ids"]
    if not ids:
        raise ExportError(f"document {doc_id!r} produces no model tokens")
    prefix, suffix = _frame(tokenizer)
    room = job.max_length - len(prefix) - len(suffix)
    if room < 1:
        raise ExportError(
            f"max_length {job.max_length} leaves no room beside special tokens"
        )
    if job.chunking == "truncate":
        pieces = [ids[:room]]
    else:
        pieces = [ids[i : i + room] for i in range(0, len(ids), room)]
    return [prefix + p + suffix for p in pieces]


def _run_chunks(chunks: list[list[int]], tokenizer, model, job: ExportJob) -> np.ndarray:
    pad_id = tokenizer.pad_token_id
    if pad_id is None:
        raise ExportError(f"model {job.model!r} has no pad token")
    pool = _POOL[job.pooling]
    out: list[np.ndarray] = []
    with torch.no_grad():
        for start in range(0, len(chunks), job.batch_size):
            batch = chunks[start : start + job.batch_size]
            width = max(len(c) for c in batch)
            ids = torch.full((len(batch), width), pad_id, dtype=torch.long)
            mask = torch.zeros((len(batch), width), dtype=torch.long)
            for r, chunk in enumerate(batch):
                ids[r, : len(chunk)] = torch.tensor(chunk, dtype=torch.long)
                mask[r, : len(chunk)] = 1
            hidden = model(input_ids=ids, attention_mask=mask).last_hidden_state
            out.append(pool(hidden, mask).cpu().numpy())
    return np.concatenate(out, axis=0)


def embed_documents(docs: list[DocText], tokenizer, model, job: ExportJob) -> dict[str, np.ndarray]:
    """One vector per doc id; equal texts share one computed vector."""
    unique: dict[str, list[list[int]]] = {}
    for doc in docs:
        if doc.text not in unique:
            unique[doc.text] = _chunks_for(doc.text, doc.doc_id, tokenizer, job)
    texts = list(unique)
    flat: list[list[int]] = []
    spans: list[tuple[int, int]] = []
    for text in texts:
        spans.append((len(flat), len(flat) + len(unique[text])))
        flat.extend(unique[text])
    vecs = _run_chunks(flat, tokenizer, model, job)
    by_text = {
        text: vecs[a:b].mean(axis=0).astype(np.float64) for text, (a, b) in zip(texts, spans)
    }
    table = {doc.doc_id: by_text[doc.text] for doc in docs}
    for doc_id, vec in table.items():
        if not np.all(np.isfinite(vec)):
            raise ExportError(f"document {doc_id!r} produced a non-finite embedding")
    return table


def source_tag(job: ExportJob) -> str:
    tag = (
        f"{job.model}|pooling={job.pooling}|chunking={job.chunking}"
        f"|max_length={job.max_length}"
    )
    return tag.replace("\t", " ").replace("\n", " ")


def export_embeddings(job: ExportJob) -> None:
    """Embed every corpus document and write the table to job.output_path."""
    docs = read_documents(job.corpus_path, job.corpus_format)
    tokenizer, model = _load_model(job.model)
    table = embed_documents(docs, tokenizer, model, job)
    dim = next(iter(table.values())).shape[0]
    lines = [f"#dim={dim}\t{source_tag(job)}"]
    for doc in docs:
        vec = table[doc.doc_id]
        lines.append(doc.doc_id + "\t" + "\t".join(repr(float(v)) for v in vec))
    try:
        with open(job.output_path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise ExportError(f"cannot write {job.output_path!r}: {exc}") from exc
