"""Minimal corpus readers: document ids and running text, nothing else.

Reads the same two file formats as the downstream feature toolkit (CoNLL-U
with `# newdoc id =` markers, or JSONL with an optional header object) but
keeps only what an embedding model needs: each document's token surfaces in
reading order, joined with single spaces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class CorpusFormatError(ValueError):
    pass


@dataclass(frozen=True)
class DocText:
    doc_id: str
    text: str


def _check_id(doc_id: str, seen: set[str], where: str) -> None:
    if not doc_id or doc_id != doc_id.strip():
        raise CorpusFormatError(f"{where}: bad document id {doc_id!r}")
    if "\t" in doc_id or "\n" in doc_id:
        raise CorpusFormatError(f"{where}: document id {doc_id!r} contains tab or newline")
    if doc_id in seen:
        raise CorpusFormatError(f"{where}: duplicate document id {doc_id!r}")
    seen.add(doc_id)


def _read_conllu(text: str) -> list[DocText]:
    docs: list[DocText] = []
    seen: set[str] = set()
    cur_id: str | None = None
    cur_words: list[str] = []

    def flush(line_no):
        if cur_id is None:
            return
        if not cur_words:
            raise CorpusFormatError(f"line {line_no}: document {cur_id!r} has no tokens")
        docs.append(DocText(cur_id, " ".join(cur_words)))

    for line_no, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("newdoc id"):
                _, _, value = body.partition("=")
                flush(line_no)
                cur_id = value.strip()
                _check_id(cur_id, seen, f"line {line_no}")
                cur_words = []
            continue
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise CorpusFormatError(f"line {line_no}: expected 10 columns, got {len(cols)}")
        if cur_id is None:
            raise CorpusFormatError(f"line {line_no}: token before any '# newdoc id =' marker")
        # skip multiword ranges and empty nodes; their parts carry the surfaces
        if "-" in cols[0] or "." in cols[0]:
            continue
        cur_words.append(cols[1])
    flush("end of file")
    if not docs:
        raise CorpusFormatError("no documents found")
    return docs


def _read_jsonl(text: str) -> list[DocText]:
    docs: list[DocText] = []
    seen: set[str] = set()
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"line {line_no}: {exc}") from None
        if not isinstance(obj, dict):
            raise CorpusFormatError(f"line {line_no}: expected an object")
        if "id" not in obj:
            if line_no == 1:  # optional corpus header
                continue
            raise CorpusFormatError(f"line {line_no}: document without an 'id'")
        doc_id = str(obj["id"])
        _check_id(doc_id, seen, f"line {line_no}")
        words = [
            str(tok["surface"])
            for sent in obj.get("sentences", ())
            for tok in sent
        ]
        if not words:
            raise CorpusFormatError(f"line {line_no}: document {doc_id!r} has no tokens")
        docs.append(DocText(doc_id, " ".join(words)))
    if not docs:
        raise CorpusFormatError("no documents found")
    return docs


def read_documents(path: str, corpus_format: str) -> list[DocText]:
    """Load (doc_id, text) pairs in file order."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if corpus_format == "conllu":
        return _read_conllu(text)
    if corpus_format == "jsonl":
        return _read_jsonl(text)
    raise CorpusFormatError(f"unknown corpus format {corpus_format!r}")
