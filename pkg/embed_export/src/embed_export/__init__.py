"""Batch export of document embeddings from pretrained encoders."""

from embed_export.corpus_io import CorpusFormatError, DocText, read_documents
from embed_export.export import (
    CHUNKINGS,
    POOLINGS,
    ExportError,
    ExportJob,
    embed_documents,
    export_embeddings,
    first_token,
    mean_last_layer,
    source_tag,
)

__all__ = [
    "CHUNKINGS",
    "POOLINGS",
    "CorpusFormatError",
    "DocText",
    "ExportError",
    "ExportJob",
    "embed_documents",
    "export_embeddings",
    "first_token",
    "mean_last_layer",
    "read_documents",
    "source_tag",
]

__version__ = "0.1.0"
