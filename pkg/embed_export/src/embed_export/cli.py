"""Command line front end mirroring ExportJob field for field."""

import argparse
import sys

from embed_export.corpus_io import CorpusFormatError
from embed_export.export import CHUNKINGS, FORMATS, POOLINGS, ExportError, ExportJob, export_embeddings


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="embed-export",
        description="run a pretrained encoder over a corpus and write a document embedding table",
    )
    ap.add_argument("--corpus", required=True, help="corpus file")
    ap.add_argument("--format", required=True, choices=FORMATS, help="corpus format")
    ap.add_argument("--model", required=True, help="checkpoint path or hub id")
    ap.add_argument("--out", required=True, help="output TSV path")
    ap.add_argument("--pooling", choices=POOLINGS, default="mean_last_layer")
    ap.add_argument("--chunking", choices=CHUNKINGS, default="chunk_mean")
    ap.add_argument("--max-length", type=int, default=256, help="model window in tokens")
    ap.add_argument("--batch-size", type=int, default=8)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        from transformers.utils import logging as hf_logging

        hf_logging.set_verbosity_error()
        hf_logging.disable_progress_bar()
        job = ExportJob(
            corpus_path=args.corpus,
            corpus_format=args.format,
            model=args.model,
            output_path=args.out,
            pooling=args.pooling,
            chunking=args.chunking,
            max_length=args.max_length,
            batch_size=args.batch_size,
        )
        export_embeddings(job)
    except (ExportError, CorpusFormatError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    sys.stdout.write(f"wrote {args.out}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
