import numpy as np
import pytest
import torch

from embed_export import (
    ExportError,
    ExportJob,
    export_embeddings,
    first_token,
    mean_last_layer,
)
from embed_export.cli import main as cli_main

# the declared exchange contract: output must load in the feature toolkit
from readlevel.embeddings import load_embedding_table

from conftest import DOCS, HIDDEN


def job_for(checkpoint, corpus_jsonl, out, **overrides):
    kwargs = dict(
        corpus_path=corpus_jsonl,
        corpus_format="jsonl",
        model=checkpoint,
        output_path=str(out),
    )
    kwargs.update(overrides)
    return ExportJob(**kwargs)


@pytest.fixture(scope="module")
def exported(checkpoint, corpus_jsonl, tmp_path_factory):
    out = tmp_path_factory.mktemp("exported") / "emb.tsv"
    export_embeddings(job_for(checkpoint, corpus_jsonl, out))
    return out


class TestRoundTrip:
    def test_loads_in_feature_toolkit(self, exported):
        table = load_embedding_table(exported.read_text(encoding="utf-8"))
        assert table.dim == HIDDEN
        assert len(table) == len(DOCS)
        assert set(table.rows) == {doc_id for doc_id, _ in DOCS}

    def test_header_records_provenance(self, exported, checkpoint):
        header = exported.read_text(encoding="utf-8").splitlines()[0]
        assert header.startswith(f"#dim={HIDDEN}\t")
        tag = header.split("\t", 1)[1]
        assert checkpoint in tag
        assert "pooling=mean_last_layer" in tag
        assert "chunking=chunk_mean" in tag
        assert "max_length=256" in tag

    def test_row_order_follows_corpus(self, exported):
        ids = [line.split("\t")[0] for line in exported.read_text().splitlines()[1:]]
        assert ids == [doc_id for doc_id, _ in DOCS]

    def test_identical_documents_identical_rows(self, exported):
        rows = {
            line.split("\t", 1)[0]: line.split("\t", 1)[1]
            for line in exported.read_text().splitlines()[1:]
        }
        assert rows["d1"] == rows["d4"]
        assert rows["d1"] != rows["d2"]


class TestDeterminismAndPadding:
    def test_rerun_byte_identical(self, checkpoint, corpus_jsonl, tmp_path, exported):
        again = tmp_path / "again.tsv"
        export_embeddings(job_for(checkpoint, corpus_jsonl, again))
        assert again.read_bytes() == exported.read_bytes()

    def test_padding_invariance_across_batch_sizes(self, checkpoint, corpus_jsonl, tmp_path):
        # batch grouping decides how much padding each document gets
        tables = []
        for batch_size in (1, 8):
            out = tmp_path / f"b{batch_size}.tsv"
            export_embeddings(job_for(
                checkpoint, corpus_jsonl, out, chunking="truncate", batch_size=batch_size))
            tables.append(load_embedding_table(out.read_text(encoding="utf-8")))
        for doc_id in tables[0].rows:
            diff = np.abs(tables[0].rows[doc_id] - tables[1].rows[doc_id]).max()
            assert diff < 1e-5, f"{doc_id}: {diff}"


class TestPooling:
    def test_mean_pooling_of_constant_states_is_identity(self):
        v = torch.arange(6, dtype=torch.float32)
        hidden = v.repeat(1, 5, 1)
        mask = torch.tensor([[1, 1, 1, 0, 0]])
        hidden[0, 3:] = 123.0  # padded positions must not contribute
        assert torch.equal(mean_last_layer(hidden, mask)[0], v)

    def test_first_token_takes_position_zero(self):
        hidden = torch.randn(2, 4, 8)
        mask = torch.ones(2, 4, dtype=torch.long)
        out = first_token(hidden, mask)
        assert torch.equal(out, hidden[:, 0])

    def test_first_token_export_differs_from_mean(self, checkpoint, corpus_jsonl, tmp_path, exported):
        out = tmp_path / "first.tsv"
        export_embeddings(job_for(checkpoint, corpus_jsonl, out, pooling="first_token"))
        table = load_embedding_table(out.read_text(encoding="utf-8"))
        mean_table = load_embedding_table(exported.read_text(encoding="utf-8"))
        assert table.dim == mean_table.dim
        assert not np.allclose(table.rows["d1"], mean_table.rows["d1"])


class TestChunking:
    def test_short_documents_identical_across_chunking_modes(
        self, checkpoint, corpus_jsonl, tmp_path
    ):
        lines = {}
        for chunking in ("truncate", "chunk_mean"):
            out = tmp_path / f"{chunking}.tsv"
            export_embeddings(job_for(
                checkpoint, corpus_jsonl, out, chunking=chunking, max_length=24))
            lines[chunking] = dict(
                line.split("\t", 1) for line in out.read_text().splitlines()[1:])
        for doc_id, text in DOCS:
            if doc_id == "d3":  # the only over-length document
                assert lines["truncate"][doc_id] != lines["chunk_mean"][doc_id]
            else:
                assert lines["truncate"][doc_id] == lines["chunk_mean"][doc_id], doc_id

    def test_chunk_mean_matches_manual_average(self, checkpoint, corpus_jsonl, tmp_path):
        from transformers import AutoModel, AutoTokenizer

        out = tmp_path / "chunked.tsv"
        export_embeddings(job_for(checkpoint, corpus_jsonl, out, max_length=24))
        table = load_embedding_table(out.read_text(encoding="utf-8"))

        tokenizer = AutoTokenizer.from_pretrained(checkpoint)
        model = AutoModel.from_pretrained(checkpoint).eval()
        text = dict(DOCS)["d3"]
        ids = tokenizer(text, add_special_tokens=False)["input_ids"]
        room = 24 - 2  # the frame is [CLS] ... [SEP]
        pieces = [ids[i : i + room] for i in range(0, len(ids), room)]
        assert len(pieces) > 1
        vecs = []
        with torch.no_grad():
            for piece in pieces:
                wrapped = [tokenizer.cls_token_id] + piece + [tokenizer.sep_token_id]
                batch = torch.tensor([wrapped])
                hidden = model(input_ids=batch, attention_mask=torch.ones_like(batch)).last_hidden_state
                vecs.append(mean_last_layer(hidden, torch.ones_like(batch))[0].numpy())
        manual = np.mean(vecs, axis=0)
        assert np.abs(table.rows["d3"] - manual).max() < 1e-6


class TestErrors:
    def test_unloadable_model(self, corpus_jsonl, tmp_path):
        job = job_for("/nonexistent/model", corpus_jsonl, tmp_path / "x.tsv")
        with pytest.raises(ExportError, match="cannot load model"):
            export_embeddings(job)

    def test_unwritable_output(self, checkpoint, corpus_jsonl, tmp_path):
        job = job_for(checkpoint, corpus_jsonl, tmp_path)  # a directory, not a file
        with pytest.raises(ExportError, match="cannot write"):
            export_embeddings(job)

    @pytest.mark.parametrize(
        "field,value",
        [
            ("pooling", "max"),
            ("chunking", "drop"),
            ("corpus_format", "xml"),
            ("max_length", 2),
            ("batch_size", 0),
        ],
    )
    def test_job_validation(self, checkpoint, corpus_jsonl, tmp_path, field, value):
        with pytest.raises(ValueError):
            job_for(checkpoint, corpus_jsonl, tmp_path / "x.tsv", **{field: value})


class TestCli:
    def test_export_and_exit_zero(self, checkpoint, corpus_jsonl, tmp_path, capsys):
        out = tmp_path / "cli.tsv"
        code = cli_main([
            "--corpus", corpus_jsonl, "--format", "jsonl",
            "--model", checkpoint, "--out", str(out),
        ])
        assert code == 0
        assert load_embedding_table(out.read_text(encoding="utf-8")).dim == HIDDEN
        assert str(out) in capsys.readouterr().out

    def test_missing_corpus_exits_two(self, checkpoint, tmp_path, capsys):
        code = cli_main([
            "--corpus", str(tmp_path / "nope.jsonl"), "--format", "jsonl",
            "--model", checkpoint, "--out", str(tmp_path / "x.tsv"),
        ])
        assert code == 2
        assert "error:" in capsys.readouterr().err
