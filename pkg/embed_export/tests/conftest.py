import json
import os

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")
os.environ.setdefault("TOKENIZERS_PARALLELISM", "false")

import pytest
import torch

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "con", "meo", "ngoi", "tren", "tham", "hoc", "sinh", "di",
    "nha", "ti", "vi", "rat", "dep", "va", "an", "com", "tot", "_",
]
HIDDEN = 32

# d1 and d4 are byte-identical on purpose; d3 is long enough to need chunking
# at small max_length but still fits the checkpoint's 64 position slots whole.
DOCS = [
    ("d1", "con meo ngoi tren tham"),
    ("d2", "hoc_sinh di nha"),
    ("d3", " ".join(["con", "meo", "ngoi", "tren", "tham"] * 11)),
    ("d4", "con meo ngoi tren tham"),
    ("d5", "hoc_sinh xem ti_vi rat dep"),
    ("d6", "tot"),
]


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory):
    from transformers import BertConfig, BertModel, BertTokenizerFast

    root = tmp_path_factory.mktemp("tiny_bert")
    tokenizer = BertTokenizerFast(vocab={w: i for i, w in enumerate(VOCAB)})
    tokenizer.save_pretrained(root)
    torch.manual_seed(0)
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=HIDDEN,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    BertModel(config).save_pretrained(root)
    return str(root)


def jsonl_corpus_text(docs=DOCS, header=True) -> str:
    lines = []
    if header:
        lines.append(json.dumps({"corpus": "tiny", "label_set": ["easy", "hard"]}))
    for doc_id, text in docs:
        words = text.split(" ")
        lines.append(json.dumps({
            "id": doc_id,
            "label": "easy",
            "sentences": [[
                {"surface": w, "pos": "N", "head": 0 if i == 1 else 1, "deprel": "root" if i == 1 else "dep"}
                for i, w in enumerate(words, start=1)
            ]],
        }))
    return "\n".join(lines) + "\n"


@pytest.fixture(scope="session")
def corpus_jsonl(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "tiny.jsonl"
    path.write_text(jsonl_corpus_text(), encoding="utf-8")
    return str(path)
