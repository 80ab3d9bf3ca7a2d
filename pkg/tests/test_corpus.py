"""Corpus parsing, validation, and split/subsample behavior."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from readlevel import (
    Corpus,
    Document,
    Sentence,
    Token,
    parse_conllu,
    parse_jsonl,
    parse_label_map,
    serialize_jsonl,
    stratified_split,
    subsample,
    syllable_count,
)
from readlevel.corpus import ParseError, ValidationError, _round_half_up


def tok(i, surface="ab", pos="N", head=0, deprel="root"):
    return Token(id=i, surface=surface, pos=pos, head=head, deprel=deprel)


def chain_sentence(n):
    return Sentence(tuple(tok(i, head=i - 1, deprel="dep" if i > 1 else "root") for i in range(1, n + 1)))


def one_doc(doc_id="d1", label=None):
    return Document(id=doc_id, sentences=(chain_sentence(3),), label=label)


class TestSyllableCount:
    def test_counts(self):
        assert syllable_count("và") == 1
        assert syllable_count("ti_vi") == 2
        assert syllable_count("a_b_c") == 3


class TestValidation:
    def test_token_rejects_empty_surface(self):
        with pytest.raises(ValidationError):
            tok(1, surface="")

    def test_token_rejects_whitespace(self):
        with pytest.raises(ValidationError):
            tok(1, surface="a b")

    def test_token_rejects_self_head(self):
        with pytest.raises(ValidationError):
            tok(2, head=2)

    def test_token_rejects_negative_head(self):
        with pytest.raises(ValidationError):
            tok(1, head=-1)

    def test_sentence_rejects_empty(self):
        with pytest.raises(ValidationError):
            Sentence(())

    def test_sentence_rejects_bad_id_order(self):
        with pytest.raises(ValidationError, match="ids"):
            Sentence((tok(2),))

    def test_sentence_rejects_head_out_of_range(self):
        with pytest.raises(ValidationError, match="out of range"):
            Sentence((tok(1, head=5),))

    def test_sentence_rejects_two_roots(self):
        with pytest.raises(ValidationError, match="root"):
            Sentence((tok(1, head=0), tok(2, head=0)))

    def test_sentence_rejects_cycle(self):
        # 2 and 3 point at each other and never reach the root
        with pytest.raises(ValidationError, match="cycle"):
            Sentence((tok(1, head=0), tok(2, head=3), tok(3, head=2)))

    def test_document_requires_sentences(self):
        with pytest.raises(ValidationError):
            Document(id="d", sentences=())

    def test_document_requires_id(self):
        with pytest.raises(ValidationError):
            Document(id="", sentences=(chain_sentence(1),))

    def test_corpus_rejects_duplicate_doc_ids(self):
        with pytest.raises(ValidationError, match="duplicate"):
            Corpus("c", ("x",), (one_doc("a"), one_doc("a")))

    def test_corpus_rejects_unknown_label(self):
        with pytest.raises(ValidationError, match="unknown label"):
            Corpus("c", ("x",), (one_doc("a", label="y"),))

    def test_corpus_rejects_duplicate_label_set(self):
        with pytest.raises(ValidationError, match="distinct"):
            Corpus("c", ("x", "x"), ())

    def test_empty_corpus_allowed(self):
        assert len(Corpus("c", ("x",), ())) == 0


CONLLU_MINIMAL = """\
# newdoc id = doc-a
1\tem\t_\tP\t_\t_\t2\tnsubj\t_\t_
2\thọc\t_\tV\t_\t_\t0\troot\t_\t_

1\tsách\t_\tN\t_\t_\t0\troot\t_\t_

# newdoc id = doc-b
1\tvà\t_\tCc\t_\t_\t0\troot\t_\t_
"""


class TestConllu:
    def test_minimal_parse(self):
        corpus = parse_conllu(CONLLU_MINIMAL, name="mini")
        assert corpus.name == "mini"
        assert [d.id for d in corpus.documents] == ["doc-a", "doc-b"]
        assert len(corpus.documents[0].sentences) == 2
        first = corpus.documents[0].sentences[0].tokens[0]
        assert (first.surface, first.pos, first.head, first.deprel) == ("em", "P", 2, "nsubj")

    def test_label_map_attaches(self):
        labels = {"doc-a": "easy"}
        corpus = parse_conllu(CONLLU_MINIMAL, label_map=labels)
        assert corpus.documents[0].label == "easy"
        assert corpus.documents[1].label is None
        assert corpus.label_set == ("easy",)

    def test_fixture_corpus_shape(self, fixture_corpus):
        assert len(fixture_corpus) >= 10
        assert all(d.label is not None for d in fixture_corpus.documents)

    def test_rejects_wrong_column_count(self):
        with pytest.raises(ParseError, match="10"):
            parse_conllu("# newdoc id = d\n1\ta\tb\n")

    def test_rejects_token_before_newdoc(self):
        with pytest.raises(ParseError, match="newdoc"):
            parse_conllu("1\ta\t_\tN\t_\t_\t0\troot\t_\t_\n")

    def test_rejects_non_integer_id(self):
        with pytest.raises(ParseError, match="integer"):
            parse_conllu("# newdoc id = d\nx\ta\t_\tN\t_\t_\t0\troot\t_\t_\n")

    def test_validation_error_names_document_and_line(self):
        bad = "# newdoc id = doc-z\n1\ta\t_\tN\t_\t_\t0\troot\t_\t_\n2\tb\t_\tN\t_\t_\t0\troot\t_\t_\n"
        with pytest.raises(ValidationError, match="doc-z"):
            parse_conllu(bad)


class TestLabelMap:
    def test_parse(self):
        text = "# comment\ndoc-a\teasy\n\ndoc-b\thard\n"
        assert parse_label_map(text) == {"doc-a": "easy", "doc-b": "hard"}

    def test_rejects_bad_row(self):
        with pytest.raises(ParseError):
            parse_label_map("doc-a easy\n")


class TestJsonl:
    def test_round_trip_identity(self, fixture_corpus):
        again = parse_jsonl(serialize_jsonl(fixture_corpus))
        assert again == fixture_corpus

    def test_round_trip_synthetic(self, synth_data):
        again = parse_jsonl(serialize_jsonl(synth_data.corpus))
        assert again == synth_data.corpus

    def test_header_carries_name_and_label_set(self):
        corpus = Corpus("named", ("hard", "easy"), (one_doc("a", label="easy"),))
        again = parse_jsonl(serialize_jsonl(corpus))
        assert again.name == "named"
        assert again.label_set == ("hard", "easy")

    def test_header_after_data_rejected(self):
        doc_line = serialize_jsonl(Corpus("c", (), (one_doc("a"),))).splitlines()[1]
        with pytest.raises(ParseError, match="first line"):
            parse_jsonl(doc_line + "\n" + '{"corpus": "late"}\n')

    def test_rejects_bad_json(self):
        with pytest.raises(ParseError, match="JSON"):
            parse_jsonl("{not json}\n")

    def test_rejects_missing_field(self):
        with pytest.raises(ParseError, match="sentences"):
            parse_jsonl('{"id": "a"}\n')


class TestRoundHalfUp:
    def test_halves_go_up(self):
        assert _round_half_up(0.5) == 1
        assert _round_half_up(1.5) == 2
        assert _round_half_up(2.4999) == 2

    def test_float_noise_does_not_flip(self):
        # 0.1*15 = 1.5000000000000002 in binary; 9-decimal prerounding keeps it a half
        assert _round_half_up(0.1 * 15) == 2


class TestStratifiedSplit:
    @settings(max_examples=40, deadline=None)
    @given(
        fraction=st.floats(min_value=0.05, max_value=0.95),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_partition_properties(self, synth_data, fraction, seed):
        corpus = synth_data.corpus
        train, test = stratified_split(corpus, fraction, seed)
        train_ids = {d.id for d in train.documents}
        test_ids = {d.id for d in test.documents}
        assert not train_ids & test_ids
        assert train_ids | test_ids == {d.id for d in corpus.documents}
        for label in corpus.label_set:
            n_c = sum(1 for d in corpus.documents if d.label == label)
            want = min(max(_round_half_up(fraction * n_c), 1), n_c - 1)
            assert sum(1 for d in test.documents if d.label == label) == want

    def test_deterministic(self, synth_data):
        a = stratified_split(synth_data.corpus, 0.2, 7)
        b = stratified_split(synth_data.corpus, 0.2, 7)
        assert a == b

    def test_seed_changes_split(self, synth_data):
        a, _ = stratified_split(synth_data.corpus, 0.2, 0)
        b, _ = stratified_split(synth_data.corpus, 0.2, 1)
        assert {d.id for d in a.documents} != {d.id for d in b.documents}

    def test_rejects_fraction_bounds(self, synth_data):
        for bad in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                stratified_split(synth_data.corpus, bad, 0)

    def test_rejects_unlabeled(self):
        corpus = Corpus("c", ("x",), (one_doc("a", label="x"), one_doc("b")))
        with pytest.raises(ValidationError, match="unlabeled"):
            stratified_split(corpus, 0.5, 0)

    def test_rejects_singleton_class(self):
        docs = (one_doc("a", label="x"), one_doc("b", label="y"), one_doc("c", label="y"))
        with pytest.raises(ValidationError, match="need >="):
            stratified_split(Corpus("c", ("x", "y"), docs), 0.5, 0)


class TestSubsample:
    def test_full_fraction_is_identity(self, synth_data):
        assert subsample(synth_data.corpus, 1.0, 3).documents == synth_data.corpus.documents

    def test_preserves_corpus_order(self, synth_data):
        sub = subsample(synth_data.corpus, 0.4, 11)
        pos = {d.id: i for i, d in enumerate(synth_data.corpus.documents)}
        order = [pos[d.id] for d in sub.documents]
        assert order == sorted(order)

    @settings(max_examples=30, deadline=None)
    @given(
        f1=st.floats(min_value=0.05, max_value=1.0),
        f2=st.floats(min_value=0.05, max_value=1.0),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_nested_for_same_seed(self, synth_data, f1, f2, seed):
        lo, hi = sorted((f1, f2))
        small = {d.id for d in subsample(synth_data.corpus, lo, seed).documents}
        large = {d.id for d in subsample(synth_data.corpus, hi, seed).documents}
        assert small <= large

    def test_per_class_counts(self, synth_data):
        corpus = synth_data.corpus
        sub = subsample(corpus, 0.25, 5)
        for label in corpus.label_set:
            n_c = sum(1 for d in corpus.documents if d.label == label)
            got = sum(1 for d in sub.documents if d.label == label)
            assert got == max(_round_half_up(0.25 * n_c), 1)

    def test_tiny_fraction_keeps_one_per_class(self, synth_data):
        sub = subsample(synth_data.corpus, 0.001, 0)
        assert len(sub) == len(synth_data.corpus.label_set)

    def test_rejects_fraction_bounds(self, synth_data):
        for bad in (0.0, -0.5, 1.0001):
            with pytest.raises(ValueError):
                subsample(synth_data.corpus, bad, 0)
