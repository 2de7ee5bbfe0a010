from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affectlex.corpus import (Document, Vocabulary, WindowConfig, build_vocabulary, normalize,
                              read_corpus, tokenize, window_pair_arrays, window_pairs)
from affectlex.errors import ConfigurationError, DataError


def docs(*texts):
    return [Document(str(i), t.split()) for i, t in enumerate(texts)]


class TestNormalize:
    def test_lowercase_and_punctuation(self):
        assert normalize(["The", "Knight", ",", "rode"]) == ["the", "knight", "rode"]

    def test_empty(self):
        assert normalize([]) == []

    def test_punctuation_runs_dropped(self):
        assert normalize(["end", ".", ".", "."]) == ["end"]

    def test_symbols_count_as_punctuation(self):
        assert normalize(["§", "€", "--", "»", "ok"]) == ["ok"]

    def test_german_lowercase(self):
        assert normalize(["Ärger", "ÜBEL"]) == ["ärger", "übel"]

    def test_lemmas_substituted(self):
        assert normalize(["Rode", "Knights"], use_lemmas=True, lemmas=["ride", "knight"]) == ["ride", "knight"]

    def test_lemmas_missing(self):
        with pytest.raises(ConfigurationError):
            normalize(["a"], use_lemmas=True)


def test_tokenize_strips_edges():
    assert tokenize('"Well," said the knight -- rode on.') == ["Well", "said", "the", "knight", "rode", "on"]


def test_document_lemma_length_checked():
    with pytest.raises(DataError):
        Document("d", ["a", "b"], ["a"])


class TestVocabulary:
    def test_threshold(self):
        v = build_vocabulary(docs("a a a b"), min_count=2)
        assert dict(v.counts) == {"a": 3}

    def test_min_count_one(self):
        v = build_vocabulary(docs("a b", "a b"), min_count=1)
        assert v.counts == {"a": 2, "b": 2}
        assert v.words == ["a", "b"]

    def test_toy_count(self):
        v = build_vocabulary(docs("x y x y x"), min_count=3)
        assert v.counts == {"x": 3}

    def test_order_count_then_lexicographic(self):
        v = build_vocabulary(docs("c b b a a d d d"), min_count=1)
        assert v.words == ["d", "a", "b", "c"]
        assert [v[w] for w in v.words] == [0, 1, 2, 3]

    def test_empty_corpus_warns(self):
        with pytest.warns(UserWarning, match="empty"):
            v = build_vocabulary([], min_count=1)
        assert len(v) == 0

    def test_bad_min_count(self):
        with pytest.raises(ConfigurationError):
            build_vocabulary(docs("a"), min_count=0)

    def test_roundtrip(self, tmp_path):
        v = build_vocabulary(docs("a a b c c c"), min_count=1)
        v.save(tmp_path / "v.tsv")
        assert (tmp_path / "v.tsv").read_text() == "c\t3\na\t2\nb\t1\n"
        w = Vocabulary.load(tmp_path / "v.tsv")
        assert w.words == v.words and w.counts == v.counts


class TestWindows:
    vocab = Vocabulary.from_counts({"a": 1, "b": 1})

    def test_pair(self):
        doc = Document("d", ["a", "b"])
        assert Counter(window_pairs(doc, self.vocab, WindowConfig(4))) == Counter({(0, 1): 1, (1, 0): 1})

    def test_single_token(self):
        assert list(window_pairs(Document("d", ["a"]), self.vocab)) == []

    def test_oov_keeps_its_slot(self):
        doc = Document("d", ["a", "z", "b"])
        assert list(window_pairs(doc, self.vocab, WindowConfig(1))) == []
        assert sorted(window_pairs(doc, self.vocab, WindowConfig(2))) == [(0, 1), (1, 0)]

    def test_bad_window(self):
        with pytest.raises(ConfigurationError):
            WindowConfig(0)


words = st.sampled_from(list("abcdez"))


@settings(max_examples=200, deadline=None)
@given(st.lists(words, max_size=40), st.integers(1, 6))
def test_window_properties(tokens, window):
    vocab = Vocabulary.from_counts({w: 1 for w in "abcde"})
    doc = Document("d", tokens)
    pairs = Counter(window_pairs(doc, vocab, WindowConfig(window)))
    # symmetric with equal multiplicity
    assert all(pairs[(j, i)] == c for (i, j), c in pairs.items())
    assert sum(pairs.values()) <= 2 * window * len(tokens)
    rows, cols = window_pair_arrays(doc, vocab, WindowConfig(window))
    assert Counter(zip(rows.tolist(), cols.tolist())) == pairs


def test_pairs_do_not_cross_documents():
    vocab = Vocabulary.from_counts({"a": 1, "b": 1})
    pairs = [p for d in docs("a", "b") for p in window_pairs(d, vocab)]
    assert pairs == []


def test_read_plain(tmp_path):
    (tmp_path / "01.txt").write_text("The Knight, rode!\n", encoding="utf-8")
    (tmp_path / "02.txt").write_text("... \n", encoding="utf-8")
    (tmp_path / "00.txt").write_text("Ärger über alles", encoding="utf-8")
    out = list(read_corpus(tmp_path, "plain"))
    assert [d.id for d in out] == ["00.txt", "01.txt"]
    assert out[1].tokens == ("the", "knight", "rode")


def test_read_tsv_with_lemmas(tmp_path):
    (tmp_path / "c.tsv").write_text(
        "The\tthe\tDT\nKnights\tknight\tNNS\n,\t,\t,\n\nRode\tride\tVBD\n", encoding="utf-8")
    out = list(read_corpus(tmp_path, "tsv", use_lemmas=True))
    assert [d.tokens for d in out] == [("the", "knight"), ("ride",)]
    surface = list(read_corpus(tmp_path, "tsv"))
    assert surface[0].tokens == ("the", "knights")


def test_plain_has_no_lemmas(tmp_path):
    with pytest.raises(ConfigurationError):
        list(read_corpus(tmp_path, "plain", use_lemmas=True))


def test_deterministic(tmp_path):
    for i in range(5):
        (tmp_path / f"{i}.txt").write_text("a b c a b a " * (i + 1))
    v1 = build_vocabulary(read_corpus(tmp_path), 1)
    v2 = build_vocabulary(read_corpus(tmp_path), 1)
    assert v1.words == v2.words and v1.counts == v2.counts
