import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affectlex.cooc import CoocMatrix, accumulate, count_corpus, merge
from affectlex.corpus import Document, Vocabulary, WindowConfig, window_pairs
from affectlex.errors import DataError


def test_accumulate_pair():
    m = accumulate([(0, 1), (1, 0)], 2)
    assert m[0, 1] == 1 and m[1, 0] == 1 and m[0, 0] == 0
    assert m.total == 2


def test_accumulate_empty():
    m = accumulate([], 3)
    assert m.total == 0 and m.nnz == 0
    np.testing.assert_array_equal(m.toarray(), np.zeros((3, 3)))


def test_accumulate_from_windows():
    vocab = Vocabulary.from_counts({"a": 2, "b": 1})
    m = accumulate(window_pairs(Document("d", ["a", "b", "a"]), vocab, WindowConfig(1)), 2)
    np.testing.assert_array_equal(m.toarray(), [[0, 2], [2, 0]])


def test_index_out_of_range():
    with pytest.raises(DataError):
        accumulate([(0, 3)], 3)


def test_marginals():
    m = accumulate([(0, 1), (0, 1), (2, 0)], 3)
    np.testing.assert_array_equal(m.row_sums, [2, 0, 1])
    np.testing.assert_array_equal(m.col_sums, [1, 2, 0])


def test_merge_identity_and_doubling():
    m = accumulate([(0, 1), (1, 0), (1, 1)], 2)
    assert merge(m, accumulate([], 2)) == m
    np.testing.assert_array_equal(merge(m, m).toarray(), 2 * m.toarray())


def test_merge_size_mismatch():
    with pytest.raises(DataError):
        merge(accumulate([], 2), accumulate([], 3))


pair = st.tuples(st.integers(0, 5), st.integers(0, 5))


@settings(max_examples=100, deadline=None)
@given(st.lists(pair, max_size=60), st.lists(pair, max_size=60))
def test_merge_equivalence(s1, s2):
    a, b = accumulate(s1, 6), accumulate(s2, 6)
    assert merge(a, b) == accumulate(s1 + s2, 6)
    assert merge(a, b) == merge(b, a)
    assert merge(a, b).total == len(s1) + len(s2)


def test_symmetric_stream_gives_symmetric_matrix(rng):
    vocab = Vocabulary.from_counts({c: 1 for c in "abcdef"})
    docs = [Document(str(i), rng.choice(list("abcdefxy"), 30).tolist()) for i in range(10)]
    m = count_corpus(docs, vocab, WindowConfig(3), shard_size=3)
    assert m.is_symmetric()
    brute = accumulate([p for d in docs for p in window_pairs(d, vocab, WindowConfig(3))], 6)
    assert m == brute


def test_roundtrip(tmp_path):
    m = accumulate([(2, 1), (0, 1), (0, 1), (1, 2)], 4)
    m.save(tmp_path / "c.tsv")
    lines = (tmp_path / "c.tsv").read_text().splitlines()
    assert lines[1:] == ["0\t1\t2.0", "1\t2\t1.0", "2\t1\t1.0"]
    assert CoocMatrix.load(tmp_path / "c.tsv") == m
    assert CoocMatrix.load(tmp_path / "c.tsv").vocab_size == 4
