"""Corpus ingestion, normalization, vocabulary extraction and context windows.

Two on-disk formats are understood:

* ``plain``: one document per ``*.txt`` file, whitespace tokenized.
* ``tsv``: ``token<TAB>lemma<TAB>pos`` lines, documents separated by blank
  lines. Files are read in sorted name order.
"""
from __future__ import annotations

import unicodedata
import warnings
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ConfigurationError, DataError


def is_punctuation(ch: str) -> bool:
    # Unicode P* (punctuation) and S* (symbols)
    return unicodedata.category(ch)[0] in "PS"


def is_punctuation_token(token: str) -> bool:
    return all(is_punctuation(ch) for ch in token)


def strip_punctuation(token: str) -> str:
    start, end = 0, len(token)
    while start < end and is_punctuation(token[start]):
        start += 1
    while end > start and is_punctuation(token[end - 1]):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> list[str]:
    """Whitespace split, then strip leading/trailing punctuation per token."""
    tokens = (strip_punctuation(t) for t in text.split())
    return [t for t in tokens if t]


@dataclass(frozen=True)
class Document:
    id: str
    tokens: tuple[str, ...]
    lemmas: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if self.lemmas is not None:
            object.__setattr__(self, "lemmas", tuple(self.lemmas))
            if len(self.lemmas) != len(self.tokens):
                raise DataError(
                    f"document {self.id!r}: {len(self.lemmas)} lemmas for "
                    f"{len(self.tokens)} tokens"
                )


def normalize(raw_tokens: Sequence[str], use_lemmas: bool = False,
              lemmas: Sequence[str] | None = None) -> list[str]:
    """Lowercase tokens and drop those made up of punctuation only.

    With ``use_lemmas`` the lemma layer replaces the surface forms before
    normalization.

    >>> normalize(["The", "Knight", ",", "rode"])
    ['the', 'knight', 'rode']
    """
    if use_lemmas:
        if lemmas is None:
            raise ConfigurationError("use_lemmas is set but no lemma layer is present")
        if len(lemmas) != len(raw_tokens):
            raise DataError("lemma layer length differs from token layer")
        raw_tokens = lemmas
    return [t.lower() for t in raw_tokens if t and not is_punctuation_token(t)]


def normalize_document(doc: Document, use_lemmas: bool = False) -> Document:
    tokens = normalize(doc.tokens, use_lemmas=use_lemmas, lemmas=doc.lemmas)
    return Document(doc.id, tokens)


@dataclass
class Vocabulary:
    """Frequency-filtered word list with dense indices.

    Words are ordered by descending count, ties broken lexicographically.
    """

    words: list[str]
    counts: dict[str, int]
    min_count: int = 1
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {w: i for i, w in enumerate(self.words)}

    @classmethod
    def from_counts(cls, counts: dict[str, int], min_count: int = 1) -> "Vocabulary":
        kept = {w: c for w, c in counts.items() if c >= min_count}
        words = sorted(kept, key=lambda w: (-kept[w], w))
        return cls(words, kept, min_count)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: object) -> bool:
        return word in self.index

    def __iter__(self) -> Iterator[str]:
        return iter(self.words)

    def __getitem__(self, word: str) -> int:
        return self.index[word]

    def get(self, word: str, default=None):
        return self.index.get(word, default)

    def count(self, word: str) -> int:
        return self.counts.get(word, 0)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for w in self.words:
                fh.write(f"{w}\t{self.counts[w]}\n")

    @classmethod
    def load(cls, path, min_count: int | None = None) -> "Vocabulary":
        counts: dict[str, int] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise DataError(f"{path}:{lineno}: expected 'word<TAB>count'")
                try:
                    counts[parts[0]] = int(parts[1])
                except ValueError:
                    raise DataError(f"{path}:{lineno}: non-integer count {parts[1]!r}") from None
        lowest = min(counts.values(), default=1)
        return cls.from_counts(counts, min_count if min_count is not None else lowest)


def count_tokens(documents: Iterable[Document]) -> Counter:
    counts: Counter = Counter()
    for doc in documents:
        counts.update(doc.tokens)
    return counts


def build_vocabulary(documents: Iterable[Document], min_count: int = 10) -> Vocabulary:
    """Count normalized tokens and keep those occurring at least ``min_count`` times."""
    if min_count < 1:
        raise ConfigurationError(f"min_count must be >= 1, got {min_count}")
    counts = count_tokens(documents)
    if not counts:
        warnings.warn("empty corpus: vocabulary is empty", stacklevel=2)
    return Vocabulary.from_counts(dict(counts), min_count)


@dataclass(frozen=True)
class WindowConfig:
    max_distance: int = 4
    respect_document_boundaries: bool = True
    respect_sentence_boundaries: bool = False

    def __post_init__(self):
        if self.max_distance < 1:
            raise ConfigurationError(f"window max_distance must be >= 1, got {self.max_distance}")


def window_pairs(document: Document, vocab: Vocabulary,
                 config: WindowConfig = WindowConfig()) -> Iterator[tuple[int, int]]:
    """Yield ``(word_index, context_index)`` for every in-vocabulary pair
    within ``config.max_distance`` positions of each other.

    Out-of-vocabulary tokens keep their position but never appear in a pair.
    """
    ids = [vocab.get(t, -1) for t in document.tokens]
    n = len(ids)
    for pos, center in enumerate(ids):
        if center < 0:
            continue
        lo = max(0, pos - config.max_distance)
        hi = min(n, pos + config.max_distance + 1)
        for other in range(lo, hi):
            if other != pos and ids[other] >= 0:
                yield center, ids[other]


def window_pair_arrays(document: Document, vocab: Vocabulary,
                       config: WindowConfig = WindowConfig()) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`window_pairs`; same multiset, different order."""
    ids = np.fromiter((vocab.get(t, -1) for t in document.tokens), dtype=np.int64,
                      count=len(document.tokens))
    rows, cols = [], []
    for d in range(1, min(config.max_distance, len(ids) - 1) + 1):
        left, right = ids[:-d], ids[d:]
        keep = (left >= 0) & (right >= 0)
        left, right = left[keep], right[keep]
        rows += [left, right]
        cols += [right, left]
    if not rows:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy()
    return np.concatenate(rows), np.concatenate(cols)


def read_plain(directory) -> Iterator[Document]:
    for path in sorted(Path(directory).glob("*.txt")):
        text = path.read_text(encoding="utf-8")
        yield Document(path.name, tokenize(text))


def read_tsv(directory) -> Iterator[Document]:
    paths = sorted(p for p in Path(directory).iterdir()
                   if p.is_file() and p.suffix in (".tsv", ".txt"))
    for path in paths:
        tokens: list[str] = []
        lemmas: list[str] = []
        n = 0

        def flush():
            nonlocal n
            doc = Document(f"{path.name}#{n}", tokens.copy(), lemmas.copy())
            n += 1
            tokens.clear()
            lemmas.clear()
            return doc

        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\r\n")
                if not line.strip():
                    if tokens:
                        yield flush()
                    continue
                parts = line.split("\t")
                if len(parts) < 2:
                    raise DataError(f"{path}:{lineno}: expected token<TAB>lemma[<TAB>pos]")
                tokens.append(parts[0])
                lemmas.append(parts[1])
        if tokens:
            yield flush()


def read_corpus(directory, fmt: str = "plain", use_lemmas: bool = False) -> Iterator[Document]:
    """Stream normalized documents from ``directory``. Empty documents are skipped."""
    if not Path(directory).is_dir():
        raise ConfigurationError(f"corpus directory not found: {directory}")
    if fmt == "plain":
        if use_lemmas:
            raise ConfigurationError("the plain format has no lemma layer")
        docs = read_plain(directory)
    elif fmt == "tsv":
        docs = read_tsv(directory)
    else:
        raise ConfigurationError(f"unknown corpus format {fmt!r}")
    for doc in docs:
        doc = normalize_document(doc, use_lemmas=use_lemmas)
        if doc.tokens:
            yield doc
