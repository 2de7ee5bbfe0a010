"""Sparse word-context co-occurrence counts."""
from __future__ import annotations

from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .corpus import Document, Vocabulary, WindowConfig, window_pair_arrays
from .errors import DataError


class CoocMatrix:
    """Immutable ``vocab_size x vocab_size`` count matrix with cached marginals.

    Counts are stored as float64 so that weighted counting fits the same type.
    """

    def __init__(self, cells: sp.spmatrix | np.ndarray, vocab_size: int | None = None):
        cells = sp.csr_matrix(cells, dtype=np.float64)
        if vocab_size is not None and cells.shape != (vocab_size, vocab_size):
            raise DataError(f"matrix shape {cells.shape} does not match vocab size {vocab_size}")
        if cells.shape[0] != cells.shape[1]:
            raise DataError(f"co-occurrence matrix must be square, got {cells.shape}")
        cells.sum_duplicates()
        cells.eliminate_zeros()
        cells.sort_indices()
        if cells.nnz and cells.data.min() < 0:
            raise DataError("negative co-occurrence count")
        self.cells = cells
        self.vocab_size = cells.shape[0]
        self.row_sums = np.asarray(cells.sum(axis=1)).ravel()
        self.col_sums = np.asarray(cells.sum(axis=0)).ravel()
        self.total = float(self.row_sums.sum())

    def __getitem__(self, ij: tuple[int, int]) -> float:
        return float(self.cells[ij])

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoocMatrix) or other.vocab_size != self.vocab_size:
            return NotImplemented
        return (self.cells != other.cells).nnz == 0

    def __repr__(self) -> str:
        return f"CoocMatrix(vocab_size={self.vocab_size}, nnz={self.cells.nnz}, total={self.total:g})"

    @property
    def nnz(self) -> int:
        return self.cells.nnz

    def toarray(self) -> np.ndarray:
        return self.cells.toarray()

    def is_symmetric(self) -> bool:
        return (self.cells != self.cells.T).nnz == 0

    def save(self, path) -> None:
        """Write ``row<TAB>col<TAB>count`` triples sorted by (row, col)."""
        coo = self.cells.tocoo()
        order = np.lexsort((coo.col, coo.row))
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# vocab_size\t{self.vocab_size}\n")
            for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
                fh.write(f"{r}\t{c}\t{float(v)!r}\n")

    @classmethod
    def load(cls, path, vocab_size: int | None = None) -> "CoocMatrix":
        rows, cols, vals = [], [], []
        size = vocab_size
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, value = line[1:].strip().partition("\t")
                    if key == "vocab_size" and size is None:
                        size = int(value)
                    continue
                parts = line.split("\t")
                try:
                    r, c, v = int(parts[0]), int(parts[1]), float(parts[2])
                except (ValueError, IndexError):
                    raise DataError(f"{path}:{lineno}: expected 'row<TAB>col<TAB>count'") from None
                rows.append(r)
                cols.append(c)
                vals.append(v)
        if size is None:
            size = max(max(rows, default=-1), max(cols, default=-1)) + 1
        return _from_arrays(np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
                            np.array(vals, dtype=np.float64), size)


def _from_arrays(rows: np.ndarray, cols: np.ndarray, vals: np.ndarray | None,
                 vocab_size: int) -> CoocMatrix:
    if len(rows) and (rows.min() < 0 or cols.min() < 0
                      or rows.max() >= vocab_size or cols.max() >= vocab_size):
        raise DataError(f"pair index out of range for vocab size {vocab_size}")
    if vals is None:
        vals = np.ones(len(rows), dtype=np.float64)
    cells = sp.coo_matrix((vals, (rows, cols)), shape=(vocab_size, vocab_size))
    return CoocMatrix(cells.tocsr())


def accumulate(pairs: Iterable[tuple[int, int]], vocab_size: int) -> CoocMatrix:
    """Count each ``(word, context)`` pair of the stream into a matrix cell."""
    arr = np.array(list(pairs), dtype=np.int64).reshape(-1, 2)
    return _from_arrays(arr[:, 0], arr[:, 1], None, vocab_size)


def merge(a: CoocMatrix, b: CoocMatrix) -> CoocMatrix:
    if a.vocab_size != b.vocab_size:
        raise DataError(f"cannot merge matrices of vocab size {a.vocab_size} and {b.vocab_size}")
    return CoocMatrix(a.cells + b.cells)


def count_corpus(documents: Iterable[Document], vocab: Vocabulary,
                 config: WindowConfig = WindowConfig(), shard_size: int = 256) -> CoocMatrix:
    """Build the co-occurrence matrix of a document stream.

    Documents are counted in shards which are merged in stream order, so the
    result does not depend on how the stream is chunked.
    """
    n = len(vocab)
    result = CoocMatrix(sp.csr_matrix((n, n)))
    rows, cols = [], []

    def flush():
        nonlocal result
        if rows:
            shard = _from_arrays(np.concatenate(rows), np.concatenate(cols), None, n)
            result = merge(result, shard)
            rows.clear()
            cols.clear()

    for i, doc in enumerate(documents, 1):
        r, c = window_pair_arrays(doc, vocab, config)
        rows.append(r)
        cols.append(c)
        if i % shard_size == 0:
            flush()
    flush()
    return result
