"""PPMI weighting, truncated SVD and the dense embedding store."""
from __future__ import annotations

import hashlib
import struct
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import svds

from .cooc import CoocMatrix
from .errors import ConfigurationError, DataError, NumericalError

#: Matrices at least this large on both sides go through ARPACK instead of LAPACK.
DENSE_SVD_LIMIT = 500

BINARY_MAGIC = b"AFFEMB1\n"


@dataclass(frozen=True)
class PpmiMatrix:
    cells: sp.csr_matrix
    smoothing_alpha: float

    @property
    def vocab_size(self) -> int:
        return self.cells.shape[0]

    @property
    def nnz(self) -> int:
        return self.cells.nnz

    def toarray(self) -> np.ndarray:
        return self.cells.toarray()


def ppmi(cooc: CoocMatrix, alpha: float = 0.75) -> PpmiMatrix:
    """Positive PMI with context-distribution smoothing.

    ``weight(i, j) = max(0, log(count(i, j) * sum_k col(k)**alpha / (row(i) * col(j)**alpha)))``,
    which is ``p(i, j) / (p(i) * p_alpha(j))`` with the totals cancelled.
    Non-positive cells are not stored.
    """
    if not 0 < alpha <= 1:
        raise ConfigurationError(f"smoothing alpha must lie in (0, 1], got {alpha}")
    if cooc.total <= 0:
        raise NumericalError("cannot compute PPMI of an empty co-occurrence matrix")
    coo = cooc.cells.tocoo()
    col_pow = cooc.col_sums ** alpha
    smoothed_total = col_pow.sum()
    ratio = (coo.data * smoothed_total) / (cooc.row_sums[coo.row] * col_pow[coo.col])
    weights = np.log(ratio)
    keep = weights > 0
    cells = sp.csr_matrix((weights[keep], (coo.row[keep], coo.col[keep])),
                          shape=cooc.cells.shape)
    cells.sort_indices()
    return PpmiMatrix(cells, alpha)


def _fix_signs(u: np.ndarray, vt: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # make the largest-magnitude entry of each left singular vector positive
    rows = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[rows, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs, vt * signs[:, None]


def truncated_svd(matrix, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Top-``k`` singular triplets ``(U, s, Vt)`` in descending order.

    Small matrices use a dense LAPACK decomposition, large ones ARPACK with a
    fixed start vector. Signs follow :func:`_fix_signs`. If the numerical rank
    is below ``k`` only rank-many triplets are returned, with a warning.
    """
    shape = matrix.shape
    if k < 1 or k > min(shape):
        raise ConfigurationError(f"SVD dimension {k} outside [1, {min(shape)}]")
    if min(shape) < DENSE_SVD_LIMIT or k >= min(shape) - 1:
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix, dtype=np.float64)
        u, s, vt = np.linalg.svd(dense, full_matrices=False)
        u, s, vt = u[:, :k], s[:k], vt[:k]
    else:
        op = sp.csr_matrix(matrix, dtype=np.float64)
        v0 = np.full(min(shape), 1.0 / np.sqrt(min(shape)))
        u, s, vt = svds(op, k=k, v0=v0, solver="arpack", maxiter=max(1000, 10 * k))
        order = np.argsort(-s, kind="stable")
        u, s, vt = u[:, order], s[order], vt[order]
    if not np.all(np.isfinite(s)):
        raise NumericalError("SVD produced non-finite singular values")
    scale = s[0] if len(s) else 0.0
    tol = scale * max(shape) * np.finfo(np.float64).eps
    rank = int(np.count_nonzero(s > tol))
    if rank < k:
        warnings.warn(f"requested {k} dimensions but matrix rank is {rank}; "
                      f"returning {rank}", stacklevel=2)
        u, s, vt = u[:, :rank], s[:rank], vt[:rank]
    u, vt = _fix_signs(u, vt)
    return u, s, vt


@dataclass
class EmbeddingStore:
    """Dense vector per word, queried by cosine similarity."""

    words: list[str]
    vectors: np.ndarray
    counts: dict[str, int] | None = None
    combined_wc: bool = False
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.words = list(self.words)
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.words):
            raise DataError(f"{len(self.words)} words but vectors of shape {self.vectors.shape}")
        if not np.all(np.isfinite(self.vectors)):
            raise NumericalError("embedding contains NaN or Inf")
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise DataError("duplicate words in embedding store")

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: object) -> bool:
        return word in self.index

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def vector(self, word: str) -> np.ndarray:
        try:
            return self.vectors[self.index[word]]
        except KeyError:
            raise KeyError(f"word not in embedding: {word!r}") from None

    def count(self, word: str) -> int:
        return 0 if self.counts is None else self.counts.get(word, 0)

    def unit_vectors(self) -> np.ndarray:
        """Row-normalized vectors; all-zero rows stay zero."""
        norms = np.linalg.norm(self.vectors, axis=1, keepdims=True)
        return np.divide(self.vectors, norms, out=np.zeros_like(self.vectors), where=norms > 0)

    def cosine(self, w1: str, w2: str) -> float:
        v1, v2 = self.vector(w1), self.vector(w2)
        n1, n2 = np.linalg.norm(v1), np.linalg.norm(v2)
        if n1 == 0 or n2 == 0:
            raise NumericalError(f"cosine undefined for zero vector ({w1!r}, {w2!r})")
        if w1 == w2:
            return 1.0
        return float(np.clip(np.dot(v1, v2) / (n1 * n2), -1.0, 1.0))

    def subset(self, words: Iterable[str]) -> "EmbeddingStore":
        keep = [w for w in words if w in self.index]
        rows = [self.index[w] for w in keep]
        counts = None if self.counts is None else {w: self.counts.get(w, 0) for w in keep}
        return EmbeddingStore(keep, self.vectors[rows], counts, self.combined_wc, dict(self.metadata))

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update("\n".join(self.words).encode("utf-8"))
        h.update(np.ascontiguousarray(self.vectors, dtype="<f8").tobytes())
        return h.hexdigest()

    def save_text(self, path) -> None:
        """word2vec text format: ``N d`` header then ``word v1 ... vd``."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"{len(self)} {self.dimension}\n")
            for w, row in zip(self.words, self.vectors):
                fh.write(w + " " + " ".join(repr(float(x)) for x in row) + "\n")

    def save_binary(self, path) -> None:
        """Little-endian binary: magic, uint64 N, uint64 d, word table, float32 rows."""
        with open(path, "wb") as fh:
            fh.write(BINARY_MAGIC)
            fh.write(struct.pack("<QQ", len(self), self.dimension))
            for w in self.words:
                raw = w.encode("utf-8")
                fh.write(struct.pack("<I", len(raw)))
                fh.write(raw)
            fh.write(np.ascontiguousarray(self.vectors, dtype="<f4").tobytes())


def svd_embed(matrix: PpmiMatrix, dimension: int = 300, eigenvalue_weight: float = 0.0,
              combine_wc: bool = True, words: Sequence[str] | None = None,
              counts: dict[str, int] | None = None) -> EmbeddingStore:
    """Factor a PPMI matrix into word vectors.

    Word vectors are ``U * s**eigenvalue_weight``; with ``combine_wc`` the
    context vectors ``V`` are added row-wise. The default weight of 0 drops
    the singular values entirely.
    """
    n = matrix.vocab_size
    if dimension > n:
        raise ConfigurationError(f"dimension {dimension} exceeds vocabulary size {n}")
    if matrix.nnz == 0:
        raise NumericalError("PPMI matrix has no positive entries")
    u, s, vt = truncated_svd(matrix.cells, dimension)
    vectors = u * s ** eigenvalue_weight
    if combine_wc:
        vectors = vectors + vt.T
    if words is None:
        words = [str(i) for i in range(n)]
    meta = {
        "dimension_requested": dimension,
        "eigenvalue_weight": eigenvalue_weight,
        "smoothing_alpha": matrix.smoothing_alpha,
        "singular_values": [float(x) for x in s],
    }
    return EmbeddingStore(list(words), vectors, counts, combine_wc, meta)


def load_external(path, vocab_filter: Iterable[str] | None = None) -> EmbeddingStore:
    """Read word2vec-style text vectors, keeping only words in ``vocab_filter``."""
    wanted = None if vocab_filter is None else set(vocab_filter)
    words: list[str] = []
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        try:
            n, d = int(header[0]), int(header[1])
        except (ValueError, IndexError):
            raise DataError(f"{path}:1: expected header 'N d'") from None
        if len(header) != 2:
            raise DataError(f"{path}:1: expected header 'N d'")
        seen = 0
        for lineno, line in enumerate(fh, 2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(" ")
            if len(parts) != d + 1:
                raise DataError(f"{path}:{lineno}: expected {d} values, found {len(parts) - 1}")
            seen += 1
            if wanted is not None and parts[0] not in wanted:
                continue
            try:
                rows.append([float(x) for x in parts[1:]])
            except ValueError:
                raise DataError(f"{path}:{lineno}: non-numeric vector component") from None
            words.append(parts[0])
    if seen != n:
        raise DataError(f"{path}: header announces {n} rows, found {seen}")
    vectors = np.array(rows, dtype=np.float64).reshape(len(rows), d)
    return EmbeddingStore(words, vectors, metadata={"source": str(path)})


def load_binary(path) -> EmbeddingStore:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(BINARY_MAGIC):
        raise DataError(f"{path}: not an affemb1 file")
    pos = len(BINARY_MAGIC)
    n, d = struct.unpack_from("<QQ", data, pos)
    pos += 16
    words = []
    for _ in range(n):
        (length,) = struct.unpack_from("<I", data, pos)
        pos += 4
        words.append(data[pos:pos + length].decode("utf-8"))
        pos += length
    expected = n * d * 4
    if len(data) - pos != expected:
        raise DataError(f"{path}: truncated vector block")
    vectors = np.frombuffer(data, dtype="<f4", count=n * d, offset=pos).reshape(n, d)
    return EmbeddingStore(words, vectors.astype(np.float64), metadata={"source": str(path)})


def load_store(path, vocab_filter: Iterable[str] | None = None) -> EmbeddingStore:
    """Load either format, sniffing the binary magic."""
    with open(path, "rb") as fh:
        head = fh.read(len(BINARY_MAGIC))
    if head == BINARY_MAGIC:
        store = load_binary(path)
        if vocab_filter is None:
            return store
        wanted = set(vocab_filter)
        return store.subset(w for w in store.words if w in wanted)
    return load_external(path, vocab_filter)
