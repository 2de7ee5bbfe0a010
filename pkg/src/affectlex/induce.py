"""Emotion induction: kNN, ParaSimNum and RandomWalkNum.

All three map an :class:`EmbeddingStore` plus a seed :class:`VadLexicon` to an
induced lexicon covering every word of the store. Seeds are processed in
lexicographic order internally so that the input order of the seed lexicon
never affects the result.
"""
from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass

import numpy as np
import scipy.sparse as sp

from .embed import EmbeddingStore
from .errors import ConfigurationError, DataError, NumericalError
from .lexicon import VadLexicon, invert_about_center, lexicon_hash

#: rows of the similarity matrix computed at once
BLOCK_SIZE = 2048

#: ParaSimNum denominators below this fall back to the seed mean
DEGENERATE_WEIGHT = 1e-9
TIE_DECIMALS = 12


@dataclass(frozen=True)
class KnnParams:
    k: int = 30

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class RandomWalkParams:
    beta: float = 0.9
    graph_neighbors: int = 25
    tolerance: float = 1e-6
    max_iterations: int = 1000

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise ConfigurationError(f"beta must lie in (0, 1), got {self.beta}")
        if self.graph_neighbors < 1:
            raise ConfigurationError("graph_neighbors must be >= 1")
        if self.tolerance <= 0:
            raise ConfigurationError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be >= 1")


def _seed_arrays(store: EmbeddingStore, seeds: VadLexicon) -> tuple[list[str], np.ndarray, np.ndarray]:
    words = sorted(seeds.words)
    missing = [w for w in words if w not in store]
    if missing:
        raise DataError(f"seed words without vectors: {missing[:10]}"
                        + (" ..." if len(missing) > 10 else ""))
    rows = np.array([store.index[w] for w in words], dtype=np.int64)
    return words, rows, seeds.to_array(words)


def _base_provenance(algorithm: str, params, store: EmbeddingStore, seeds: VadLexicon) -> dict:
    return {
        "algorithm": algorithm,
        "params": asdict(params) if params is not None else {},
        "embedding_hash": store.content_hash(),
        "seed_hash": lexicon_hash(seeds),
        "seed_count": len(seeds),
        "seeds": seeds.provenance,
    }


def _hull_clip(values: np.ndarray, seed_values: np.ndarray) -> np.ndarray:
    # weighted means are convex combinations; clip away rounding overshoot
    return np.clip(values, seed_values.min(axis=0), seed_values.max(axis=0))


def similarity_blocks(store: EmbeddingStore, targets: np.ndarray):
    """Yield ``(start, block)`` with cosine similarities of store rows to ``targets``."""
    unit = store.unit_vectors()
    target_unit = unit[targets]
    for start in range(0, len(store), BLOCK_SIZE):
        yield start, unit[start:start + BLOCK_SIZE] @ target_unit.T


def nearest_seeds(sims: np.ndarray, k: int, preference: np.ndarray) -> np.ndarray:
    """Column indices of the ``k`` largest entries per row.

    Similarities equal to ``TIE_DECIMALS`` places count as tied, so that
    mathematically equal cosines which differ by rounding still tie; ties
    prefer lower ``preference`` rank. Indices come back sorted ascending.
    """
    pref = np.broadcast_to(preference, sims.shape)
    order = np.lexsort((pref, -np.round(sims, TIE_DECIMALS)), axis=-1)
    return np.sort(order[:, :k], axis=1)


def induce_knn(store: EmbeddingStore, seeds: VadLexicon,
               params: KnnParams = KnnParams()) -> VadLexicon:
    """Average the ratings of the ``k`` seeds most cosine-similar to each word.

    Ties at the k-th neighbor prefer the more frequent seed, then the
    lexicographically smaller one.
    """
    words, rows, values = _seed_arrays(store, seeds)
    k = params.k
    if k > len(words):
        raise ConfigurationError(f"k={k} exceeds the number of seeds ({len(words)})")
    rank = sorted(range(len(words)), key=lambda j: (-store.count(words[j]), words[j]))
    preference = np.empty(len(words), dtype=np.int64)
    preference[rank] = np.arange(len(words))

    out = np.empty((len(store), 3))
    for start, sims in similarity_blocks(store, rows):
        chosen = nearest_seeds(sims, k, preference)
        acc = values[chosen[:, 0]].copy()
        for j in range(1, k):
            acc += values[chosen[:, j]]
        out[start:start + len(sims)] = acc / k
    out = _hull_clip(out, values)
    return VadLexicon.from_array(store.words, out, seeds.scale,
                                 _base_provenance("knn", params, store, seeds))


def induce_parasim(store: EmbeddingStore, seeds: VadLexicon) -> VadLexicon:
    """Similarity-weighted average of all seed ratings (ParaSimNum).

    Negative cosines are clipped to zero. Words whose total weight is below
    ``DEGENERATE_WEIGHT`` receive the plain seed mean.
    """
    words, rows, values = _seed_arrays(store, seeds)
    if not words:
        raise DataError("ParaSimNum needs at least one seed")
    seed_mean = values.mean(axis=0)
    out = np.empty((len(store), 3))
    clipped = 0
    degenerate: list[str] = []
    for start, sims in similarity_blocks(store, rows):
        clipped += int(np.count_nonzero(sims < 0))
        weights = np.maximum(sims, 0.0)
        denom = weights.sum(axis=1)
        bad = denom < DEGENERATE_WEIGHT
        safe = np.where(bad, 1.0, denom)
        block = (weights @ values) / safe[:, None]
        block[bad] = seed_mean
        out[start:start + len(sims)] = block
        degenerate += [store.words[start + i] for i in np.flatnonzero(bad)]
    out = _hull_clip(out, values)
    provenance = _base_provenance("parasim", None, store, seeds)
    provenance["diagnostics"] = {"clipped_weights": clipped,
                                 "degenerate_words": len(degenerate)}
    return VadLexicon.from_array(store.words, out, seeds.scale, provenance)


@dataclass
class LexicalGraph:
    """Similarity graph over the store's words with its normalized transition matrix."""

    words: list[str]
    edges: sp.csr_matrix
    transition: sp.csr_matrix
    isolated: np.ndarray

    @property
    def index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.words)}

    def __len__(self) -> int:
        return len(self.words)


def symmetric_transition(edges: sp.spmatrix) -> tuple[sp.csr_matrix, np.ndarray]:
    """``D^-1/2 E D^-1/2``; zero-degree vertices get a unit self-loop first."""
    edges = sp.csr_matrix(edges, dtype=np.float64)
    degree = np.asarray(edges.sum(axis=1)).ravel()
    isolated = np.flatnonzero(degree == 0)
    if len(isolated):
        loops = sp.csr_matrix((np.ones(len(isolated)), (isolated, isolated)), shape=edges.shape)
        edges = edges + loops
        degree = np.asarray(edges.sum(axis=1)).ravel()
    inv_sqrt = sp.diags(1.0 / np.sqrt(degree))
    transition = (inv_sqrt @ edges @ inv_sqrt).tocsr()
    transition.sort_indices()
    return transition, isolated


def _top_neighbors(sims: np.ndarray, n: int) -> list[np.ndarray]:
    # n largest per row, ties to the lower column index
    threshold = -np.partition(-sims, n - 1, axis=1)[:, n - 1]
    result = []
    for row, t in zip(sims, threshold):
        cand = np.flatnonzero(row >= t)
        cand = cand[np.argsort(-row[cand], kind="stable")]
        result.append(cand[:n])
    return result


def build_graph(store: EmbeddingStore, params: RandomWalkParams = RandomWalkParams()) -> LexicalGraph:
    """Connect each word to its ``graph_neighbors`` most similar words.

    Edge weight is ``max(cosine, 0)``; the two directed candidates of a pair
    are merged by taking the maximum.
    """
    size = len(store)
    if size == 0:
        raise DataError("cannot build a graph over an empty vocabulary")
    n = min(params.graph_neighbors, size - 1)
    rows, cols, vals = [], [], []
    if n > 0:
        for start, sims in similarity_blocks(store, np.arange(size)):
            local = np.arange(len(sims))
            sims[local, start + local] = -np.inf
            for i, nbrs in enumerate(_top_neighbors(sims, n)):
                w = np.maximum(sims[i, nbrs], 0.0)
                keep = w > 0
                rows.append(np.full(int(keep.sum()), start + i))
                cols.append(nbrs[keep])
                vals.append(w[keep])
    if rows:
        directed = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                                 shape=(size, size))
    else:
        directed = sp.csr_matrix((size, size))
    edges = directed.maximum(directed.T).tocsr()
    edges.sort_indices()
    transition, isolated = symmetric_transition(edges)
    return LexicalGraph(list(store.words), edges, transition, isolated)


def propagate(transition: sp.spmatrix, seed_matrix: np.ndarray, beta: float,
              tolerance: float = 1e-6, max_iterations: int = 1000) -> tuple[np.ndarray, int, bool]:
    """Iterate ``P <- beta * T @ P + (1 - beta) * S`` from ``P = 1/|V|``.

    Stops once the largest absolute entry change drops below ``tolerance``
    and, in addition, the iterate is provably within ``tolerance`` of the
    fixed point. Since ``||T||_2 <= 1``, each column's distance to the fixed
    point is at most ``beta / (1 - beta)`` times its last 2-norm step.
    Returns ``(P, iterations, converged)``.
    """
    size = seed_matrix.shape[0]
    p = np.full(seed_matrix.shape, 1.0 / size)
    forcing = (1.0 - beta) * seed_matrix
    factor = beta / (1.0 - beta)
    for it in range(1, max_iterations + 1):
        nxt = beta * (transition @ p) + forcing
        step = nxt - p
        p = nxt
        if not step.size:
            return p, it, True
        change = np.max(np.abs(step))
        bound = factor * np.max(np.linalg.norm(step, axis=0))
        if change < tolerance and bound < tolerance:
            return p, it, True
    return p, max_iterations, False


def _column_normalize(matrix: np.ndarray) -> np.ndarray:
    sums = matrix.sum(axis=0)
    if np.any(sums == 0):
        raise NumericalError("seed matrix has an all-zero column; cannot normalize")
    return matrix / sums


def seed_matrices(graph: LexicalGraph, seeds: VadLexicon) -> tuple[np.ndarray, np.ndarray]:
    """Column-normalized positive and center-inverted negative seed matrices."""
    index = graph.index
    words = sorted(seeds.words)
    missing = [w for w in words if w not in index]
    if missing:
        raise DataError(f"seed words not in graph: {missing[:10]}")
    rows = np.array([index[w] for w in words], dtype=np.int64)
    positive = np.zeros((len(graph), 3))
    negative = np.zeros((len(graph), 3))
    positive[rows] = seeds.to_array(words)
    negative[rows] = [invert_about_center(seeds[w], seeds.scale) for w in words]
    return _column_normalize(positive), _column_normalize(negative)


def combine_passes(p_pos: np.ndarray, p_neg: np.ndarray) -> np.ndarray:
    """``P+ / (P+ + P-)``; entries unreached by either pass become 0.5."""
    total = p_pos + p_neg
    out = np.full(total.shape, 0.5)
    np.divide(p_pos, total, out=out, where=total > 0)
    return out


def induce_randomwalk(graph: LexicalGraph, seeds: VadLexicon,
                      params: RandomWalkParams = RandomWalkParams(),
                      store: EmbeddingStore | None = None) -> VadLexicon:
    """RandomWalkNum: positive and inverted-negative propagation, combined
    and mapped from [0, 1] onto the seed scale.

    Pass ``store`` to record its hash in the provenance.
    """
    positive, negative = seed_matrices(graph, seeds)
    runs = {}
    for name, seed_matrix in (("positive", positive), ("negative", negative)):
        p, iterations, converged = propagate(graph.transition, seed_matrix, params.beta,
                                             params.tolerance, params.max_iterations)
        runs[name] = (p, iterations, converged)
        if not converged:
            warnings.warn(f"random walk ({name} pass) did not converge in "
                          f"{params.max_iterations} iterations", stacklevel=2)
    final = combine_passes(runs["positive"][0], runs["negative"][0])
    lo, hi = seeds.scale
    values = np.clip(lo + final * (hi - lo), lo, hi)
    provenance = {
        "algorithm": "randomwalk",
        "params": asdict(params),
        "embedding_hash": store.content_hash() if store is not None else None,
        "seed_hash": lexicon_hash(seeds),
        "seed_count": len(seeds),
        "seeds": seeds.provenance,
        "diagnostics": {
            "iterations": {k: v[1] for k, v in runs.items()},
            "converged": all(v[2] for v in runs.values()),
            "isolated_vertices": int(len(graph.isolated)),
        },
    }
    return VadLexicon.from_array(graph.words, values, seeds.scale, provenance)


def induce(store: EmbeddingStore, seeds: VadLexicon, algorithm: str,
           knn: KnnParams = KnnParams(),
           randomwalk: RandomWalkParams = RandomWalkParams()) -> VadLexicon:
    """Dispatch on ``algorithm`` in ``{"knn", "parasim", "randomwalk"}``."""
    if algorithm == "knn":
        return induce_knn(store, seeds, knn)
    if algorithm == "parasim":
        return induce_parasim(store, seeds)
    if algorithm == "randomwalk":
        return induce_randomwalk(build_graph(store, randomwalk), seeds, randomwalk, store)
    raise ConfigurationError(f"unknown induction algorithm {algorithm!r}")


ALGORITHMS = ("knn", "parasim", "randomwalk")
