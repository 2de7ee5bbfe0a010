import warnings

import numpy as np
import pytest
import scipy.sparse as sp

from affectlex.embed import EmbeddingStore
from affectlex.errors import ConfigurationError, DataError, NumericalError
from affectlex.evaluation import pearson
from affectlex.induce import (KnnParams, RandomWalkParams, build_graph, combine_passes,
                              induce, induce_knn, induce_parasim, induce_randomwalk, propagate,
                              seed_matrices, symmetric_transition)
from affectlex.lexicon import VadLexicon

from conftest import random_seeds, random_store
from oracles import fixed_point, knn_bruteforce

RAGE = (2.50, 6.62, 4.17)


def store_2d(**vectors):
    return EmbeddingStore(list(vectors), np.array(list(vectors.values()), dtype=float))


class TestKnn:
    def test_single_seed_copies(self, rng):
        store = random_store(rng, 10, 4)
        out = induce_knn(store, VadLexicon({"w003": RAGE}), KnnParams(1))
        assert all(out[w] == RAGE for w in store.words)

    def test_full_average(self, rng):
        store = random_store(rng, 10, 4)
        seeds = VadLexicon({"w001": (2, 4, 6), "w002": (4, 8, 2)})
        out = induce_knn(store, seeds, KnnParams(2))
        assert all(out[w] == (3, 6, 4) for w in store.words)

    def test_matches_bruteforce(self, rng):
        store = random_store(rng, 40, 5)
        seeds = random_seeds(rng, store.words, 10)
        out = induce_knn(store, seeds, KnnParams(3))
        expected = knn_bruteforce(store, seeds, 3)
        assert {w: tuple(out[w]) for w in store.words} == expected

    def test_tie_break_frequency_then_lexicographic(self):
        store = EmbeddingStore(["x", "a", "b", "c"], [[1, 0], [0, 1], [0, 1], [0, 1]],
                               counts={"a": 1, "b": 5, "c": 5})
        seeds = VadLexicon({"a": (1, 1, 1), "b": (3, 3, 3), "c": (9, 9, 9)})
        assert induce_knn(store, seeds, KnnParams(1))["x"] == (3, 3, 3)
        assert induce_knn(store, seeds, KnnParams(2))["x"] == (6, 6, 6)
        store.counts = None
        assert induce_knn(store, seeds, KnnParams(1))["x"] == (1, 1, 1)

    def test_k_too_large(self, rng):
        store = random_store(rng, 5, 3)
        with pytest.raises(ConfigurationError):
            induce_knn(store, VadLexicon({"w000": RAGE}), KnnParams(2))

    def test_seed_without_vector(self, rng):
        with pytest.raises(DataError):
            induce_knn(random_store(rng, 5, 3), VadLexicon({"nope": RAGE}), KnnParams(1))


class TestParaSim:
    def test_constant_seeds(self, rng):
        store = random_store(rng, 20, 4)
        seeds = VadLexicon({w: (4.5, 2.25, 7) for w in store.words[:5]})
        out = induce_parasim(store, seeds)
        np.testing.assert_array_equal(out.to_array(), np.tile([4.5, 2.25, 7], (20, 1)))

    def test_single_surviving_weight(self):
        store = store_2d(w=[1, 0], s1=[2, 0], s2=[0, 1])
        out = induce_parasim(store, VadLexicon({"s1": (2, 3, 4), "s2": (8, 8, 8)}))
        assert out["w"] == (2, 3, 4)

    def test_hand_computed_angles(self):
        c, s = np.cos(np.pi / 3), np.sin(np.pi / 3)
        store = store_2d(w=[1, 0], s0=[1, 0], s60=[c, s], s90=[0, 1])
        seeds = VadLexicon({"s0": (2, 2, 2), "s60": (5, 5, 5), "s90": (8, 8, 8)})
        np.testing.assert_allclose(induce_parasim(store, seeds)["w"], (3, 3, 3), atol=1e-12)

    def test_negative_similarity_clipped(self):
        store = store_2d(w=[1, 0], s1=[1, 0.2], s2=[-1, 0])
        out = induce_parasim(store, VadLexicon({"s1": (2, 2, 2), "s2": (8, 8, 8)}))
        assert out["w"] == (2, 2, 2)
        assert out.provenance["diagnostics"]["clipped_weights"] > 0

    def test_degenerate_gets_mean(self):
        store = store_2d(w=[0, 1], s1=[1, 0], s2=[2, 0], z=[0, 0])
        out = induce_parasim(store, VadLexicon({"s1": (2, 2, 2), "s2": (8, 4, 8)}))
        assert out["w"] == (5, 3, 5)
        assert out["z"] == (5, 3, 5)
        assert out.provenance["diagnostics"]["degenerate_words"] == 2


def test_convex_hull_property(rng):
    for _ in range(100):
        store = random_store(rng, int(rng.integers(5, 30)), int(rng.integers(2, 6)))
        seeds = random_seeds(rng, store.words, int(rng.integers(1, len(store))))
        k = int(rng.integers(1, len(seeds) + 1))
        lo, hi = seeds.to_array().min(0), seeds.to_array().max(0)
        for out in (induce_knn(store, seeds, KnnParams(k)), induce_parasim(store, seeds)):
            values = out.to_array()
            assert np.all(values >= lo) and np.all(values <= hi)


def test_seed_order_invariance(rng):
    store = random_store(rng, 60, 6)
    seeds = random_seeds(rng, store.words, 15)
    words = seeds.words
    shuffled = VadLexicon({w: seeds[w] for w in rng.permutation(words)})
    for algo in ("knn", "parasim", "randomwalk"):
        a = induce(store, seeds, algo, KnnParams(4), RandomWalkParams(graph_neighbors=8))
        b = induce(store, shuffled, algo, KnnParams(4), RandomWalkParams(graph_neighbors=8))
        np.testing.assert_array_equal(a.to_array(), b.to_array())


def test_affine_seed_rescaling(rng):
    store = random_store(rng, 50, 5)
    seeds = random_seeds(rng, store.words, 12)
    gold = rng.uniform(1, 9, 50)
    a, b = 0.37, 2.5
    moved = VadLexicon.from_array(seeds.words, a * seeds.to_array() + b, (a + b, 9 * a + b))
    for fn in (lambda s: induce_knn(store, s, KnnParams(5)), lambda s: induce_parasim(store, s)):
        x, y = fn(seeds).to_array(), fn(moved).to_array()
        np.testing.assert_allclose(y, a * x + b, rtol=0, atol=1e-12)
        for d in range(3):
            assert abs(pearson(x[:, d], gold) - pearson(y[:, d], gold)) < 1e-12


class TestGraph:
    def test_equidistant_complete(self):
        store = store_2d(a=[1, 1, 0], b=[1, 0, 1], c=[0, 1, 1])
        g = build_graph(store, RandomWalkParams(graph_neighbors=2))
        e = g.edges.toarray()
        np.testing.assert_allclose(e, 0.5 * (1 - np.eye(3)), atol=1e-12)
        np.testing.assert_allclose(g.transition.toarray(), e, atol=1e-12)  # degree 1 everywhere

    def test_isolated_vertex_self_loop(self):
        store = store_2d(a=[1, 0], b=[1, 0.1], z=[0, 0])
        g = build_graph(store, RandomWalkParams(graph_neighbors=1))
        assert list(g.isolated) == [2]
        assert g.transition[2, 2] == 1.0

    def test_symmetric_nonnegative(self, rng):
        g = build_graph(random_store(rng, 30, 4), RandomWalkParams(graph_neighbors=5))
        e = g.edges.toarray()
        assert np.all(e >= 0)
        np.testing.assert_array_equal(e, e.T)
        assert np.all((e > 0).sum(axis=1) >= 1)

    def test_spectral_radius(self, rng):
        beta = 0.9
        g = build_graph(random_store(rng, 10, 3), RandomWalkParams(beta=beta, graph_neighbors=3))
        radius = np.max(np.abs(np.linalg.eigvalsh(beta * g.transition.toarray())))
        assert radius <= beta + 1e-12


def random_graph(rng, n=20, density=0.3):
    w = np.triu(rng.random((n, n)) * (rng.random((n, n)) < density), 1)
    transition, _ = symmetric_transition(sp.csr_matrix(w + w.T))
    return transition


class TestRandomWalk:
    def test_fixed_point(self, rng):
        t = random_graph(rng)
        s = rng.random((20, 3))
        s /= s.sum(axis=0)
        p, iterations, converged = propagate(t, s, 0.9, tolerance=1e-12, max_iterations=10_000)
        assert converged
        np.testing.assert_allclose(p, fixed_point(t, s, 0.9), rtol=0, atol=1e-10)

    def test_tiny_beta_returns_seeds(self, rng):
        t = random_graph(rng)
        s = rng.random((20, 3))
        p, _, _ = propagate(t, s, 1e-12)
        np.testing.assert_allclose(p, s, atol=1e-10)

    def test_centered_seeds_give_center(self, rng):
        store = random_store(rng, 25, 4)
        seeds = VadLexicon({w: (5, 5, 5) for w in store.words[:6]})
        out = induce(store, seeds, "randomwalk", randomwalk=RandomWalkParams(graph_neighbors=5))
        np.testing.assert_allclose(out.to_array(), 5.0, atol=1e-12)

    def test_contraction(self, rng):
        t = random_graph(rng, 30)
        s = rng.random((30, 3))
        s /= s.sum(axis=0)
        p = np.full((30, 3), 1 / 30)
        deltas = []
        for _ in range(60):
            nxt = 0.9 * (t @ p) + 0.1 * s
            deltas.append(np.linalg.norm(nxt - p))
            p = nxt
        assert all(b <= a * (1 + 1e-12) for a, b in zip(deltas[1:], deltas[2:]))

    def test_vertex_permutation(self, rng):
        store = random_store(rng, 40, 5)
        seeds = random_seeds(rng, store.words, 8)
        perm = rng.permutation(40)
        permuted = EmbeddingStore([store.words[i] for i in perm], store.vectors[perm], store.counts)
        params = RandomWalkParams(graph_neighbors=6, tolerance=1e-12)
        a = induce(store, seeds, "randomwalk", randomwalk=params)
        b = induce(permuted, seeds, "randomwalk", randomwalk=params)
        np.testing.assert_allclose(b.to_array(store.words), a.to_array(), rtol=0, atol=1e-10)

    def test_non_convergence_flag(self, rng):
        store = random_store(rng, 30, 4)
        seeds = random_seeds(rng, store.words, 5)
        graph = build_graph(store, RandomWalkParams(graph_neighbors=5))
        with pytest.warns(UserWarning, match="did not converge"):
            out = induce_randomwalk(graph, seeds, RandomWalkParams(max_iterations=2))
        assert out.provenance["diagnostics"]["converged"] is False

    def test_zero_column(self, rng):
        store = random_store(rng, 10, 3)
        seeds = VadLexicon({"w000": (0.5, 0.5, 0.0), "w001": (0.2, 0.4, 0.0)}, scale=(0, 1))
        with pytest.raises(NumericalError):
            seed_matrices(build_graph(store), seeds)

    def test_seed_matrices_normalized(self, rng):
        store = random_store(rng, 10, 3)
        seeds = VadLexicon({"w000": (7, 2, 5), "w004": (3, 9, 6)})
        pos, neg = seed_matrices(build_graph(store), seeds)
        np.testing.assert_allclose(pos.sum(0), 1)
        np.testing.assert_allclose(neg.sum(0), 1)
        np.testing.assert_allclose(pos[0], [0.7, 2 / 11, 5 / 11])
        np.testing.assert_allclose(neg[0], [3 / 10, 8 / 9, 5 / 9])

    def test_unreached_is_neutral(self):
        out = combine_passes(np.array([[0.0, 0.2]]), np.array([[0.0, 0.6]]))
        np.testing.assert_array_equal(out, [[0.5, 0.25]])

    def test_direction(self, rng):
        # words near a high-valence seed end up above center, near a low one below
        store = store_2d(hi=[1, 0, 0], hi2=[0.9, 0.1, 0], lo=[0, 1, 0], lo2=[0.1, 0.9, 0])
        seeds = VadLexicon({"hi": (8, 5, 5), "lo": (2, 5, 5)})
        out = induce(store, seeds, "randomwalk", randomwalk=RandomWalkParams(graph_neighbors=1))
        assert out["hi2"].valence > 5 > out["lo2"].valence
