"""
Three ways to induce emotion ratings
====================================

kNN averages the nearest seeds, ParaSimNum weights every seed by its cosine
similarity, and RandomWalkNum propagates seed values over a nearest-neighbour
graph. We compare them with a full and a tiny seed lexicon.
"""
import warnings

import numpy as np

from affectlex.cooc import count_corpus
from affectlex.corpus import Document, build_vocabulary
from affectlex.embed import ppmi, svd_embed
from affectlex.evaluation import evaluate
from affectlex.induce import KnnParams, RandomWalkParams, induce
from affectlex.lexicon import SeedSpec, select_seeds
from affectlex.synthetic import make_experiment

exp = make_experiment(random_state=3)
docs = [Document(str(i), tuple(d)) for i, d in enumerate(exp.documents)]
vocab = build_vocabulary(docs, min_count=5)
store = svd_embed(ppmi(count_corpus(docs, vocab)), 30, words=vocab.words,
                  counts=dict(vocab.counts))

###############################################################################
# The seed lexicon is restricted to words that have a vector. Asking for the
# limited subset by word list gives 6 seeds instead of 60.
full = select_seeds(exp.seeds_full, SeedSpec("full", tuple(exp.seeds_full.words)), store)
limited = select_seeds(exp.seeds_full, SeedSpec("limited", tuple(exp.seeds_limited.words)), store)
print(len(full), "full seeds,", len(limited), "limited seeds")

###############################################################################
# Induce with each algorithm and score against the held-out gold words.
knn, walk = KnnParams(k=5), RandomWalkParams(graph_neighbors=10)
print(f"{'algorithm':<12}{'full':>8}{'limited':>9}")
for algo in ("knn", "parasim", "randomwalk"):
    scores = []
    for seeds in (full, limited):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            lexicon = induce(store, seeds, algo, knn, walk)
        scores.append(evaluate(lexicon, exp.gold).mean_r)
    print(f"{algo:<12}{scores[0]:>8.3f}{scores[1]:>9.3f}")

###############################################################################
# kNN with k=5 and only two seeds per topic must borrow from other topics,
# which is why it suffers most from the limited seed set.
lexicon = induce(store, limited, "knn", knn)
print("kNN valence of a gold word:", lexicon["topicagold00"].valence,
      "true:", exp.gold["topicagold00"].valence)

###############################################################################
# Random-walk provenance records convergence diagnostics.
lexicon = induce(store, full, "randomwalk", randomwalk=walk)
print(lexicon.provenance["diagnostics"])
