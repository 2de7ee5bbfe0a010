"""
From a raw corpus to SVD_PPMI word vectors
==========================================

Count a vocabulary, collect windowed co-occurrences, reweight them with
smoothed PPMI and factorize with a truncated SVD. Uses a small synthetic
corpus so that it runs in a couple of seconds.
"""
import tempfile
from pathlib import Path

import numpy as np

from affectlex.cooc import count_corpus
from affectlex.corpus import WindowConfig, build_vocabulary, read_corpus
from affectlex.embed import load_store, ppmi, svd_embed
from affectlex.synthetic import make_experiment

workdir = Path(tempfile.mkdtemp())
paths = make_experiment(n_tokens=100_000, random_state=0).write(workdir)

###############################################################################
# Vocabulary: words seen at least ``min_count`` times, most frequent first.
vocab = build_vocabulary(read_corpus(paths["corpus"]), min_count=5)
print(len(vocab), "words; most frequent:", vocab.words[:5])

###############################################################################
# Symmetric window of 4 tokens on either side. Out-of-vocabulary tokens keep
# their slot, so they still separate in-vocabulary neighbours.
cooc = count_corpus(read_corpus(paths["corpus"]), vocab, WindowConfig(4))
print(cooc, "symmetric:", cooc.is_symmetric())

###############################################################################
# Context-distribution smoothing (alpha = 0.75) dampens PPMI's bias towards
# rare contexts. Most cells end up zero.
weights = ppmi(cooc, alpha=0.75)
print(f"PPMI density {weights.nnz / len(vocab) ** 2:.3f}")

###############################################################################
# Keep 30 dimensions, add word and context vectors.
store = svd_embed(weights, dimension=30, words=vocab.words, counts=dict(vocab.counts))
print("leading singular values:", np.round(store.metadata["singular_values"][:5], 2))

###############################################################################
# Words drawn from the same topic are close; words from different topics are not.
print("same topic :", round(store.cosine("topicaseed00", "topicagold00"), 3))
print("other topic:", round(store.cosine("topicaseed00", "topicbgold00"), 3))

###############################################################################
# The binary format round-trips at float32 precision.
store.save_binary(workdir / "model.affemb")
again = load_store(workdir / "model.affemb")
print("max round-trip error:", np.abs(again.vectors - store.vectors).max())
