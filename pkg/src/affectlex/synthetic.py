"""Synthetic corpora in which distributional similarity encodes emotion.

Each of a few latent topics owns a set of content words and a VAD profile.
Documents are drawn from a single topic, mixing its content words with a
shared pool of function words, so words of one topic end up close in the
embedding space. Seed ratings scatter around the topic profile (an imperfect
contemporary lexicon); gold ratings are the topic profile itself.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lexicon import VadLexicon, write_lexicon

DEFAULT_PROFILES = (
    (2.50, 6.62, 4.17),
    (8.01, 7.19, 5.84),
    (7.25, 2.49, 7.09),
)


@dataclass
class SyntheticExperiment:
    documents: list[list[str]]
    seeds_full: VadLexicon
    seeds_limited: VadLexicon
    gold: VadLexicon
    profiles: np.ndarray

    @property
    def n_tokens(self) -> int:
        return sum(len(d) for d in self.documents)

    def write(self, directory) -> dict[str, Path]:
        """Write corpus (plain format), seed lexicon, limited list and gold."""
        directory = Path(directory)
        corpus = directory / "corpus"
        corpus.mkdir(parents=True, exist_ok=True)
        width = len(str(len(self.documents)))
        for i, doc in enumerate(self.documents):
            (corpus / f"doc{i:0{width}d}.txt").write_text(" ".join(doc) + "\n", encoding="utf-8")
        paths = {
            "corpus": corpus,
            "seeds": directory / "seeds.tsv",
            "limited": directory / "limited.txt",
            "gold": directory / "gold.tsv",
        }
        write_lexicon(self.seeds_full, paths["seeds"], sidecar=False)
        write_lexicon(self.gold, paths["gold"], sidecar=False)
        paths["limited"].write_text("\n".join(self.seeds_limited.words) + "\n", encoding="utf-8")
        return paths


def make_experiment(n_tokens: int = 200_000, doc_length: int = 100,
                    seeds_per_topic: int = 20, gold_per_topic: tuple[int, ...] = (14, 13, 13),
                    limited_per_topic: int = 2, filler_per_topic: int = 10,
                    function_words: int = 100, topic_share: float = 0.5,
                    seed_noise: float = 1.0, profiles=DEFAULT_PROFILES,
                    random_state: int = 0) -> SyntheticExperiment:
    rng = np.random.default_rng(random_state)
    profiles = np.asarray(profiles, dtype=np.float64)
    n_topics = len(profiles)
    names = ["topic" + chr(ord("a") + t) for t in range(n_topics)]

    topic_words: list[list[str]] = []
    seed_words: list[list[str]] = []
    gold_words: list[list[str]] = []
    for t, name in enumerate(names):
        seeds = [f"{name}seed{i:02d}" for i in range(seeds_per_topic)]
        gold = [f"{name}gold{i:02d}" for i in range(gold_per_topic[t])]
        filler = [f"{name}other{i:02d}" for i in range(filler_per_topic)]
        seed_words.append(seeds)
        gold_words.append(gold)
        topic_words.append(seeds + gold + filler)
    shared = [f"func{i:03d}" for i in range(function_words)]
    zipf = 1.0 / np.arange(1, function_words + 1)
    zipf /= zipf.sum()

    documents = []
    for _ in range(max(1, n_tokens // doc_length)):
        t = rng.integers(n_topics)
        from_topic = rng.random(doc_length) < topic_share
        content = rng.choice(topic_words[t], size=doc_length)
        function = rng.choice(shared, size=doc_length, p=zipf)
        documents.append(np.where(from_topic, content, function).tolist())

    full, limited, gold = {}, {}, {}
    for t in range(n_topics):
        for i, w in enumerate(seed_words[t]):
            rating = np.clip(profiles[t] + rng.normal(0.0, seed_noise, 3), 1.0, 9.0)
            full[w] = tuple(rating)
            if i < limited_per_topic:
                limited[w] = full[w]
        for w in gold_words[t]:
            gold[w] = tuple(profiles[t])
    return SyntheticExperiment(documents, VadLexicon(full), VadLexicon(limited),
                               VadLexicon(gold), profiles)
