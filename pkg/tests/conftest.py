import numpy as np
import pytest

from affectlex.embed import EmbeddingStore
from affectlex.lexicon import VadLexicon

_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and rep.when == "call":
        _acceptance.append((marker.args[0], marker.args[1], rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, text, passed in sorted(_acceptance):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  AC{number:<2d} {text}")


def random_store(rng, n_words, dim, with_counts=True):
    words = [f"w{i:03d}" for i in range(n_words)]
    vectors = rng.normal(size=(n_words, dim))
    counts = {w: int(c) for w, c in zip(words, rng.integers(1, 50, n_words))} if with_counts else None
    return EmbeddingStore(words, vectors, counts)


def random_seeds(rng, words, n_seeds, scale=(1.0, 9.0)):
    chosen = rng.choice(words, size=n_seeds, replace=False)
    values = rng.uniform(scale[0], scale[1], size=(n_seeds, 3))
    return VadLexicon.from_array(list(chosen), values, scale)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
