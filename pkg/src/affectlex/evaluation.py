"""Correlation scoring, Fisher z significance tests and inter-annotator agreement."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import DataError, NumericalError
from .lexicon import DIMENSIONS, VadLexicon, lexicon_hash


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DataError("pearson needs two 1-d sequences of equal length")
    if len(x) < 3:
        raise DataError(f"pearson needs at least 3 observations, got {len(x)}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = dx @ dx, dy @ dy
    if sxx == 0 or syy == 0:
        raise NumericalError("correlation undefined for a constant sequence")
    r = (dx @ dy) / math.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r)))


def kendall_tau(x: Sequence[float], y: Sequence[float]) -> float:
    """Kendall's tau-b with tie correction."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 3:
        raise DataError("kendall_tau needs two sequences of equal length >= 3")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise NumericalError("kendall tau undefined for an all-tied sequence")
    return float(stats.kendalltau(x, y, variant="b").statistic)


def normal_sf_two_sided(z: float) -> float:
    """``P(|Z| >= |z|)`` for a standard normal ``Z``."""
    return math.erfc(abs(z) / math.sqrt(2.0))


@dataclass(frozen=True)
class ZTestResult:
    z: float
    p_two_sided: float


def fisher_z_test(r1: float, n1: int, r2: float, n2: int) -> ZTestResult:
    """Compare two independent correlations via the Fisher transform.

    When both correlations are computed against the same gold words the
    samples overlap and the resulting p-value is anti-conservative.
    """
    if abs(r1) >= 1 or abs(r2) >= 1:
        raise NumericalError("Fisher transform is infinite for |r| = 1")
    if n1 < 4 or n2 < 4:
        raise DataError("fisher_z_test needs n >= 4 for both samples")
    z = (math.atanh(r1) - math.atanh(r2)) / math.sqrt(1.0 / (n1 - 3) + 1.0 / (n2 - 3))
    return ZTestResult(z, normal_sf_two_sided(z))


@dataclass
class CorrelationResult:
    per_dimension: dict[str, float]
    mean_r: float
    n: int
    overlap: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate(induced: VadLexicon, gold: VadLexicon) -> CorrelationResult:
    """Per-dimension Pearson r of induced against gold over their shared words."""
    overlap = [w for w in gold.words if w in induced]
    if len(overlap) < 3:
        missing = [w for w in gold.words if w not in induced]
        raise DataError(f"only {len(overlap)} gold words were induced (need 3); "
                        f"missing: {missing[:20]}")
    pred = induced.to_array(overlap)
    true = gold.to_array(overlap)
    per_dim = {dim: pearson(pred[:, i], true[:, i]) for i, dim in enumerate(DIMENSIONS)}
    mean_r = sum(per_dim.values()) / 3
    return CorrelationResult(per_dim, mean_r, len(overlap), overlap)


@dataclass
class AnnotatorTable:
    """Complete ``word x annotator`` table of VAD ratings (shape ``(W, A, 3)``)."""

    words: list[str]
    annotators: list[str]
    ratings: np.ndarray

    def __post_init__(self):
        self.ratings = np.asarray(self.ratings, dtype=np.float64)
        expected = (len(self.words), len(self.annotators), 3)
        if self.ratings.shape != expected:
            raise DataError(f"ratings shape {self.ratings.shape}, expected {expected}")
        if not np.all(np.isfinite(self.ratings)):
            raise DataError("annotator table has missing cells")

    @classmethod
    def from_lexicons(cls, lexicons: dict[str, VadLexicon]) -> "AnnotatorTable":
        """Build from one lexicon per annotator; every lexicon must rate the same words."""
        names = list(lexicons)
        words = lexicons[names[0]].words
        for name in names[1:]:
            if set(lexicons[name].words) != set(words):
                raise DataError(f"annotator {name!r} rated a different word set")
        ratings = np.stack([lexicons[n].to_array(words) for n in names], axis=1)
        return cls(words, names, ratings)


def iaa_sd(table: AnnotatorTable, ddof: int = 0) -> dict[str, float]:
    """Mean per-word rating SD for each dimension, plus their average under ``"mean"``.

    ``ddof=0`` gives the population SD; ``ddof=1`` the sample SD.
    """
    if len(table.annotators) < 2:
        raise DataError("agreement needs at least two annotators")
    sd = np.std(table.ratings, axis=1, ddof=ddof)  # (W, 3)
    per_dim = sd.mean(axis=0)
    result = {dim: float(v) for dim, v in zip(DIMENSIONS, per_dim)}
    result["mean"] = sum(result[d] for d in DIMENSIONS) / 3
    return result


def compare(result_a: CorrelationResult, result_b: CorrelationResult) -> ZTestResult:
    """Fisher z test on the mean correlations of two results."""
    return fisher_z_test(result_a.mean_r, result_a.n, result_b.mean_r, result_b.n)


def evaluation_report(induced: VadLexicon, gold: VadLexicon,
                      compare_with: VadLexicon | None = None) -> dict:
    """JSON-ready report of :func:`evaluate`, optionally with a z test against a second lexicon."""
    result = evaluate(induced, gold)
    report = {
        "result": result.to_dict(),
        "induced": {"hash": lexicon_hash(induced), "provenance": induced.provenance},
        "gold": {"hash": lexicon_hash(gold), "provenance": gold.provenance},
    }
    if compare_with is not None:
        other = evaluate(compare_with, gold)
        report["compare"] = {
            "result": other.to_dict(),
            "lexicon": {"hash": lexicon_hash(compare_with), "provenance": compare_with.provenance},
            "z_test": asdict(compare(result, other)),
        }
    return report
