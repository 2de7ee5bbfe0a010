"""Valence-Arousal-Dominance lexicons: I/O, seed selection and scale transforms."""
from __future__ import annotations

import hashlib
import json
import math
import warnings
from decimal import Decimal
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Container, Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import ConfigurationError, DataError

DIMENSIONS = ("valence", "arousal", "dominance")
DEFAULT_SCALE = (1.0, 9.0)
HEADER = "word\tvalence\tarousal\tdominance"


class VadRating(NamedTuple):
    valence: float
    arousal: float
    dominance: float


def scale_center(scale: tuple[float, float] = DEFAULT_SCALE) -> float:
    return (scale[0] + scale[1]) / 2


def invert_about_center(rating: VadRating | Sequence[float],
                        scale: tuple[float, float] = DEFAULT_SCALE) -> VadRating:
    """Reflect each component about the scale center: ``v -> lo + hi - v``.

    On [1, 9] a valence of 7 becomes 3. The subtraction is carried out on the
    shortest decimal form of each value, so ratings with up to ~15
    significant digits (anything read from a lexicon file) invert exactly
    and inverting twice gives back the original float.
    """
    total = Decimal(repr(float(scale[0]))) + Decimal(repr(float(scale[1])))
    return VadRating(*(float(total - Decimal(repr(float(v)))) for v in rating))


@dataclass
class VadLexicon:
    """Ordered mapping word -> :class:`VadRating` on a shared scale."""

    entries: dict[str, VadRating]
    scale: tuple[float, float] = DEFAULT_SCALE
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = self.scale
        if not lo < hi:
            raise DataError(f"invalid scale {self.scale}")
        self.scale = (float(lo), float(hi))
        self.entries = {w: VadRating(*map(float, r)) for w, r in self.entries.items()}
        for w, r in self.entries.items():
            if not all(lo <= v <= hi for v in r):
                raise DataError(f"rating {tuple(r)} of {w!r} outside scale [{lo:g}, {hi:g}]")

    @classmethod
    def from_array(cls, words: Sequence[str], values: np.ndarray,
                   scale: tuple[float, float] = DEFAULT_SCALE,
                   provenance: dict | None = None) -> "VadLexicon":
        values = np.asarray(values, dtype=np.float64)
        entries = {w: VadRating(*row) for w, row in zip(words, values.tolist())}
        return cls(entries, scale, dict(provenance or {}))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: object) -> bool:
        return word in self.entries

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def __getitem__(self, word: str) -> VadRating:
        return self.entries[word]

    @property
    def words(self) -> list[str]:
        return list(self.entries)

    def to_array(self, words: Iterable[str] | None = None) -> np.ndarray:
        words = self.words if words is None else list(words)
        return np.array([self.entries[w] for w in words], dtype=np.float64).reshape(-1, 3)

    def restrict(self, words: Iterable[str]) -> "VadLexicon":
        keep = [w for w in words if w in self.entries]
        return VadLexicon({w: self.entries[w] for w in keep}, self.scale, dict(self.provenance))


def rescale(lexicon: VadLexicon, new_lo: float, new_hi: float) -> VadLexicon:
    """Affinely map every rating from the lexicon's scale onto ``[new_lo, new_hi]``."""
    if not new_lo < new_hi:
        raise ConfigurationError(f"new scale must satisfy lo < hi, got [{new_lo}, {new_hi}]")
    lo, hi = lexicon.scale
    if (lo, hi) == (new_lo, new_hi):
        return VadLexicon(dict(lexicon.entries), lexicon.scale, dict(lexicon.provenance))
    factor = (new_hi - new_lo) / (hi - lo)
    values = new_lo + (lexicon.to_array() - lo) * factor
    # guard against rounding just past the new bounds
    values = np.clip(values, new_lo, new_hi)
    return VadLexicon.from_array(lexicon.words, values, (new_lo, new_hi), lexicon.provenance)


def _parse_float(text: str, path, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"{path}:{lineno}: non-numeric rating {text!r}") from None
    if not math.isfinite(value):
        raise DataError(f"{path}:{lineno}: non-finite rating {text!r}")
    return value


def read_lexicon(path, scale: tuple[float, float] = DEFAULT_SCALE) -> VadLexicon:
    """Parse a ``word valence arousal dominance`` TSV file.

    Words are lowercased. Duplicates keep the last row (with a warning). A
    ``<path>.json`` sidecar, if present, becomes the provenance.
    """
    lo, hi = scale
    entries: dict[str, VadRating] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\r\n").split("\t")
        if [h.strip().lower() for h in header] != HEADER.split("\t"):
            raise DataError(f"{path}:1: expected header {HEADER!r}")
        for lineno, line in enumerate(fh, 2):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise DataError(f"{path}:{lineno}: expected 4 tab-separated fields")
            word = parts[0].strip().lower()
            values = [_parse_float(p, path, lineno) for p in parts[1:]]
            for v in values:
                if not lo <= v <= hi:
                    raise DataError(f"{path}:{lineno}: rating {v:g} outside scale [{lo:g}, {hi:g}]")
            if word in entries:
                warnings.warn(f"{path}:{lineno}: duplicate word {word!r}, keeping last", stacklevel=2)
            entries[word] = VadRating(*values)
    provenance = {"source": str(path)}
    sidecar = Path(f"{path}.json")
    if sidecar.exists():
        provenance = json.loads(sidecar.read_text(encoding="utf-8"))
    return VadLexicon(entries, scale, provenance)


def write_lexicon(lexicon: VadLexicon, path, sidecar: bool = True) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(HEADER + "\n")
        for w, r in lexicon.entries.items():
            fh.write(w + "\t" + "\t".join(repr(float(v)) for v in r) + "\n")
    if sidecar and lexicon.provenance:
        Path(f"{path}.json").write_text(
            json.dumps(lexicon.provenance, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_word_list(path) -> list[str]:
    """One word per line; blank lines and ``#`` comments ignored."""
    words = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                words.append(line.lower())
    return words


def limited_seed_words(language: str = "en") -> list[str]:
    """The packaged list of supposedly temporally stable seed words."""
    ref = resources.files("affectlex") / "data" / "seeds" / f"limited_{language}.txt"
    with resources.as_file(ref) as path:
        return read_word_list(path)


@dataclass(frozen=True)
class SeedSpec:
    """How to pick seeds: ``full`` (against a reference word list),
    ``limited`` or ``custom`` (against an explicit list)."""

    mode: str = "full"
    word_list: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.mode not in ("full", "limited", "custom"):
            raise ConfigurationError(f"unknown seed mode {self.mode!r}")
        if self.word_list is not None:
            object.__setattr__(self, "word_list", tuple(w.lower() for w in self.word_list))
        if self.mode in ("limited", "custom") and not self.word_list:
            raise ConfigurationError(f"{self.mode} seed selection requires a word list")

    @classmethod
    def limited(cls, language: str = "en") -> "SeedSpec":
        return cls("limited", tuple(limited_seed_words(language)))


def select_seeds(lexicon: VadLexicon, spec: SeedSpec, vocab: Container[str]) -> VadLexicon:
    """Intersect the lexicon with the selection's word list and the vocabulary.

    Listed words missing from the lexicon or the vocabulary are dropped with
    one warning each.
    """
    if not spec.word_list:
        raise ConfigurationError(f"{spec.mode} seed selection needs a non-empty word list")
    chosen: dict[str, VadRating] = {}
    for word in dict.fromkeys(spec.word_list):
        if word not in lexicon:
            warnings.warn(f"seed word {word!r} not in lexicon, dropped", stacklevel=2)
            continue
        if word not in vocab:
            warnings.warn(f"seed word {word!r} not in vocabulary, dropped", stacklevel=2)
            continue
        chosen[word] = lexicon[word]
    if not chosen:
        raise DataError(f"{spec.mode} seed selection is empty")
    provenance = {"seed_mode": spec.mode, "seed_count": len(chosen),
                  "lexicon": lexicon.provenance}
    return VadLexicon(chosen, lexicon.scale, provenance)


def lexicon_hash(lexicon: VadLexicon) -> str:
    h = hashlib.sha256()
    h.update(repr(lexicon.scale).encode())
    for w, r in lexicon.entries.items():
        h.update(f"{w}\t{r.valence!r}\t{r.arousal!r}\t{r.dominance!r}\n".encode("utf-8"))
    return h.hexdigest()
