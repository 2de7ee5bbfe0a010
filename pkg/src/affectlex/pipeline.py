"""End-to-end experiments: corpus -> embedding -> induced lexicons -> report.

Expensive intermediates (vocabulary, co-occurrences, embedding) are cached
under a key derived from the hashes of their inputs, so the whole grid of
algorithms and seed selections shares one embedding.
"""
from __future__ import annotations

import configparser
import hashlib
import itertools
import json
import logging
import os
import time
import warnings
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from . import __version__
from .cooc import CoocMatrix, count_corpus
from .corpus import Vocabulary, WindowConfig, build_vocabulary, read_corpus
from .embed import EmbeddingStore, load_binary, load_store, ppmi, svd_embed
from .errors import AffectlexError, ConfigurationError, DataError, NumericalError
from .evaluation import CorrelationResult, evaluate, fisher_z_test
from .induce import ALGORITHMS, KnnParams, RandomWalkParams, induce
from .lexicon import (SeedSpec, VadLexicon, lexicon_hash, limited_seed_words,
                      read_lexicon, read_word_list, select_seeds, write_lexicon)

log = logging.getLogger(__name__)

SEED_MODES = ("full", "limited", "custom")
PATH_FIELDS = ("corpus", "external_embedding", "seed_lexicon", "reference_list",
               "limited_list", "custom_list", "gold")

# INI section -> option names
INI_LAYOUT = {
    "corpus": ("corpus", "corpus_format", "use_lemmas", "slice_label"),
    "vocab": ("min_count",),
    "cooc": ("window",),
    "embed": ("dim", "alpha", "eig_weight", "combine_wc", "external_embedding", "embedding_label"),
    "seeds": ("seed_lexicon", "seed_modes", "reference_list", "limited_list", "custom_list",
              "scale_lo", "scale_hi"),
    "induce": ("algorithms", "k", "beta", "neighbors", "tolerance", "max_iterations"),
    "gold": ("gold",),
    "output": ("output_dir", "cache_dir"),
}


@dataclass
class ExperimentConfig:
    seed_lexicon: str
    gold: str
    output_dir: str
    corpus: str | None = None
    corpus_format: str = "plain"
    use_lemmas: bool = False
    slice_label: str = ""
    window: int = 4
    min_count: int = 10
    dim: int = 300
    alpha: float = 0.75
    eig_weight: float = 0.0
    combine_wc: bool = True
    external_embedding: str | None = None
    embedding_label: str = "SVD_PPMI"
    seed_modes: tuple[str, ...] = ("full", "limited")
    reference_list: str | None = None
    limited_list: str | None = None
    custom_list: str | None = None
    scale_lo: float = 1.0
    scale_hi: float = 9.0
    algorithms: tuple[str, ...] = ALGORITHMS
    k: int = 30
    beta: float = 0.9
    neighbors: int = 25
    tolerance: float = 1e-6
    max_iterations: int = 1000
    cache_dir: str | None = None

    def __post_init__(self):
        self.seed_modes = tuple(self.seed_modes)
        self.algorithms = tuple(self.algorithms)

    @classmethod
    def from_ini(cls, path, overrides: dict | None = None) -> "ExperimentConfig":
        """Read an INI file with one section per stage; ``overrides`` win."""
        parser = configparser.ConfigParser()
        if not parser.read(path, encoding="utf-8"):
            raise ConfigurationError(f"cannot read config file {path}")
        types = {f.name: f.type for f in fields(cls)}
        values: dict = {}
        for section, names in INI_LAYOUT.items():
            if not parser.has_section(section):
                continue
            for name in names:
                if parser.has_option(section, name):
                    values[name] = _coerce(name, parser.get(section, name), types[name])
        unknown = [f"{s}.{o}" for s in parser.sections() for o in parser.options(s)
                   if s not in INI_LAYOUT or o not in INI_LAYOUT[s]]
        if unknown:
            raise ConfigurationError(f"unknown config options: {', '.join(unknown)}")
        base = Path(path).resolve().parent
        for name in PATH_FIELDS + ("output_dir", "cache_dir"):
            if values.get(name):
                p = Path(values[name])
                values[name] = str(p if p.is_absolute() else base / p)
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        try:
            return cls(**values)
        except TypeError as exc:
            raise ConfigurationError(str(exc)) from None

    def validate(self) -> None:
        if self.corpus is None and self.external_embedding is None:
            raise ConfigurationError("either a corpus or an external embedding is required")
        for name in PATH_FIELDS:
            value = getattr(self, name)
            if value is not None and not Path(value).exists():
                raise ConfigurationError(f"{name}: path does not exist: {value}")
        for mode in self.seed_modes:
            if mode not in SEED_MODES:
                raise ConfigurationError(f"unknown seed mode {mode!r}")
        if "custom" in self.seed_modes and not self.custom_list:
            raise ConfigurationError("custom seed mode requires custom_list")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ConfigurationError(f"unknown algorithm {algo!r}")
        if self.corpus_format not in ("plain", "tsv"):
            raise ConfigurationError(f"unknown corpus format {self.corpus_format!r}")
        WindowConfig(self.window)
        RandomWalkParams(self.beta, self.neighbors, self.tolerance, self.max_iterations)
        KnnParams(self.k)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["seed_modes"] = list(self.seed_modes)
        d["algorithms"] = list(self.algorithms)
        return d


def _coerce(name: str, raw: str, annotation: str):
    raw = raw.strip()
    if "tuple" in annotation:
        return tuple(x.strip() for x in raw.split(",") if x.strip())
    if annotation.startswith("bool"):
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigurationError(f"{name}: expected a boolean, got {raw!r}")
    try:
        if annotation.startswith("int"):
            return int(raw)
        if annotation.startswith("float"):
            return float(raw)
    except ValueError:
        raise ConfigurationError(f"{name}: cannot parse {raw!r}") from None
    return raw or None


def _digest(*parts) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(json.dumps(part, sort_keys=True).encode("utf-8"))
        h.update(b"\0")
    return h.hexdigest()


def file_hash(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def directory_hash(directory) -> str:
    h = hashlib.sha256()
    for path in sorted(p for p in Path(directory).rglob("*") if p.is_file()):
        h.update(str(path.relative_to(directory)).encode("utf-8") + b"\0")
        h.update(file_hash(path).encode())
    return h.hexdigest()


def cache_location(config: ExperimentConfig) -> Path:
    env = os.environ.get("AFFECTLEX_CACHE_DIR")
    if env:
        return Path(env)
    if config.cache_dir:
        return Path(config.cache_dir)
    return Path(config.output_dir) / "cache"


@contextmanager
def _stage(name: str, timings: dict):
    start = time.perf_counter()
    try:
        yield
    except AffectlexError as exc:
        raise type(exc)(f"stage {name}: {exc}") from exc
    except (OSError, ValueError, KeyError) as exc:
        raise DataError(f"stage {name}: {exc}") from exc
    finally:
        timings[name] = round(time.perf_counter() - start, 6)


@dataclass
class ExperimentReport:
    config: dict
    vocab_size: int
    embedding: dict
    results: dict[str, dict]
    z_tests: list[dict]
    gold_hash: str
    timings: dict = field(default_factory=dict)
    version: str = __version__

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentReport":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n",
                              encoding="utf-8")


def _seed_spec(config: ExperimentConfig, mode: str, lexicon: VadLexicon) -> SeedSpec:
    if mode == "full":
        ref = read_word_list(config.reference_list) if config.reference_list else lexicon.words
        return SeedSpec("full", tuple(ref))
    if mode == "limited":
        words = read_word_list(config.limited_list) if config.limited_list else limited_seed_words()
        return SeedSpec("limited", tuple(words))
    return SeedSpec("custom", tuple(read_word_list(config.custom_list)))


def _embedding_stage(config: ExperimentConfig, cache: Path, timings: dict) -> tuple[EmbeddingStore, int, dict]:
    if config.external_embedding:
        with _stage("embed", timings):
            store = load_store(config.external_embedding)
            info = {"source": "external", "hash": file_hash(config.external_embedding)}
            log.info("stage=embed in=%s out=%s cached=external", info["hash"][:12],
                     store.content_hash()[:12])
        return store, len(store), info

    cache.mkdir(parents=True, exist_ok=True)
    with _stage("vocab", timings):
        corpus_hash = directory_hash(config.corpus)
        vocab_key = _digest("vocab", corpus_hash, config.corpus_format, config.use_lemmas,
                            config.min_count)
        vocab_path = cache / f"vocab-{vocab_key[:16]}.tsv"
        cached = vocab_path.exists()
        if cached:
            vocab = Vocabulary.load(vocab_path, config.min_count)
        else:
            docs = read_corpus(config.corpus, config.corpus_format, config.use_lemmas)
            vocab = build_vocabulary(docs, config.min_count)
            vocab.save(vocab_path)
        if len(vocab) == 0:
            raise DataError("vocabulary is empty")
        log.info("stage=vocab in=%s out=%s cached=%s", corpus_hash[:12], vocab_key[:12], cached)

    with _stage("cooc", timings):
        cooc_key = _digest("cooc", vocab_key, config.window)
        cooc_path = cache / f"cooc-{cooc_key[:16]}.tsv"
        cached = cooc_path.exists()
        if cached:
            matrix = CoocMatrix.load(cooc_path, len(vocab))
        else:
            docs = read_corpus(config.corpus, config.corpus_format, config.use_lemmas)
            matrix = count_corpus(docs, vocab, WindowConfig(config.window))
            matrix.save(cooc_path)
        log.info("stage=cooc in=%s out=%s cached=%s", vocab_key[:12], cooc_key[:12], cached)

    with _stage("embed", timings):
        embed_key = _digest("embed", cooc_key, config.dim, config.alpha, config.eig_weight,
                            config.combine_wc)
        model_path = cache / f"model-{embed_key[:16]}.affemb"
        meta_path = cache / f"model-{embed_key[:16]}.json"
        cached = model_path.exists() and meta_path.exists()
        if not cached:
            weights = ppmi(matrix, config.alpha)
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                trained = svd_embed(weights, config.dim, config.eig_weight, config.combine_wc,
                                    vocab.words)
            for w in caught:
                log.warning("embed: %s", w.message)
            trained.save_binary(model_path)
            meta_path.write_text(json.dumps(trained.metadata, sort_keys=True), encoding="utf-8")
        # always go through the stored float32 model so cached and fresh runs agree
        store = load_binary(model_path)
        store.counts = dict(vocab.counts)
        store.metadata = json.loads(meta_path.read_text(encoding="utf-8"))
        log.info("stage=embed in=%s out=%s cached=%s", cooc_key[:12], store.content_hash()[:12], cached)

    info = {
        "source": "svd_ppmi",
        "hash": store.content_hash(),
        "dimension": store.dimension,
        "corpus_hash": corpus_hash,
        "cooc_total": matrix.total,
        "cooc_nnz": matrix.nnz,
        "singular_values": store.metadata.get("singular_values", []),
    }
    return store, len(vocab), info


def run_pipeline(config: ExperimentConfig) -> ExperimentReport:
    """Run every configured (algorithm, seed selection) cell and write the report.

    Output layout under ``config.output_dir``: ``induced/<algo>_<mode>.tsv``
    (plus JSON provenance sidecars), ``report.json``, ``table.txt`` and
    ``table.tsv``.
    """
    config.validate()
    timings: dict[str, float] = {}
    out = Path(config.output_dir)
    (out / "induced").mkdir(parents=True, exist_ok=True)
    scale = (config.scale_lo, config.scale_hi)

    store, vocab_size, embedding_info = _embedding_stage(config, cache_location(config), timings)
    embedding_info["label"] = config.embedding_label

    with _stage("load", timings):
        lexicon = read_lexicon(config.seed_lexicon, scale)
        lexicon.provenance = {"source": config.seed_lexicon, "hash": lexicon_hash(lexicon)}
        gold = read_lexicon(config.gold, scale)
        gold.provenance = {"source": config.gold, "hash": lexicon_hash(gold)}

    results: dict[str, dict] = {}
    scored: dict[str, CorrelationResult] = {}
    for mode in config.seed_modes:
        with _stage(f"seeds:{mode}", timings):
            seeds = select_seeds(lexicon, _seed_spec(config, mode, lexicon), store)
        for algo in config.algorithms:
            cell = f"{algo}/{mode}"
            with _stage(f"induce:{cell}", timings):
                k = config.k
                if algo == "knn" and k > len(seeds):
                    warnings.warn(f"k={k} exceeds {len(seeds)} {mode} seeds; using k={len(seeds)}",
                                  stacklevel=2)
                    k = len(seeds)
                induced = induce(store, seeds, algo, KnnParams(k),
                                 RandomWalkParams(config.beta, config.neighbors,
                                                  config.tolerance, config.max_iterations))
                induced.provenance["slice"] = config.slice_label
                induced.provenance["embedding_label"] = config.embedding_label
                write_lexicon(induced, out / "induced" / f"{algo}_{mode}.tsv")
            with _stage(f"eval:{cell}", timings):
                entry = {"algorithm": algo, "seed_mode": mode, "seed_count": len(seeds),
                         "embedding": config.embedding_label, "lexicon_hash": lexicon_hash(induced)}
                try:
                    result = evaluate(induced, gold)
                except NumericalError as exc:
                    # e.g. constant predictions: correlation undefined
                    entry.update(per_dimension=None, mean_r=None, n=None, overlap=[],
                                 error=str(exc))
                else:
                    entry.update(result.to_dict())
                    scored[cell] = result
                results[cell] = entry
                log.info("stage=eval cell=%s mean_r=%s", cell, entry["mean_r"])

    z_tests = []
    for a, b in itertools.combinations(sorted(scored), 2):
        ra, rb = scored[a], scored[b]
        try:
            test = fisher_z_test(ra.mean_r, ra.n, rb.mean_r, rb.n)
        except (NumericalError, DataError):
            continue
        z_tests.append({"a": a, "b": b, "z": test.z, "p_two_sided": test.p_two_sided})

    report = ExperimentReport(
        config=config.to_dict(),
        vocab_size=vocab_size,
        embedding=embedding_info,
        results=results,
        z_tests=z_tests,
        gold_hash=lexicon_hash(gold),
        timings=timings,
    )
    report.save(out / "report.json")
    text, tsv = emit_table([report])
    (out / "table.txt").write_text(text, encoding="utf-8")
    (out / "table.tsv").write_text(tsv, encoding="utf-8")
    return report


ALGORITHM_NAMES = {"knn": "kNN", "parasim": "ParaSimNum", "randomwalk": "RandomWalkNum"}


def emit_table(reports: list[ExperimentReport], layout: str = "synchronic",
               marker: str = "*") -> tuple[str, str]:
    """Render mean r as ``(plain_text, tsv)``.

    Rows are (induction method, seed selection), grouped into one block per
    seed selection; columns are embedding sources. The best cell of each
    block is suffixed with ``marker``. The diachronic layout adds a leading
    column with the time-slice label.
    """
    if not reports:
        raise DataError("emit_table needs at least one report")
    if len({r.gold_hash for r in reports}) > 1:
        raise DataError("reports were scored against different gold standards")
    if layout not in ("synchronic", "diachronic"):
        raise ConfigurationError(f"unknown table layout {layout!r}")

    cells: dict[tuple[str, str, str, str], float | None] = {}
    columns: list[str] = []
    for report in reports:
        label = report.embedding.get("label", "embedding")
        slice_label = report.config.get("slice_label", "") if layout == "diachronic" else ""
        if label not in columns:
            columns.append(label)
        for entry in report.results.values():
            key = (slice_label, entry["seed_mode"], entry["algorithm"], label)
            if key in cells:
                raise DataError(f"duplicate table cell {key}")
            cells[key] = entry["mean_r"]

    def row_order(key):
        s, mode, algo = key
        return (s, SEED_MODES.index(mode) if mode in SEED_MODES else 99, mode,
                ALGORITHMS.index(algo) if algo in ALGORITHMS else 99, algo)

    row_keys = sorted({k[:3] for k in cells}, key=row_order)
    best: dict[tuple[str, str], float] = {}
    for (s, mode, _algo, _label), value in cells.items():
        if value is not None and value > best.get((s, mode), float("-inf")):
            best[(s, mode)] = value

    header = (["Slice"] if layout == "diachronic" else []) + ["Induction Method", "Seed Selection"] + columns
    rows = []
    for s, mode, algo in row_keys:
        row = ([s] if layout == "diachronic" else []) + [ALGORITHM_NAMES.get(algo, algo), mode]
        for label in columns:
            value = cells.get((s, mode, algo, label))
            if value is None:
                row.append("-")
            else:
                text = f"{value:.3f}"
                if value == best.get((s, mode)):
                    text += marker
                row.append(text)
        rows.append(row)

    tsv = "\n".join("\t".join(r) for r in [header] + rows) + "\n"
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [header] + rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n", tsv
