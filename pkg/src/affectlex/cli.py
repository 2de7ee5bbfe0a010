"""Command-line entry point: ``affectlex <subcommand> ...``.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .cooc import CoocMatrix, count_corpus
from .corpus import Vocabulary, WindowConfig, build_vocabulary, read_corpus
from .embed import load_store, ppmi, svd_embed
from .errors import AffectlexError, ConfigurationError
from .evaluation import AnnotatorTable, evaluation_report, iaa_sd
from .induce import ALGORITHMS, KnnParams, RandomWalkParams, induce
from .lexicon import SeedSpec, read_lexicon, read_word_list, select_seeds, write_lexicon
from .pipeline import ExperimentConfig, ExperimentReport, emit_table, run_pipeline


def _corpus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="corpus directory")
    p.add_argument("--format", choices=("plain", "tsv"), default="plain")
    p.add_argument("--use-lemmas", action="store_true")


def cmd_vocab(args) -> None:
    docs = read_corpus(args.input, args.format, args.use_lemmas)
    build_vocabulary(docs, args.min_count).save(args.out)


def cmd_cooc(args) -> None:
    vocab = Vocabulary.load(args.vocab)
    docs = read_corpus(args.input, args.format, args.use_lemmas)
    count_corpus(docs, vocab, WindowConfig(args.window)).save(args.out)


def cmd_embed(args) -> None:
    vocab = Vocabulary.load(args.vocab)
    matrix = CoocMatrix.load(args.cooc, len(vocab))
    store = svd_embed(ppmi(matrix, args.alpha), args.dim, args.eig_weight, args.combine_wc,
                      vocab.words, dict(vocab.counts))
    if str(args.out).endswith((".txt", ".vec")):
        store.save_text(args.out)
    else:
        store.save_binary(args.out)


def cmd_induce(args) -> None:
    store = load_store(args.model)
    if args.vocab:
        store.counts = dict(Vocabulary.load(args.vocab).counts)
    lexicon = read_lexicon(args.seeds, (args.scale_lo, args.scale_hi))
    if args.seed_mode == "full":
        words = read_word_list(args.seed_list) if args.seed_list else lexicon.words
        spec = SeedSpec("full", tuple(words))
    elif args.seed_mode == "limited" and not args.seed_list:
        spec = SeedSpec.limited()
    else:
        if not args.seed_list:
            raise ConfigurationError(f"--seed-mode {args.seed_mode} requires --seed-list")
        spec = SeedSpec(args.seed_mode, tuple(read_word_list(args.seed_list)))
    seeds = select_seeds(lexicon, spec, store)
    induced = induce(store, seeds, args.algo, KnnParams(args.k),
                     RandomWalkParams(args.beta, args.neighbors, args.tol, args.max_iter))
    write_lexicon(induced, args.out)


def cmd_eval(args) -> None:
    scale = (args.scale_lo, args.scale_hi)
    compare = read_lexicon(args.compare, scale) if args.compare else None
    report = evaluation_report(read_lexicon(args.induced, scale), read_lexicon(args.gold, scale),
                               compare)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_iaa(args) -> None:
    scale = (args.scale_lo, args.scale_hi)
    table = AnnotatorTable.from_lexicons({p: read_lexicon(p, scale) for p in args.annotators})
    result = iaa_sd(table, ddof=0 if args.sd_divisor == "n" else 1)
    text = json.dumps(result, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_pipeline(args) -> None:
    overrides = {
        "output_dir": args.out,
        "dim": args.dim,
        "min_count": args.min_count,
        "window": args.window,
        "alpha": args.alpha,
        "k": args.k,
        "beta": args.beta,
        "neighbors": args.neighbors,
        "algorithms": tuple(args.algo) if args.algo else None,
    }
    config = ExperimentConfig.from_ini(args.config, overrides)
    report = run_pipeline(config)
    text, _ = emit_table([report])
    sys.stdout.write(text)


def cmd_table(args) -> None:
    reports = [ExperimentReport.load(p) for p in args.reports]
    text, tsv = emit_table(reports, args.layout)
    if args.out:
        Path(args.out).with_suffix(".txt").write_text(text, encoding="utf-8")
        Path(args.out).with_suffix(".tsv").write_text(tsv, encoding="utf-8")
    sys.stdout.write(text)


def _scale_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scale-lo", type=float, default=1.0)
    p.add_argument("--scale-hi", type=float, default=9.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="affectlex", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log one line per stage")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vocab", help="count the vocabulary of a corpus")
    _corpus_args(p)
    p.add_argument("--min-count", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("cooc", help="count windowed co-occurrences")
    _corpus_args(p)
    p.add_argument("--vocab", required=True)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cooc)

    p = sub.add_parser("embed", help="PPMI + truncated SVD embedding")
    p.add_argument("--cooc", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--dim", type=int, default=300)
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--eig-weight", type=float, default=0.0)
    p.add_argument("--combine-wc", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("induce", help="induce a VAD lexicon from seeds")
    p.add_argument("--model", required=True)
    p.add_argument("--seeds", required=True)
    p.add_argument("--algo", choices=ALGORITHMS, required=True)
    p.add_argument("--seed-mode", choices=("full", "limited", "custom"), default="full")
    p.add_argument("--seed-list", help="reference (full) or explicit (limited/custom) word list")
    p.add_argument("--vocab", help="vocabulary file supplying word counts for kNN tie-breaks")
    p.add_argument("--k", type=int, default=30)
    p.add_argument("--beta", type=float, default=0.9)
    p.add_argument("--neighbors", type=int, default=25)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=1000)
    _scale_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("eval", help="correlate an induced lexicon with a gold standard")
    p.add_argument("--induced", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--compare", help="second induced lexicon for a Fisher z test")
    _scale_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("iaa", help="inter-annotator agreement as mean per-word SD")
    p.add_argument("annotators", nargs="+", help="one lexicon file per annotator")
    p.add_argument("--sd-divisor", choices=("n", "n-1"), default="n")
    _scale_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_iaa)

    p = sub.add_parser("pipeline", help="run a full experiment from an INI config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output directory (overrides the config)")
    p.add_argument("--dim", type=int)
    p.add_argument("--min-count", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--neighbors", type=int)
    p.add_argument("--algo", action="append", choices=ALGORITHMS)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("table", help="render report.json files as a results table")
    p.add_argument("reports", nargs="+")
    p.add_argument("--layout", choices=("synchronic", "diachronic"), default="synchronic")
    p.add_argument("--out", help="path stem for .txt and .tsv output")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s %(message)s")
    try:
        args.func(args)
    except AffectlexError as exc:
        print(f"affectlex: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"affectlex: error: {exc}", file=sys.stderr)
        return ConfigurationError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
