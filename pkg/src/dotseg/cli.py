"""Command-line front end.

Subcommands: ``segment``, ``evaluate``, ``generate``, ``validate``,
``experiment``, ``dotplot``.  Machine-readable output goes to stdout (or
``--out``); diagnostics go to stderr; the exit code is 0 iff the
operation completed.  Every randomized subcommand takes ``--seed`` and
its output is byte-identical across runs with the same seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from dotseg import corpus as corpus_mod
from dotseg.metrics import evaluate
from dotseg.segmenter import SegParams, brute_force_segment, segment
from dotseg.similarity import build_similarity_matrix, build_term_incidence, export_dotplot
from dotseg.text_model import (
    NormalizationConfig,
    load_document,
    load_lemma_map,
    load_stoplist,
    parse_segmentation,
    serialize_segmentation,
)


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stoplist", metavar="PATH", help="stoplist file, one word per line")
    parser.add_argument("--lemma-map", metavar="PATH", help="lemma map file, surface<TAB>lemma per line")
    parser.add_argument("--seed", type=int, default=0, metavar="N", help="seed for randomized operations (default 0)")
    parser.add_argument("--json", action="store_true", help="emit JSON where the subcommand supports it")


def _normalization_config(args: argparse.Namespace) -> NormalizationConfig:
    return NormalizationConfig(
        stoplist=load_stoplist(args.stoplist) if args.stoplist else frozenset(),
        lemma_map=load_lemma_map(args.lemma_map) if args.lemma_map else {},
        keep_unmapped=not args.drop_unmapped,
    )


def _add_normalization_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--drop-unmapped",
        action="store_true",
        help="drop tokens missing from the lemma map instead of keeping them verbatim",
    )


def _parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = (int(part) for part in text.split(","))
    except ValueError:
        raise SystemExit(f"error: --range expects 'A,B', got {text!r}")
    return a, b


def _write_text(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _write_bytes(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)


def _load_matrix(args: argparse.Namespace):
    raw = Path(args.input).read_text(encoding="utf-8")
    doc = load_document(raw, _normalization_config(args), source_id=args.input)
    return doc, build_similarity_matrix(build_term_incidence(doc))


def _cmd_segment(args: argparse.Namespace) -> int:
    doc, matrix = _load_matrix(args)
    params = SegParams(mu=args.mu, sigma=args.sigma, r=args.r, gamma=args.gamma)
    result = brute_force_segment(matrix, params) if args.oracle else segment(matrix, params)
    if args.json:
        payload = {
            "boundaries": list(result.segmentation.boundaries),
            "internal_boundaries": list(result.segmentation.internal),
            "num_segments": result.segmentation.num_segments,
            "cost": result.cost,
            "per_segment_costs": list(result.per_segment_costs),
        }
        _write_text(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _write_text(serialize_segmentation(result.segmentation) + "\n", args.out)
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    t = args.total_sentences
    ref = parse_segmentation(Path(args.ref).read_text(encoding="utf-8"), t)
    hyp = parse_segmentation(Path(args.hyp).read_text(encoding="utf-8"), t)
    report = evaluate(ref, hyp, args.window)
    _write_text(json.dumps(report.as_dict(), indent=2) + "\n", args.out)
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    sources = corpus_mod.load_source_collection(args.sources, _normalization_config(args))
    if args.suite == 1:
        if args.range is None:
            raise SystemExit("error: --suite 1 requires --range A,B")
        a, b = _parse_range(args.range)
        text = corpus_mod.generate_suite1_text(sources, a, b, args.seed)
    else:
        if args.range is not None:
            raise SystemExit("error: --range only applies to --suite 1")
        text = corpus_mod.generate_suite2_text(sources, args.seed)
    _write_text(text.to_json(), args.out)
    return 0


def _generate_training(args: argparse.Namespace) -> list:
    sources = corpus_mod.load_source_collection(args.sources, _normalization_config(args))
    subset = _parse_range(args.range) if args.range is not None else None
    if args.suite == 1 and subset is None:
        raise SystemExit("error: --suite 1 requires --range A,B")
    if args.suite == 2 and subset is not None:
        raise SystemExit("error: --range only applies to --suite 1")
    from dotseg.rng import SplitMix64

    master = SplitMix64(args.seed)
    seeds = [master.next_u64() for _ in range(args.texts)]
    if args.suite == 1:
        return [corpus_mod.generate_suite1_text(sources, subset[0], subset[1], s) for s in seeds]
    return [corpus_mod.generate_suite2_text(sources, s) for s in seeds]


def _cmd_validate(args: argparse.Namespace) -> int:
    training = _generate_training(args)
    mu, sigma = corpus_mod.estimate_length_params(training)
    grid = corpus_mod.run_grid_validation(training, mu, sigma)
    _write_text(corpus_mod.grid_to_csv(grid.rows), args.out)
    gamma, r = grid.best
    print(
        f"mu={mu} sigma={sigma} best: gamma={gamma} r={r}",
        file=sys.stderr,
    )
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    sources = corpus_mod.load_source_collection(args.sources, _normalization_config(args))
    subset = _parse_range(args.range) if args.range is not None else None
    report = corpus_mod.run_experiment(
        sources,
        suite=args.suite,
        subset=subset,
        n_texts=args.texts,
        repetitions=args.reps,
        rng_seed=args.seed,
    )
    _write_text(report.to_json(), args.out)
    if args.grid_csv:
        Path(args.grid_csv).write_text(
            corpus_mod.grid_to_csv(report.mean_grid()), encoding="utf-8"
        )
    return 0


def _cmd_dotplot(args: argparse.Namespace) -> int:
    _, matrix = _load_matrix(args)
    _write_bytes(export_dotplot(matrix), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dotseg",
        description=(
            "Globally optimal linear text segmentation over a sentence-similarity "
            "dotplot, with evaluation and synthetic-benchmark tooling."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="segment a text (one sentence per line)")
    p.add_argument("input", help="input text file, one sentence per line")
    p.add_argument("--mu", type=float, required=True, help="mean segment length in sentences (no default: estimate from training data, e.g. via 'validate')")
    p.add_argument("--sigma", type=float, required=True, help="segment length standard deviation (no default: estimate from training data)")
    p.add_argument("--gamma", type=float, default=0.1, help="length-prior weight in [0,1]; 0.1 is a mid-grid starting point (default 0.1)")
    p.add_argument("--r", type=float, default=0.5, help="density exponent > 0; 0.5 is a mid-grid starting point (default 0.5)")
    p.add_argument("--oracle", action="store_true", help="exhaustive search instead of dynamic programming (T <= 20)")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    _add_normalization_flags(p)
    _add_shared_flags(p)
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("evaluate", help="score a hypothesis segmentation against a reference")
    p.add_argument("--ref", required=True, help="reference boundary file")
    p.add_argument("--hyp", required=True, help="hypothesis boundary file")
    p.add_argument("--total-sentences", type=int, required=True, metavar="T")
    p.add_argument("--window", type=int, default=None, metavar="K", help="Pk window (default: half the mean reference segment length)")
    p.add_argument("--out", metavar="PATH")
    _add_shared_flags(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("generate", help="generate one benchmark text from a source collection")
    p.add_argument("--sources", required=True, help="source collection directory (one subdirectory per group)")
    p.add_argument("--suite", type=int, choices=(1, 2), required=True)
    p.add_argument("--range", metavar="A,B", help="segment length range in sentences (suite 1 only)")
    p.add_argument("--out", metavar="PATH")
    _add_normalization_flags(p)
    _add_shared_flags(p)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("validate", help="run the (gamma, r) grid on generated training texts; emits CSV")
    p.add_argument("--sources", required=True)
    p.add_argument("--suite", type=int, choices=(1, 2), required=True)
    p.add_argument("--range", metavar="A,B")
    p.add_argument("--texts", type=int, default=25, help="number of training texts to generate (default 25)")
    p.add_argument("--out", metavar="PATH")
    _add_normalization_flags(p)
    _add_shared_flags(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("experiment", help="full train/validate/test protocol; emits a JSON report")
    p.add_argument("--sources", required=True)
    p.add_argument("--suite", type=int, choices=(1, 2), required=True)
    p.add_argument("--range", metavar="A,B")
    p.add_argument("--texts", type=int, default=50, help="texts per repetition, half train half test (default 50)")
    p.add_argument("--reps", type=int, default=5, help="repetitions to average over (default 5)")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--grid-csv", metavar="PATH", help="also write the 80-row grid, averaged over repetitions")
    _add_normalization_flags(p)
    _add_shared_flags(p)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("dotplot", help="render the similarity matrix as a binary PGM image")
    p.add_argument("input", help="input text file, one sentence per line")
    p.add_argument("--out", metavar="PATH", help="write the PGM here instead of stdout")
    _add_normalization_flags(p)
    _add_shared_flags(p)
    p.set_defaults(func=_cmd_dotplot)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
