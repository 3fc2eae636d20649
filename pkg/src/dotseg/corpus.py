"""Synthetic concatenated-text benchmarks, parameter estimation, grid search.

Benchmark texts are built by concatenating ten segments drawn from a
collection of source documents organized into named groups (a group
plays the role of one author or topic).  Two generation protocols are
provided:

* suite 1 -- each segment is the first ``length`` sentences of a random
  source, with ``length`` drawn uniformly from a configured range;
* suite 2 -- each segment is a random contiguous run of paragraphs of a
  random source.

Every randomized operation consumes draws from a seeded
:class:`~dotseg.rng.SplitMix64` stream in a documented order, so a seed
pins the corpus down exactly:

* suite-1 text: per segment, 3 draws -- ``below(#groups)``,
  ``below(#documents in group)``, ``randint(a, b)``;
* suite-2 text: per segment, 4 draws -- ``below(#groups)``,
  ``below(#documents in group)``, ``randint(1, Z)`` paragraphs,
  ``randint(1, Z - l + 1)`` start;
* experiment repetition: ``n_texts`` raw draws for per-text seeds, then
  a Fisher-Yates shuffle of the text index list for the train/test
  split (first half train).

Adjacent segments may legitimately come from the same group or even the
same document; the reference boundary between them is kept even when no
similarity evidence of it exists.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass
from pathlib import Path

from dotseg.metrics import evaluate
from dotseg.rng import SplitMix64
from dotseg.segmenter import SegParams, segment
from dotseg.similarity import SimilarityMatrix, build_similarity_matrix, build_term_incidence
from dotseg.text_model import Document, NormalizationConfig, Segmentation, normalize_line

__all__ = [
    "GAMMA_GRID",
    "R_GRID",
    "SEGMENTS_PER_TEXT",
    "ExperimentReport",
    "GeneratedText",
    "GridResult",
    "GridRow",
    "RepetitionResult",
    "SegmentProvenance",
    "SourceCollection",
    "SourceDocument",
    "SourceGroup",
    "estimate_length_params",
    "generate_suite1_text",
    "generate_suite2_text",
    "grid_to_csv",
    "load_source_collection",
    "run_experiment",
    "run_grid_validation",
]

SEGMENTS_PER_TEXT = 10

# Validation grid: 20 gamma values (fine steps near 0, coarse above) x 4
# density exponents = 80 combinations.
GAMMA_GRID: tuple[float, ...] = tuple(i / 100 for i in range(10)) + tuple(
    i / 10 for i in range(1, 11)
)
R_GRID: tuple[float, ...] = (0.33, 0.5, 0.66, 1.0)

MIN_SIGMA_ESTIMATE = 0.5


@dataclass(frozen=True)
class SourceDocument:
    """A source text plus optional paragraph annotations.

    ``paragraph_starts`` holds the index of each paragraph's first
    sentence (so it begins with 0); ``None`` means the document carries
    no paragraph information and cannot be used by suite 2.
    """

    document: Document
    paragraph_starts: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        starts = self.paragraph_starts
        if starts is None:
            return
        t = self.document.num_sentences
        ok = (
            len(starts) >= 1
            and starts[0] == 0
            and all(a < b for a, b in zip(starts, starts[1:]))
            and starts[-1] < t
        )
        if not ok:
            raise ValueError(f"invalid paragraph starts {starts} for {t} sentences")

    @property
    def num_paragraphs(self) -> int:
        if self.paragraph_starts is None:
            raise ValueError(
                f"document {self.document.source_id!r} has no paragraph annotations"
            )
        return len(self.paragraph_starts)

    def paragraph_span(self, first: int, count: int) -> tuple[int, int]:
        """Sentence range covered by ``count`` paragraphs starting at 1-based ``first``."""
        starts = self.paragraph_starts
        if starts is None:
            raise ValueError(
                f"document {self.document.source_id!r} has no paragraph annotations"
            )
        z = len(starts)
        if not (1 <= first and first + count - 1 <= z):
            raise ValueError(f"paragraphs {first}..{first + count - 1} outside 1..{z}")
        lo = starts[first - 1]
        hi = self.document.num_sentences if first + count - 1 == z else starts[first + count - 1]
        return lo, hi


@dataclass(frozen=True)
class SourceGroup:
    name: str
    documents: tuple[SourceDocument, ...]

    def __post_init__(self) -> None:
        if not self.documents:
            raise ValueError(f"source group {self.name!r} is empty")


@dataclass(frozen=True)
class SourceCollection:
    groups: tuple[SourceGroup, ...]

    def __post_init__(self) -> None:
        if not self.groups:
            raise ValueError("empty source collection")


@dataclass(frozen=True)
class SegmentProvenance:
    """Where one generated segment came from: group, source, sentence span."""

    group: str
    source_index: int
    span: tuple[int, int]  # half-open sentence range within the source


@dataclass(frozen=True)
class GeneratedText:
    document: Document
    reference: Segmentation
    provenance: tuple[SegmentProvenance, ...]

    def __post_init__(self) -> None:
        if self.reference.total_sentences != self.document.num_sentences:
            raise ValueError("reference does not cover the generated document")
        if self.reference.num_segments != SEGMENTS_PER_TEXT:
            raise ValueError(
                f"generated texts have {SEGMENTS_PER_TEXT} segments, "
                f"got {self.reference.num_segments}"
            )
        spans = tuple(p.span[1] - p.span[0] for p in self.provenance)
        if spans != self.reference.segment_lengths:
            raise ValueError("provenance spans disagree with reference boundaries")

    def to_json(self) -> str:
        """Canonical JSON serialization (used for byte-determinism checks)."""
        payload = {
            "source_id": self.document.source_id,
            "sentences": [list(s) for s in self.document.sentences],
            "boundaries": list(self.reference.boundaries),
            "provenance": [
                {"group": p.group, "source_index": p.source_index, "span": list(p.span)}
                for p in self.provenance
            ],
        }
        return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def _pick_source(
    sources: SourceCollection, rng: SplitMix64
) -> tuple[SourceGroup, int, SourceDocument]:
    group = sources.groups[rng.below(len(sources.groups))]
    doc_index = rng.below(len(group.documents))
    return group, doc_index, group.documents[doc_index]


def _assemble(
    pieces: list[tuple[SourceGroup, int, tuple[int, int], SourceDocument]],
    source_id: str,
) -> GeneratedText:
    sentences: list[tuple[str, ...]] = []
    boundaries = [0]
    provenance = []
    for group, doc_index, (lo, hi), source in pieces:
        sentences.extend(source.document.sentences[lo:hi])
        boundaries.append(len(sentences))
        provenance.append(
            SegmentProvenance(group=group.name, source_index=doc_index, span=(lo, hi))
        )
    document = Document(sentences=tuple(sentences), source_id=source_id)
    reference = Segmentation(
        boundaries=tuple(boundaries), total_sentences=len(sentences)
    )
    return GeneratedText(
        document=document, reference=reference, provenance=tuple(provenance)
    )


def generate_suite1_text(
    sources: SourceCollection, a: int, b: int, rng_seed: int
) -> GeneratedText:
    """Concatenate ten document-initial sentence runs of length in ``[a, b]``.

    The drawn length is capped at the chosen document's sentence count.
    Draw order is documented in the module docstring.
    """
    if not 1 <= a <= b:
        raise ValueError(f"need 1 <= a <= b, got ({a}, {b})")
    rng = SplitMix64(rng_seed)
    pieces = []
    for _ in range(SEGMENTS_PER_TEXT):
        group, doc_index, source = _pick_source(sources, rng)
        length = min(rng.randint(a, b), source.document.num_sentences)
        pieces.append((group, doc_index, (0, length), source))
    return _assemble(pieces, source_id=f"suite1:a={a}:b={b}:seed={rng_seed}")


def generate_suite2_text(sources: SourceCollection, rng_seed: int) -> GeneratedText:
    """Concatenate ten random contiguous paragraph runs.

    For a document with ``Z`` paragraphs the run covers ``l`` paragraphs,
    ``l`` uniform in ``[1, Z]``, starting at paragraph ``m`` uniform in
    ``[1, Z - l + 1]``.  Draw order is documented in the module docstring.
    """
    rng = SplitMix64(rng_seed)
    pieces = []
    for _ in range(SEGMENTS_PER_TEXT):
        group, doc_index, source = _pick_source(sources, rng)
        z = source.num_paragraphs
        count = rng.randint(1, z)
        first = rng.randint(1, z - count + 1)
        pieces.append((group, doc_index, source.paragraph_span(first, count), source))
    return _assemble(pieces, source_id=f"suite2:seed={rng_seed}")


def estimate_length_params(training: list[GeneratedText]) -> tuple[float, float]:
    """Mean and n-1 standard deviation of all reference segment lengths.

    Lengths are pooled over every training text; the deviation is
    clamped to at least ``MIN_SIGMA_ESTIMATE``.
    """
    if not training:
        raise ValueError("need at least one training text")
    lengths = [
        float(length) for text in training for length in text.reference.segment_lengths
    ]
    mu = statistics.fmean(lengths)
    sigma = statistics.stdev(lengths) if len(lengths) > 1 else 0.0
    return mu, max(sigma, MIN_SIGMA_ESTIMATE)


@dataclass(frozen=True)
class GridRow:
    gamma: float
    r: float
    mean_pk: float
    mean_precision: float
    mean_recall: float


@dataclass(frozen=True)
class GridResult:
    rows: tuple[GridRow, ...]
    best: tuple[float, float]  # (gamma, r) minimizing mean_pk


def _matrix_for(text: GeneratedText) -> SimilarityMatrix:
    return build_similarity_matrix(build_term_incidence(text.document))


def run_grid_validation(
    training: list[GeneratedText], mu: float, sigma: float
) -> GridResult:
    """Score every (gamma, r) combination on the training texts.

    Each row records mean Pk / precision / recall of segmenting every
    training text with those parameters; the best row minimizes mean Pk,
    with ties going to the smaller gamma, then the smaller r.
    """
    if not training:
        raise ValueError("need at least one training text")
    matrices = [_matrix_for(text) for text in training]

    rows = []
    best: tuple[float, float] | None = None
    best_pk = float("inf")
    for gamma in GAMMA_GRID:
        for r in R_GRID:
            params = SegParams(mu=mu, sigma=sigma, r=r, gamma=gamma)
            reports = [
                evaluate(text.reference, segment(matrix, params).segmentation)
                for text, matrix in zip(training, matrices)
            ]
            # fsum-based means are invariant under duplicating the
            # training set, not just under rerunning it
            row = GridRow(
                gamma=gamma,
                r=r,
                mean_pk=statistics.fmean(rep.pk for rep in reports),
                mean_precision=statistics.fmean(rep.precision for rep in reports),
                mean_recall=statistics.fmean(rep.recall for rep in reports),
            )
            rows.append(row)
            if row.mean_pk < best_pk:  # strict: first (smallest gamma, r) wins ties
                best_pk = row.mean_pk
                best = (gamma, r)
    assert best is not None
    return GridResult(rows=tuple(rows), best=best)


def grid_to_csv(rows: list[GridRow] | tuple[GridRow, ...]) -> str:
    lines = ["gamma,r,mean_pk,mean_precision,mean_recall"]
    lines += [
        f"{row.gamma},{row.r},{row.mean_pk},{row.mean_precision},{row.mean_recall}"
        for row in rows
    ]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RepetitionResult:
    mu: float
    sigma: float
    gamma: float
    r: float
    precision: float
    recall: float
    pk: float
    grid: GridResult

    def as_dict(self) -> dict:
        return {
            "mu": self.mu,
            "sigma": self.sigma,
            "gamma": self.gamma,
            "r": self.r,
            "precision": self.precision,
            "recall": self.recall,
            "pk": self.pk,
        }


@dataclass(frozen=True)
class ExperimentReport:
    suite: int
    subset: tuple[int, int] | None
    seed: int
    n_texts: int
    repetitions: tuple[RepetitionResult, ...]
    averages: dict

    def to_json(self) -> str:
        payload = {
            "suite": self.suite,
            "subset": list(self.subset) if self.subset else None,
            "seed": self.seed,
            "n_texts": self.n_texts,
            "repetitions": [rep.as_dict() for rep in self.repetitions],
            "averages": self.averages,
        }
        return json.dumps(payload, indent=2) + "\n"

    def mean_grid(self) -> tuple[GridRow, ...]:
        """The 80 grid rows with metrics averaged across repetitions."""
        reps = self.repetitions
        out = []
        for i, first in enumerate(reps[0].grid.rows):
            out.append(
                GridRow(
                    gamma=first.gamma,
                    r=first.r,
                    mean_pk=statistics.fmean(rep.grid.rows[i].mean_pk for rep in reps),
                    mean_precision=statistics.fmean(
                        rep.grid.rows[i].mean_precision for rep in reps
                    ),
                    mean_recall=statistics.fmean(
                        rep.grid.rows[i].mean_recall for rep in reps
                    ),
                )
            )
        return tuple(out)


def _generate(
    sources: SourceCollection, suite: int, subset: tuple[int, int] | None, seed: int
) -> GeneratedText:
    if suite == 1:
        assert subset is not None
        return generate_suite1_text(sources, subset[0], subset[1], seed)
    return generate_suite2_text(sources, seed)


def run_experiment(
    sources: SourceCollection,
    suite: int,
    subset: tuple[int, int] | None,
    n_texts: int,
    repetitions: int,
    rng_seed: int,
) -> ExperimentReport:
    """Full train/validate/test protocol, repeated and averaged.

    Each repetition generates ``n_texts`` fresh texts, splits them half
    train / half test at random, estimates (mu, sigma) on the training
    half, grid-searches (gamma, r) there, then scores the test half with
    the selected parameters.  Averages are over repetitions.
    """
    if suite not in (1, 2):
        raise ValueError(f"suite must be 1 or 2, got {suite}")
    if suite == 1 and subset is None:
        raise ValueError("suite 1 needs a (min, max) segment-length range")
    if suite == 2 and subset is not None:
        raise ValueError("suite 2 does not take a segment-length range")
    if n_texts < 2 or n_texts % 2:
        raise ValueError(f"n_texts must be even and >= 2, got {n_texts}")
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")

    master = SplitMix64(rng_seed)
    reps = []
    for _ in range(repetitions):
        seeds = [master.next_u64() for _ in range(n_texts)]
        texts = [_generate(sources, suite, subset, s) for s in seeds]
        order = list(range(n_texts))
        master.shuffle(order)
        half = n_texts // 2
        train = [texts[i] for i in order[:half]]
        test = [texts[i] for i in order[half:]]

        mu, sigma = estimate_length_params(train)
        grid = run_grid_validation(train, mu, sigma)
        gamma, r = grid.best
        params = SegParams(mu=mu, sigma=sigma, r=r, gamma=gamma)

        reports = [
            evaluate(
                text.reference, segment(_matrix_for(text), params).segmentation
            )
            for text in test
        ]
        reps.append(
            RepetitionResult(
                mu=mu,
                sigma=sigma,
                gamma=gamma,
                r=r,
                precision=statistics.fmean(rep.precision for rep in reports),
                recall=statistics.fmean(rep.recall for rep in reports),
                pk=statistics.fmean(rep.pk for rep in reports),
                grid=grid,
            )
        )

    averages = {
        "precision": statistics.fmean(rep.precision for rep in reps),
        "recall": statistics.fmean(rep.recall for rep in reps),
        "pk": statistics.fmean(rep.pk for rep in reps),
    }
    return ExperimentReport(
        suite=suite,
        subset=subset,
        seed=rng_seed,
        n_texts=n_texts,
        repetitions=tuple(reps),
        averages=averages,
    )


def load_source_collection(
    root: str | Path, config: NormalizationConfig | None = None
) -> SourceCollection:
    """Load a collection from a directory tree: one subdirectory per group,
    one UTF-8 text file per source document.

    Files use one sentence per line; a blank line marks a paragraph
    break.  Groups and documents are ordered by name so the collection
    (and everything generated from it) is reproducible.
    """
    config = config or NormalizationConfig()
    root = Path(root)
    group_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    if not group_dirs:
        raise ValueError(f"no group directories under {root}")
    groups = []
    for group_dir in group_dirs:
        docs = []
        for path in sorted(p for p in group_dir.iterdir() if p.is_file()):
            docs.append(_load_source_file(path, config))
        if not docs:
            raise ValueError(f"source group {group_dir.name!r} is empty")
        groups.append(SourceGroup(name=group_dir.name, documents=tuple(docs)))
    return SourceCollection(groups=tuple(groups))


def _load_source_file(path: Path, config: NormalizationConfig) -> SourceDocument:
    sentences: list[tuple[str, ...]] = []
    paragraph_starts = [0]
    pending_break = False
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            pending_break = bool(sentences)
            continue
        if pending_break:
            paragraph_starts.append(len(sentences))
            pending_break = False
        sentences.append(normalize_line(line, config))
    if not sentences:
        raise ValueError(f"empty document: {path}")
    document = Document(sentences=tuple(sentences), source_id=str(path))
    return SourceDocument(
        document=document, paragraph_starts=tuple(paragraph_starts)
    )
