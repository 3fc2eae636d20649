"""Globally optimal linear text segmentation over a sentence-similarity dotplot.

The pipeline: normalize a one-sentence-per-line text into token tuples,
mark every sentence pair sharing a vocabulary word in a binary
similarity matrix, then find the segmentation minimizing a cost that
trades a Gaussian segment-length prior against within-segment similarity
density.  Dynamic programming makes the minimum exact over all boundary
placements and all segment counts.  Evaluation (precision/recall/Pk) and
a synthetic concatenated-text benchmark harness are included.
"""

from dotseg.corpus import (
    ExperimentReport,
    GeneratedText,
    GridResult,
    SourceCollection,
    SourceDocument,
    SourceGroup,
    estimate_length_params,
    generate_suite1_text,
    generate_suite2_text,
    load_source_collection,
    run_experiment,
    run_grid_validation,
)
from dotseg.metrics import EvalReport, evaluate, pk, precision, recall
from dotseg.segmenter import SegParams, SegResult, brute_force_segment, segment, segment_cost
from dotseg.similarity import (
    SimilarityMatrix,
    TermIncidence,
    build_similarity_matrix,
    build_term_incidence,
    export_dotplot,
    submatrix_ones,
)
from dotseg.text_model import (
    Document,
    NormalizationConfig,
    Segmentation,
    load_document,
    parse_segmentation,
    serialize_segmentation,
)

__version__ = "0.1.0"

__all__ = [
    "Document",
    "EvalReport",
    "ExperimentReport",
    "GeneratedText",
    "GridResult",
    "NormalizationConfig",
    "SegParams",
    "SegResult",
    "Segmentation",
    "SimilarityMatrix",
    "SourceCollection",
    "SourceDocument",
    "SourceGroup",
    "TermIncidence",
    "brute_force_segment",
    "build_similarity_matrix",
    "build_term_incidence",
    "estimate_length_params",
    "evaluate",
    "export_dotplot",
    "generate_suite1_text",
    "generate_suite2_text",
    "load_document",
    "load_source_collection",
    "parse_segmentation",
    "pk",
    "precision",
    "recall",
    "run_experiment",
    "run_grid_validation",
    "segment",
    "segment_cost",
    "serialize_segmentation",
    "submatrix_ones",
]
