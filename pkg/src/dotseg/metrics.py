"""Boundary precision, boundary recall, and the Pk window metric.

Precision and recall compare the *internal* boundary sets (the shared
endpoints 0 and T are excluded, otherwise every pair of segmentations
would get free credit).  Pk slides a probe pair of sentences a fixed
distance apart through the text and counts how often the reference and
the hypothesis disagree on whether the pair falls in one segment; it
penalizes near-misses less than plain precision/recall do.  All three
are in [0, 1]; Pk is an error rate, lower is better.
"""

from __future__ import annotations

from dataclasses import dataclass

from dotseg.text_model import Segmentation

__all__ = ["EvalReport", "default_window", "evaluate", "pk", "precision", "recall"]


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    pk: float
    window_k: int

    def as_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "pk": self.pk,
            "window_k": self.window_k,
        }


def _check_lengths(ref: Segmentation, hyp: Segmentation) -> None:
    if ref.total_sentences != hyp.total_sentences:
        raise ValueError(
            f"segmentations cover different texts: "
            f"{ref.total_sentences} vs {hyp.total_sentences} sentences"
        )


def precision(ref: Segmentation, hyp: Segmentation) -> float:
    """Fraction of hypothesized internal boundaries that are true ones.

    Degenerate cases: an empty hypothesis scores 1.0 against an empty
    reference (nothing claimed, nothing missed) and 0.0 otherwise.
    """
    _check_lengths(ref, hyp)
    ref_b, hyp_b = set(ref.internal), set(hyp.internal)
    if not hyp_b:
        return 1.0 if not ref_b else 0.0
    return len(hyp_b & ref_b) / len(hyp_b)


def recall(ref: Segmentation, hyp: Segmentation) -> float:
    """Fraction of true internal boundaries that were hypothesized (1.0 if none)."""
    _check_lengths(ref, hyp)
    ref_b, hyp_b = set(ref.internal), set(hyp.internal)
    if not ref_b:
        return 1.0
    return len(hyp_b & ref_b) / len(ref_b)


def default_window(ref: Segmentation) -> int:
    """Half the mean reference segment length, at least 1."""
    return max(1, round(ref.total_sentences / (2 * ref.num_segments)))


def _segment_ids(seg: Segmentation) -> list[int]:
    # ids[s] = index of the segment containing sentence s (1-based slots).
    ids = [0] * (seg.total_sentences + 1)
    b = seg.boundaries
    for k in range(seg.num_segments):
        for s in range(b[k] + 1, b[k + 1] + 1):
            ids[s] = k
    return ids


def pk(ref: Segmentation, hyp: Segmentation, k: int | None = None) -> float:
    """Probe-pair disagreement rate between the two segmentations.

    For every pair of sentences ``(i, i + k)``, the two segmentations
    either agree or disagree on "same segment"; the score is the
    disagreement fraction over all ``T - k`` probe positions.  When
    ``k`` is omitted it defaults to :func:`default_window` of the
    reference.
    """
    _check_lengths(ref, hyp)
    t = ref.total_sentences
    if t < 2:
        raise ValueError("pk needs at least 2 sentences")
    if k is None:
        k = default_window(ref)
    if k < 1:
        raise ValueError(f"window must be >= 1, got {k}")
    if k >= t:
        raise ValueError(f"window too large: k={k} with {t} sentences")

    ref_ids = _segment_ids(ref)
    hyp_ids = _segment_ids(hyp)
    disagreements = 0
    for i in range(1, t - k + 1):
        same_ref = ref_ids[i] == ref_ids[i + k]
        same_hyp = hyp_ids[i] == hyp_ids[i + k]
        if same_ref != same_hyp:
            disagreements += 1
    return disagreements / (t - k)


def evaluate(ref: Segmentation, hyp: Segmentation, k: int | None = None) -> EvalReport:
    """Bundle precision, recall and Pk for one (reference, hypothesis) pair."""
    window = default_window(ref) if k is None else k
    return EvalReport(
        precision=precision(ref, hyp),
        recall=recall(ref, hyp),
        pk=pk(ref, hyp, window),
        window_k=window,
    )
