"""Term incidence, the binary sentence-similarity matrix, and dotplot export.

Two sentences are similar iff they share at least one vocabulary word.
A non-empty sentence is therefore always similar to itself; an empty
sentence gets a zero row and column, including the diagonal.  The matrix
carries a 2-D prefix-sum table so the number of ones in any square
submatrix is an O(1) query, which is what the segmenter's cost function
consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from dotseg.text_model import Document

__all__ = [
    "SimilarityMatrix",
    "TermIncidence",
    "build_similarity_matrix",
    "build_term_incidence",
    "export_dotplot",
    "submatrix_ones",
]


@dataclass(frozen=True)
class TermIncidence:
    """Which vocabulary words occur in which sentence (presence, not counts)."""

    vocabulary: tuple[str, ...]
    sentence_words: tuple[frozenset[int], ...]

    @property
    def num_sentences(self) -> int:
        return len(self.sentence_words)

    @property
    def vocabulary_size(self) -> int:
        return len(self.vocabulary)


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric boolean similarity matrix plus its inclusive prefix-sum table.

    ``prefix[i, j]`` counts the ones in ``bits[:i, :j]``; it is int64 so
    counts stay exact for any realistic sentence count.
    """

    bits: np.ndarray
    prefix: np.ndarray

    @property
    def size(self) -> int:
        return self.bits.shape[0]

    @classmethod
    def from_dense(cls, bits: np.ndarray) -> SimilarityMatrix:
        """Wrap a square symmetric boolean array, building the prefix table."""
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 2 or bits.shape[0] != bits.shape[1]:
            raise ValueError(f"similarity matrix must be square, got {bits.shape}")
        if not np.array_equal(bits, bits.T):
            raise ValueError("similarity matrix must be symmetric")
        t = bits.shape[0]
        prefix = np.zeros((t + 1, t + 1), dtype=np.int64)
        np.cumsum(bits, axis=0, dtype=np.int64, out=prefix[1:, 1:])
        np.cumsum(prefix[1:, 1:], axis=1, out=prefix[1:, 1:])
        return cls(bits=bits, prefix=prefix)


def build_term_incidence(doc: Document) -> TermIncidence:
    """Collect the vocabulary (first-occurrence order) and per-sentence word sets."""
    index: dict[str, int] = {}
    sent_sets = []
    for sent in doc.sentences:
        words = set()
        for tok in sent:
            if tok not in index:
                index[tok] = len(index)
            words.add(index[tok])
        sent_sets.append(frozenset(words))
    return TermIncidence(
        vocabulary=tuple(index), sentence_words=tuple(sent_sets)
    )


def build_similarity_matrix(inc: TermIncidence) -> SimilarityMatrix:
    """Mark sentence pairs sharing at least one word.

    Built as a sparse boolean incidence product so the cost scales with
    word co-occurrences rather than densely with sentences x vocabulary.
    """
    t = inc.num_sentences
    rows = [s for s, words in enumerate(inc.sentence_words) for _ in words]
    cols = [w for words in inc.sentence_words for w in sorted(words)]
    m = sparse.csr_matrix(
        (np.ones(len(rows), dtype=np.int64), (rows, cols)),
        shape=(t, max(inc.vocabulary_size, 1)),
    )
    bits = (m @ m.T).toarray() > 0
    return SimilarityMatrix.from_dense(bits)


def submatrix_ones(m: SimilarityMatrix, lo: int, hi: int) -> int:
    """Ones in the square block covering sentences ``lo+1 .. hi`` (diagonal included)."""
    if lo >= hi:
        raise ValueError(f"empty segment ({lo}, {hi})")
    if lo < 0 or hi > m.size:
        raise ValueError(f"segment ({lo}, {hi}) outside 0..{m.size}")
    p = m.prefix
    return int(p[hi, hi] - p[lo, hi] - p[hi, lo] + p[lo, lo])


def export_dotplot(m: SimilarityMatrix) -> bytes:
    """Render the matrix as a binary PGM (P5): ones black, zeros white.

    The byte layout is part of the contract: maxval 255, one byte per
    pixel, one newline after each header token, no comments.
    """
    t = m.size
    header = f"P5\n{t}\n{t}\n255\n".encode("ascii")
    pixels = np.where(m.bits, 0, 255).astype(np.uint8)
    return header + pixels.tobytes()
