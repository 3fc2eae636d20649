"""Sentence/token representation of input texts and reference segmentations.

Input is one sentence per line; no sentence-boundary detection happens
here, which keeps the engine language-agnostic.  Normalization is
deliberately small and deterministic: case-folding, edge punctuation
stripping, digit-token removal, optional lemma substitution, optional
stoplist removal.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

__all__ = [
    "Document",
    "NormalizationConfig",
    "Segmentation",
    "load_document",
    "load_lemma_map",
    "load_stoplist",
    "normalize_line",
    "parse_segmentation",
    "serialize_segmentation",
]


@dataclass(frozen=True)
class NormalizationConfig:
    """Token normalization settings.

    ``stoplist`` entries and ``lemma_map`` keys are case-folded at
    construction so lookups match folded tokens.  ``keep_unmapped``
    controls what happens to tokens absent from a non-empty lemma map:
    kept verbatim (default) or dropped, the latter approximating a
    content-word filter when the map only covers content words.
    """

    stoplist: frozenset[str] = frozenset()
    lemma_map: dict[str, str] = field(default_factory=dict)
    keep_unmapped: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "stoplist", frozenset(w.casefold() for w in self.stoplist)
        )
        folded = {}
        for surface, lemma in self.lemma_map.items():
            lemma = lemma.casefold()
            if not lemma or any(c.isspace() for c in lemma):
                raise ValueError(f"invalid lemma {lemma!r} for {surface!r}")
            folded[surface.casefold()] = lemma
        object.__setattr__(self, "lemma_map", folded)


@dataclass(frozen=True)
class Document:
    """An ordered sequence of sentences, each a tuple of normalized tokens.

    A sentence may be empty (all of its words were removed); it still
    occupies an index so boundary positions line up with the original
    sentence numbering.
    """

    sentences: tuple[tuple[str, ...], ...]
    source_id: str = ""

    def __post_init__(self) -> None:
        if len(self.sentences) < 1:
            raise ValueError("empty document")
        for sent in self.sentences:
            for tok in sent:
                if not tok or any(c.isspace() for c in tok):
                    raise ValueError(f"invalid token {tok!r}")

    @property
    def num_sentences(self) -> int:
        return len(self.sentences)

    def to_text(self) -> str:
        """Canonical serialization: one sentence per line, tokens space-joined."""
        return "\n".join(" ".join(sent) for sent in self.sentences) + "\n"


@dataclass(frozen=True)
class Segmentation:
    """Boundary vector ``(0, t_1, ..., T)``; entry ``t`` means "after sentence t".

    Boundaries are strictly increasing, start at 0, end at the total
    sentence count, so every segment is non-empty and there is at least
    one segment.
    """

    boundaries: tuple[int, ...]
    total_sentences: int

    def __post_init__(self) -> None:
        b = self.boundaries
        if self.total_sentences < 1:
            raise ValueError("malformed segmentation: need at least one sentence")
        if len(b) < 2 or b[0] != 0 or b[-1] != self.total_sentences:
            raise ValueError(
                "malformed segmentation: boundaries must run from 0 to "
                f"{self.total_sentences}, got {b}"
            )
        if any(lo >= hi for lo, hi in zip(b, b[1:])):
            raise ValueError(f"malformed segmentation: not increasing: {b}")

    @property
    def num_segments(self) -> int:
        return len(self.boundaries) - 1

    @property
    def internal(self) -> tuple[int, ...]:
        """Boundaries excluding the shared endpoints 0 and T."""
        return self.boundaries[1:-1]

    @property
    def segment_lengths(self) -> tuple[int, ...]:
        b = self.boundaries
        return tuple(hi - lo for lo, hi in zip(b, b[1:]))


def _strip_edge_punctuation(token: str) -> str:
    # Unicode punctuation (category P*) at the edges only; interior
    # hyphens/apostrophes stay.
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


def normalize_line(line: str, config: NormalizationConfig) -> tuple[str, ...]:
    """Normalize one raw sentence into its token tuple.

    Pipeline per whitespace-delimited token: case-fold, strip edge
    punctuation, drop if empty or all digits, substitute the lemma if
    mapped (tokens missing from the map are kept or dropped per
    ``keep_unmapped``), drop if in the stoplist.
    """
    out = []
    for raw in line.split():
        tok = _strip_edge_punctuation(raw.casefold())
        if not tok or tok.isdigit():
            continue
        if tok in config.lemma_map:
            tok = config.lemma_map[tok]
        elif not config.keep_unmapped:
            continue
        if tok in config.stoplist:
            continue
        out.append(tok)
    return tuple(out)


def load_document(
    raw_text: str, config: NormalizationConfig | None = None, source_id: str = ""
) -> Document:
    """Build a :class:`Document` from one-sentence-per-line text.

    Blank lines are skipped entirely and do not create sentences.
    Raises ``ValueError("empty document")`` when nothing remains.
    """
    config = config or NormalizationConfig()
    sentences = [
        normalize_line(line, config)
        for line in raw_text.splitlines()
        if line.strip()
    ]
    if not sentences:
        raise ValueError("empty document")
    return Document(sentences=tuple(sentences), source_id=source_id)


def parse_segmentation(text: str, total_sentences: int) -> Segmentation:
    """Parse whitespace-separated boundary indices into a :class:`Segmentation`.

    Each integer is the 1-based index of a segment-final sentence.  The
    implicit 0 and the final boundary ``total_sentences`` are added when
    absent; an empty string therefore means "one segment".
    """
    try:
        raw = [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise ValueError(f"malformed segmentation: {exc}") from None
    bounds = [0]
    for t in raw:
        if t <= 0 or t > total_sentences:
            raise ValueError(
                f"malformed segmentation: boundary {t} outside 1..{total_sentences}"
            )
        if t <= bounds[-1]:
            raise ValueError(f"malformed segmentation: not increasing at {t}")
        bounds.append(t)
    if bounds[-1] != total_sentences:
        bounds.append(total_sentences)
    return Segmentation(boundaries=tuple(bounds), total_sentences=total_sentences)


def serialize_segmentation(seg: Segmentation) -> str:
    """Internal boundaries as space-separated 1-based indices ("" for one segment)."""
    return " ".join(str(t) for t in seg.internal)


def load_stoplist(path: str) -> frozenset[str]:
    """Read a stoplist file: one word per line, UTF-8, blank lines ignored."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip().casefold() for line in fh if line.strip())


def load_lemma_map(path: str) -> dict[str, str]:
    """Read a lemma map file: ``surface<TAB>lemma`` per line, UTF-8."""
    mapping = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise ValueError(f"malformed lemma map at line {lineno}: {line!r}")
            mapping[parts[0].strip().casefold()] = parts[1].strip().casefold()
    return mapping
