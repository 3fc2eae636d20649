"""Globally optimal linear segmentation by dynamic programming.

The cost of a segmentation is a sum over its segments of

    gamma * (len - mu)^2 / (2 * sigma^2)  -  (1 - gamma) * ones / len^r

where ``len`` is the segment length in sentences and ``ones`` is the
number of ones in the segment's block of the similarity matrix.  The
first term is a Gaussian-style prior pulling segment lengths toward
``mu``; the second rewards within-segment similarity density (``r = 2``
is true area density, smaller ``r`` weighs the raw one-count more).
The cost can be negative.

``segment`` minimizes this cost exactly over every segmentation of the
``T`` sentences, any number of segments included, via the recurrence

    C[0] = 0
    C[t] = min over s in 0..t-1 of  C[s] + cost of segment (s, t]

with predecessor links recovered by backtracking from ``t = T``.  Ties
in the relaxation are broken by ``<=`` under an ascending ``s`` scan, so
the largest ``s`` (shortest final segment) wins deterministically.
Cost comparisons are exact; no epsilon.  Time is O(T^2) on top of the
O(1) block-sum queries; memory is dominated by the prefix table.

``brute_force_segment`` is the enumeration oracle used by tests and the
CLI's ``--oracle`` flag.
"""

from __future__ import annotations

from dataclasses import dataclass

from dotseg.similarity import SimilarityMatrix, submatrix_ones
from dotseg.text_model import Segmentation

__all__ = [
    "SegParams",
    "SegResult",
    "brute_force_segment",
    "segment",
    "segment_cost",
]

BRUTE_FORCE_MAX_SENTENCES = 20

# All training segments having equal length would estimate sigma = 0 and
# the prior divides by sigma^2; the clamp keeps it sharp but finite.
ZERO_SIGMA_FALLBACK = 0.5


@dataclass(frozen=True)
class SegParams:
    """Cost-function parameters.

    mu:     mean segment length, in sentences (>= 0).
    sigma:  standard deviation of segment length, in sentences; a
            non-positive value is replaced by ``ZERO_SIGMA_FALLBACK`` at
            construction.
    r:      density exponent (> 0).
    gamma:  weight in [0, 1] trading the length prior (gamma) against
            similarity density (1 - gamma).
    """

    mu: float
    sigma: float
    r: float
    gamma: float

    def __post_init__(self) -> None:
        if not self.mu >= 0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        if not self.r > 0:
            raise ValueError(f"r must be > 0, got {self.r}")
        if not 0 <= self.gamma <= 1:
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma}")
        sigma = float(self.sigma)
        object.__setattr__(
            self, "sigma", sigma if sigma > 0 else ZERO_SIGMA_FALLBACK
        )
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "gamma", float(self.gamma))


@dataclass(frozen=True)
class SegResult:
    """A segmentation together with its achieved cost, per segment and total."""

    segmentation: Segmentation
    cost: float
    per_segment_costs: tuple[float, ...]


def _block_cost(
    ones: int, length: int, p: SegParams, two_sigma_sq: float, density_weight: float
) -> float:
    return (
        p.gamma * (length - p.mu) ** 2 / two_sigma_sq
        - density_weight * ones / length**p.r
    )


def segment_cost(seg: Segmentation, m: SimilarityMatrix, p: SegParams) -> float:
    """Cost of ``seg`` under parameters ``p``; may be negative."""
    return sum(_per_segment_costs(seg, m, p))


def _per_segment_costs(
    seg: Segmentation, m: SimilarityMatrix, p: SegParams
) -> list[float]:
    if seg.total_sentences != m.size:
        raise ValueError(
            f"segmentation covers {seg.total_sentences} sentences, "
            f"matrix has {m.size}"
        )
    two_sigma_sq = 2.0 * p.sigma * p.sigma
    density_weight = 1.0 - p.gamma
    b = seg.boundaries
    return [
        _block_cost(submatrix_ones(m, lo, hi), hi - lo, p, two_sigma_sq, density_weight)
        for lo, hi in zip(b, b[1:])
    ]


def _result_for(boundaries: tuple[int, ...], m: SimilarityMatrix, p: SegParams) -> SegResult:
    seg = Segmentation(boundaries=boundaries, total_sentences=m.size)
    per = _per_segment_costs(seg, m, p)
    return SegResult(segmentation=seg, cost=sum(per), per_segment_costs=tuple(per))


def segment(m: SimilarityMatrix, p: SegParams) -> SegResult:
    """Return the global minimum-cost segmentation of the matrix's sentences.

    Searches all boundary placements and all segment counts at once; the
    optimum fixes both.
    """
    t_total = m.size
    two_sigma_sq = 2.0 * p.sigma * p.sigma
    density_weight = 1.0 - p.gamma

    # Per-length tables keep pow() out of the inner loop.  The inner loop
    # runs in plain Python over plain ints/floats: numpy scalar boxing per
    # element would cost more than it saves at these sizes.
    length_prior = [0.0] * (t_total + 1)
    length_pow = [1.0] * (t_total + 1)
    for length in range(1, t_total + 1):
        length_prior[length] = p.gamma * (length - p.mu) ** 2 / two_sigma_sq
        length_pow[length] = float(length) ** p.r

    diag = m.prefix.diagonal().tolist()
    best_cost = [0.0] * (t_total + 1)
    best_prev = [0] * (t_total + 1)
    inf = float("inf")

    for t in range(1, t_total + 1):
        col = m.prefix[:t, t].tolist()  # prefix[s, t] for s in 0..t-1
        p_tt = diag[t]
        running = inf
        arg = 0
        for s in range(t):
            ones = p_tt - 2 * col[s] + diag[s]
            c = (
                best_cost[s]
                + length_prior[t - s]
                - density_weight * ones / length_pow[t - s]
            )
            if c <= running:  # "<=": the largest s wins ties
                running = c
                arg = s
        best_cost[t] = running
        best_prev[t] = arg

    bounds = [t_total]
    while bounds[-1] > 0:
        bounds.append(best_prev[bounds[-1]])
    bounds.reverse()
    return _result_for(tuple(bounds), m, p)


def brute_force_segment(m: SimilarityMatrix, p: SegParams) -> SegResult:
    """Enumerate every segmentation and return the cheapest (test oracle).

    Enumeration walks all 2^(T-1) subsets of internal boundaries in
    ascending bitmask order (bit ``i`` set means a boundary after
    sentence ``i + 1``); the first segmentation attaining the minimum
    wins.  Refuses instances with more than ``BRUTE_FORCE_MAX_SENTENCES``
    sentences.
    """
    t_total = m.size
    if t_total > BRUTE_FORCE_MAX_SENTENCES:
        raise ValueError(
            f"instance too large for oracle: T={t_total} > {BRUTE_FORCE_MAX_SENTENCES}"
        )
    two_sigma_sq = 2.0 * p.sigma * p.sigma
    density_weight = 1.0 - p.gamma

    pair_cost = {}
    for lo in range(t_total):
        for hi in range(lo + 1, t_total + 1):
            pair_cost[lo, hi] = _block_cost(
                submatrix_ones(m, lo, hi), hi - lo, p, two_sigma_sq, density_weight
            )

    best_mask_cost = float("inf")
    best_bounds: tuple[int, ...] | None = None
    for mask in range(1 << (t_total - 1)):
        bounds = [0]
        bounds.extend(i + 1 for i in range(t_total - 1) if mask >> i & 1)
        bounds.append(t_total)
        cost = sum(pair_cost[lo, hi] for lo, hi in zip(bounds, bounds[1:]))
        if cost < best_mask_cost:
            best_mask_cost = cost
            best_bounds = tuple(bounds)
    assert best_bounds is not None
    return _result_for(best_bounds, m, p)
