"""Deterministic pseudo-random stream used by the corpus generators.

Synthetic corpora must be reproducible bit-for-bit from a seed, across
platforms and across reimplementations in other languages.  Python's
``random`` module does not give that guarantee (its bounded-integer
methods have changed between versions), so the generator is pinned down
here explicitly.

The stream is SplitMix64:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z <- ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output: z XOR (z >> 31)

Derived draws are defined on top of the raw 64-bit stream:

* ``below(n)``   -- ``next_u64() % n``.  The modulo bias is at most
  ``n / 2^64`` and is irrelevant for the corpus sizes involved; the
  simple rule is what makes the stream easy to reproduce elsewhere.
* ``randint(lo, hi)`` -- ``lo + below(hi - lo + 1)`` (inclusive bounds).
* ``shuffle(xs)`` -- Fisher-Yates from the top: for ``i = len-1 .. 1``,
  swap ``xs[i]`` with ``xs[below(i + 1)]``.

Every randomized corpus operation documents the exact order in which it
consumes draws from this stream.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """SplitMix64 stream; see the module docstring for the exact contract."""

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform draw from ``[0, n)``."""
        if n <= 0:
            raise ValueError(f"below() needs a positive bound, got {n}")
        return self.next_u64() % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform draw from the inclusive range ``[lo, hi]``."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.below(hi - lo + 1)

    def shuffle(self, xs: list) -> None:
        """In-place Fisher-Yates shuffle consuming ``len(xs) - 1`` draws."""
        for i in range(len(xs) - 1, 0, -1):
            j = self.below(i + 1)
            xs[i], xs[j] = xs[j], xs[i]
