"""Seeded, stream-addressable random number generation.

All stochastic code in this package draws from a Philox counter-based
generator keyed by a (seed, stream) pair.  Philox is stateless in the
counter, so identical (seed, stream) pairs reproduce identical sample
sequences on any platform running the same numpy major version, and
distinct stream ids give statistically independent sequences for
concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for the given (seed, stream) pair.

    The 128-bit Philox key is ``(stream << 64) | seed``; both fields must
    fit in 64 unsigned bits.
    """
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if not 0 <= stream <= _MASK64:
        raise ValueError(f"stream must be a 64-bit unsigned integer, got {stream}")
    return np.random.Generator(np.random.Philox(key=(stream << 64) | seed))


@dataclass(frozen=True)
class RngSeed:
    """Addressable seed: (seed, stream) pairs index disjoint sample streams."""

    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        # validate eagerly so bad seeds fail at config time, not sample time
        make_rng(self.seed, self.stream)

    def generator(self) -> np.random.Generator:
        return make_rng(self.seed, self.stream)

    def with_stream(self, stream: int) -> "RngSeed":
        return RngSeed(self.seed, stream)
