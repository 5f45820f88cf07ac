"""Seeded, reproducible random sampling.

All Monte Carlo experiments draw from counter-based Philox streams (the
numpy implementation), with one substream per worker chunk keyed by
(master seed, chunk index).  The chunk layout is fixed (independent of
thread count or platform), so a report is byte-identical for identical
configuration and seed.
"""

from __future__ import annotations

import numpy as np

PRNG_NAME = "philox4x64 (numpy), substreams keyed by (seed, chunk index)"
NUM_CHUNKS = 64


def substream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed & (2 ** 64 - 1), index]))


def chunk_sizes(total: int, chunks: int = NUM_CHUNKS) -> list:
    base, extra = divmod(total, chunks)
    return [base + (1 if i < extra else 0) for i in range(chunks)]


def uniform_residues(rng: np.random.Generator, nrows: int, ncols: int,
                     modulus: int) -> np.ndarray:
    return rng.integers(0, modulus, size=(nrows, ncols), dtype=np.int64)


def uniform_box(rng: np.random.Generator, nrows: int, ncols: int,
                bound: int) -> np.ndarray:
    """Uniform integer matrix with entries in [-bound, bound]."""
    if bound > 2 ** 62 - 1:
        raise ValueError("box bound too large for the int64 sampler")
    return rng.integers(-bound, bound + 1, size=(nrows, ncols), dtype=np.int64)


def uniform_bigint(rng: np.random.Generator, bound: int) -> int:
    """One uniform integer in [-bound, bound], exact for arbitrary size."""
    width = 2 * bound + 1
    nbits = width.bit_length() + 32
    nwords = (nbits + 31) // 32
    limit = (1 << (32 * nwords)) // width * width
    while True:
        words = rng.integers(0, 1 << 32, size=nwords, dtype=np.uint64)
        x = 0
        for w in words:
            x = (x << 32) | int(w)
        if x < limit:
            return x % width - bound


def uniform_height_ball(rng: np.random.Generator, nrows: int, bounds) -> list:
    """Rows of independent coordinates, coordinate i uniform in [-bounds[i], bounds[i]].

    Falls back to the exact big-integer sampler past the int64 range.
    """
    cols = []
    for b in bounds:
        if b <= 2 ** 62 - 1:
            cols.append(rng.integers(-b, b + 1, size=nrows, dtype=np.int64).tolist())
        else:
            cols.append([uniform_bigint(rng, b) for _ in range(nrows)])
    return [tuple(col[i] for col in cols) for i in range(nrows)]


def confidence_halfwidth(mean: float, samples: int, z: float = 2.5758) -> float:
    """99 percent normal-approximation halfwidth for a Bernoulli mean."""
    if samples <= 0:
        raise ValueError("samples must be positive")
    return z * (mean * (1.0 - mean) / samples) ** 0.5
