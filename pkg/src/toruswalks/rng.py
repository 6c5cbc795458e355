"""Counter-based RNG streams for reproducible parallel chains.

Seeding contract: (global_seed, chain_index) keys a Philox stream, so chains
get disjoint streams and a fixed (seed, chain) pair reproduces bit-exactly.
"""

from __future__ import annotations

import numpy as np


def chain_rng(seed: int, chain: int = 0) -> np.random.Generator:
    """Philox generator keyed by (seed, chain)."""
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    if not 0 <= chain < 2**64:
        raise ValueError(f"chain index must fit in 64 bits, got {chain}")
    key = np.array([seed, chain], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


class RandomBlocks:
    """Block-buffered draws from a Generator for tight Python loops.

    One Generator call fills a block; scalar draws then cost a list access.
    The stream of values depends only on the call sequence, keeping runs
    reproducible.
    """

    def __init__(self, gen: np.random.Generator, block: int = 8192):
        self._gen = gen
        self._block = block
        self._uni: list[float] = []
        self._iu = 0
        self._ints: dict[int, list[int]] = {}
        self._ii: dict[int, int] = {}

    def uniform(self) -> float:
        i = self._iu
        if i >= len(self._uni):
            self._uni = self._gen.random(self._block).tolist()
            i = 0
        self._iu = i + 1
        return self._uni[i]

    def integer(self, n: int) -> int:
        """Uniform draw from {0, ..., n-1}."""
        buf = self._ints.get(n)
        i = self._ii.get(n, 0)
        if buf is None or i >= len(buf):
            buf = self._gen.integers(0, n, size=self._block).tolist()
            self._ints[n] = buf
            i = 0
        self._ii[n] = i + 1
        return buf[i]

    @property
    def generator(self) -> np.random.Generator:
        return self._gen
