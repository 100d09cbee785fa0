"""Portable seeded random streams.

Every random draw in the package goes through :class:`Stream`, which wraps
the Philox4x64-10 counter-based generator keyed directly by the 64-bit seed
(counter starting at zero).  Only the raw 64-bit words are taken from the
bit generator; the conversion to floats, integers and normals is done here
so that the output is defined by the algorithm and not by numpy's
distribution code, which is allowed to change between releases.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1
_TWO_M53 = 2.0 ** -53


def derive_seed(seed: int, *labels: object) -> int:
    """Derive an independent 64-bit seed from ``seed`` and a label path."""
    text = ":".join([str(seed & _MASK64), *map(str, labels)])
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "little")


class Stream:
    """A single sequential random stream.  Not safe to share across threads."""

    def __init__(self, seed: int) -> None:
        self.seed = int(seed) & _MASK64
        self._bitgen = np.random.Philox(key=self.seed)

    def raw(self, n: int) -> np.ndarray:
        if n <= 0:
            return np.zeros(0, dtype=np.uint64)
        return self._bitgen.random_raw(n).astype(np.uint64)

    def uniform(self, n: int) -> np.ndarray:
        """Doubles in [0, 1) on the 2**-53 lattice."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * _TWO_M53

    def uniform_open(self, n: int) -> np.ndarray:
        """Doubles in the open interval (0, 1)."""
        return ((self.raw(n) >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_M53

    def normal(self, n: int) -> np.ndarray:
        """Standard normals by the Box-Muller transform, both outputs used."""
        if n <= 0:
            return np.zeros(0)
        pairs = (n + 1) // 2
        u = self.uniform_open(2 * pairs)
        radius = np.sqrt(-2.0 * np.log(u[0::2]))
        theta = 2.0 * np.pi * u[1::2]
        out = np.empty(2 * pairs)
        out[0::2] = radius * np.cos(theta)
        out[1::2] = radius * np.sin(theta)
        return out[:n]

    def randbelow(self, bound: int) -> int:
        """Unbiased integer in [0, bound) by rejection on raw words."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            word = int(self.raw(1)[0])
            if word < limit:
                return word % bound
