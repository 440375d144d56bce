"""Seeded random streams.

Uniforms come from numpy's counter-based Philox generator. Gaussians are
produced by Box-Muller from that uniform stream: consecutive uniforms
``(u[2k], u[2k+1])`` yield ``z[2k] = r cos(2 pi u[2k+1])`` and
``z[2k+1] = r sin(2 pi u[2k+1])`` with ``r = sqrt(-2 log(1 - u[2k]))``.
An odd request discards the unused sine half.
"""
from __future__ import annotations

import hashlib
import struct

import numpy as np


def derive_seed(*keys) -> int:
    """Stable 64-bit seed from any mix of ints and strings."""
    h = hashlib.blake2b(digest_size=8)
    for k in keys:
        data = str(k).encode()
        h.update(struct.pack("<I", len(data)))
        h.update(data)
    return int.from_bytes(h.digest(), "little")


class Rng:
    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._gen = np.random.Generator(np.random.Philox(self.seed))

    def child(self, *keys) -> "Rng":
        return Rng(derive_seed(self.seed, *keys))

    def uniform(self, size=None, low: float = 0.0, high: float = 1.0):
        u = self._gen.random(size)
        return low + (high - low) * u

    def normal(self, size=None):
        shape = () if size is None else (size,) if np.isscalar(size) else tuple(size)
        n = int(np.prod(shape)) if shape else 1
        m = n + (n & 1)
        u = self._gen.random(m)
        r = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        theta = 2.0 * np.pi * u[1::2]
        z = np.empty(m)
        z[0::2] = r * np.cos(theta)
        z[1::2] = r * np.sin(theta)
        z = z[:n]
        return float(z[0]) if size is None else z.reshape(shape)

    def integers(self, low: int, high: int, size=None):
        return self._gen.integers(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def bernoulli(self, p: float, size) -> np.ndarray:
        return self._gen.random(size) < p
