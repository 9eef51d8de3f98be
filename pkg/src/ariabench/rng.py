"""Deterministic pseudo-random streams based on SplitMix64.

Every source of randomness in the package (weight init, epoch shuffling,
dropout masks, synthetic datasets) draws from a :class:`SplitMix64` stream so
that runs are bit-reproducible from their seeds alone. The generator state
after ``n`` draws depends only on ``(seed, n)``, never on whether the draws
were requested one at a time or as a vectorized block.
"""

from __future__ import annotations

import math

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64_mix(z: int) -> int:
    """The SplitMix64 output function on a single 64-bit word."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Stateful SplitMix64 generator.

    The i-th output is ``mix(seed + i * golden_gamma)``, which lets block
    draws be computed with vectorized numpy arithmetic while staying
    bit-identical to repeated scalar calls.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    @property
    def state(self) -> int:
        return self._state

    @state.setter
    def state(self, value: int) -> None:
        self._state = value & _MASK64

    def clone(self) -> "SplitMix64":
        out = SplitMix64(0)
        out._state = self._state
        return out

    def next_uint64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return splitmix64_mix(self._state)

    def _next_block(self, count: int) -> np.ndarray:
        """Advance the stream by ``count`` and return the raw 64-bit words."""
        idx = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(self._state) + idx * np.uint64(_GOLDEN)
        self._state = (self._state + count * _GOLDEN) & _MASK64
        return _mix_array(z)

    def uniform(self, size=None):
        """Uniform draws in [0, 1) using the top 53 bits of each word."""
        if size is None:
            return (self.next_uint64() >> 11) * 2.0**-53
        shape = (size,) if isinstance(size, int) else tuple(size)
        count = int(np.prod(shape)) if shape else 1
        words = self._next_block(count)
        out = (words >> np.uint64(11)).astype(np.float64) * 2.0**-53
        return out.reshape(shape)

    def normal(self, size=None):
        """Standard normal draws via Box-Muller (two words per pair)."""
        if size is None:
            return float(self.normal(1)[0])
        shape = (size,) if isinstance(size, int) else tuple(size)
        count = int(np.prod(shape)) if shape else 1
        pairs = (count + 1) // 2
        words = self._next_block(2 * pairs)
        # u1 in (0, 1] so log() stays finite.
        u1 = ((words[:pairs] >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53
        u2 = (words[pairs:] >> np.uint64(11)).astype(np.float64) * 2.0**-53
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * math.pi * u2
        out = np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:count]
        return out.reshape(shape)

    def uniform_signed(self, bound: float, size) -> np.ndarray:
        """Uniform draws in [-bound, bound)."""
        return (2.0 * self.uniform(size) - 1.0) * bound

    def below(self, n: int) -> int:
        """An integer in [0, n). Modulo bias is negligible for n << 2^64."""
        return self.next_uint64() % n

    def shuffle(self, items: np.ndarray) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def init_stream(seed: int) -> SplitMix64:
    """Weight-initialization stream for a model seed."""
    return SplitMix64(seed)


def dropout_stream(seed: int) -> SplitMix64:
    """Dropout-mask stream for a model seed."""
    return SplitMix64(seed + 2)


def shuffle_stream(shuffle_seed: int, epoch_index: int) -> SplitMix64:
    """Per-epoch shuffling stream: reseeded as (seed+1) XOR epoch index."""
    return SplitMix64(((shuffle_seed + 1) & _MASK64) ^ epoch_index)
