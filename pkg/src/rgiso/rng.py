"""Counter-based deterministic pseudo-randomness.

Every draw is a pure function of (master seed, stream, counter): draw i of a
stream is splitmix64's output function applied to key + (i+1) * GOLDEN, where
the key is itself a 64-bit hash of (master, stream). Nothing is stateful, so
identical seeds give identical draws across runs, platforms, processes and
worker counts, and substreams can be handed to parallel workers without any
coordination.

Uniform doubles use the top 53 bits of the mixed word, so they lie in [0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15  # 2^64 / golden ratio, the splitmix64 increment
_STREAM_SALT = 0x632BE59BD9B4E019

_U_GOLDEN = np.uint64(GOLDEN)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_UM1 = np.uint64(0xBF58476D1CE4E5B9)
_UM2 = np.uint64(0x94D049BB133111EB)
_INV53 = 2.0**-53


def mix64(x: int) -> int:
    """splitmix64 finalizer: a bijective 64-bit mix."""
    x &= MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & MASK64
    x ^= x >> 31
    return x


def stream_key(master: int, stream: int) -> int:
    """64-bit key identifying one draw stream of one master seed."""
    return mix64(mix64(master) ^ mix64(stream ^ _STREAM_SALT))


def randbits(key: int, counter: int) -> int:
    """Draw `counter` of the stream with this key, as a uint64."""
    return mix64((key + (counter + 1) * GOLDEN) & MASK64)


def uniform(key: int, counter: int) -> float:
    """Uniform double in [0, 1), one per (key, counter)."""
    return (randbits(key, counter) >> 11) * _INV53


def uniforms(key: int, count: int, start: int = 0) -> np.ndarray:
    """Vectorized uniform(key, start), ..., uniform(key, start+count-1)."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(key & MASK64) + idx * _U_GOLDEN
    z ^= z >> _U30
    z *= _UM1
    z ^= z >> _U27
    z *= _UM2
    z ^= z >> _U31
    return (z >> _U11).astype(np.float64) * _INV53


def randbelow(key: int, counter: int, bound: int) -> tuple[int, int]:
    """Unbiased draw from range(bound) by rejection; returns (value, next counter)."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    limit = MASK64 + 1 - ((MASK64 + 1) % bound)
    while True:
        u = randbits(key, counter)
        counter += 1
        if u < limit:
            return u % bound, counter


@dataclass(frozen=True)
class Seed:
    """A (master, stream) pair naming one independent draw stream.

    Identical (master, stream) always produce identical draws. `child` derives
    substreams from integer path components; the fold is order-sensitive, so
    child(1, 2) and child(2, 1) differ.
    """

    master: int
    stream: int = 0

    def key(self) -> int:
        return stream_key(self.master, self.stream)

    def child(self, *path: int) -> "Seed":
        s = self.stream
        for p in path:
            s = mix64((s + GOLDEN) ^ mix64(p))
        return Seed(self.master, s)
