"""SplitMix64 generator, scalar and vectorized over independent streams.

Output function (all arithmetic mod 2**64)::

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

Bounded integers use Lemire's multiply-shift on the high 32 bits of a draw,
with rejection so every value in ``[0, n)`` is exactly equiprobable::

    x = next() >> 32;  m = x * n;  low = m & 0xFFFFFFFF
    reject while low < (2**32 - n) % n;  return m >> 32

:class:`SplitMix64` and :class:`StreamArray` implement the same protocol, so
stream ``k`` of a ``StreamArray`` seeded with ``s`` yields exactly the
values a ``SplitMix64(s)`` would.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
MASK32 = (1 << 32) - 1
GAMMA = 0x9E3779B97F4A7C15
MUL1 = 0xBF58476D1CE4E5B9
MUL2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MUL1) & MASK64
    z = ((z ^ (z >> 27)) * MUL2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *path: int) -> int:
    """Hash a master seed and a path of indices into an independent 64-bit seed.

    ``derive_seed(s, k)`` is the seed of chain ``k``; ``derive_seed(s, r, k)``
    the seed of chain ``k`` in replication ``r``.
    """
    h = mix64(seed & MASK64)
    for p in path:
        h = mix64(h ^ mix64((int(p) + GAMMA) & MASK64))
    return h


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def randbelow(self, n: int) -> int:
        if not 0 < n <= MASK32:
            raise ValueError("bound must be in [1, 2**32)")
        threshold = ((1 << 32) - n) % n
        while True:
            m = (self.next_u64() >> 32) * n
            if (m & MASK32) >= threshold:
                return m >> 32

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


_GAMMA = np.uint64(GAMMA)
_MUL1 = np.uint64(MUL1)
_MUL2 = np.uint64(MUL2)
_U30, _U27, _U31, _U32 = (np.uint64(s) for s in (30, 27, 31, 32))
_LOW32 = np.uint64(MASK32)
_TWO32 = np.uint64(1 << 32)


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U30)) * _MUL1
    z = (z ^ (z >> _U27)) * _MUL2
    return z ^ (z >> _U31)


class StreamArray:
    """One SplitMix64 stream per element; draws advance only the selected streams."""

    def __init__(self, seeds):
        self.states = np.array([int(s) & MASK64 for s in seeds], dtype=np.uint64)

    @classmethod
    def from_states(cls, states: np.ndarray) -> "StreamArray":
        obj = cls.__new__(cls)
        obj.states = states
        return obj

    def __len__(self):
        return len(self.states)

    def next_u64(self, idx: np.ndarray) -> np.ndarray:
        """Draw once from each stream in the integer index array ``idx``."""
        s = self.states[idx] + _GAMMA
        self.states[idx] = s
        return _mix_array(s)

    def randbelow(self, idx: np.ndarray, n) -> np.ndarray:
        """Draw ``[0, n)`` integers for streams ``idx``; ``n`` is a scalar or per-stream array."""
        n = np.broadcast_to(np.asarray(n, dtype=np.uint64), idx.shape).copy()
        threshold = (_TWO32 - n) % n
        out = np.empty(idx.shape, dtype=np.uint64)
        pending = np.arange(len(idx))
        while len(pending):
            m = (self.next_u64(idx[pending]) >> _U32) * n[pending]
            ok = (m & _LOW32) >= threshold[pending]
            out[pending[ok]] = m[ok] >> _U32
            pending = pending[~ok]
        return out.astype(np.int64)
