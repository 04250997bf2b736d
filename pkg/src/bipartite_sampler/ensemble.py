"""Many independent fastball chains advanced together with numpy.

Each chain owns one SplitMix64 stream and follows the draw protocol in
:mod:`bipartite_sampler.trade`, so chain ``k`` evolves exactly like a scalar
``TradeChain`` seeded with the same stream seed. Results therefore do not
depend on how chains are split across worker threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .core import BipartiteNetwork, CanonicalKey
from .errors import DegenerateNetworkError, InvalidInputError
from .rng import StreamArray, derive_seed


class Ensemble:
    """``size`` copies of ``start`` randomized in lockstep.

    Parameters
    ----------
    start : BipartiteNetwork
        Common starting network of every chain.
    size : int
        Number of chains.
    seed : int
        Master seed; chain ``k`` uses ``derive_seed(seed, k)``.
    threads : int
        Worker threads; chains are partitioned into contiguous blocks.
    """

    def __init__(self, start: BipartiteNetwork, size: int, seed: int, threads: int = 1):
        if size < 1:
            raise InvalidInputError("ensemble size must be positive")
        self.start = start.copy()
        self.start_matrix = start.to_matrix().astype(bool)
        self.matrices = np.broadcast_to(self.start_matrix, (size,) + start.shape).copy()
        self.seed = int(seed)
        self.rng = StreamArray(derive_seed(seed, k) for k in range(size))
        self.trades_done = 0
        self.threads = max(1, int(threads))

    @property
    def size(self) -> int:
        return self.matrices.shape[0]

    @property
    def top_count(self) -> int:
        return self.matrices.shape[1]

    def advance(self, t: int) -> "Ensemble":
        """Perform ``t`` random trades on every chain."""
        if t < 1:
            raise InvalidInputError("number of trades must be positive")
        if self.top_count < 2:
            raise DegenerateNetworkError("trading needs at least two top nodes")
        bounds = np.linspace(0, self.size, min(self.threads, self.size) + 1).astype(int)
        blocks = [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
        if len(blocks) == 1:
            self._advance_block(0, self.size, t)
        else:
            with ThreadPoolExecutor(len(blocks)) as pool:
                list(pool.map(lambda b: self._advance_block(b[0], b[1], t), blocks))
        self.trades_done += t
        return self

    def _advance_block(self, lo: int, hi: int, t: int):
        for _ in range(t):
            self._step_block(lo, hi)

    def _step_block(self, lo: int, hi: int):
        mats = self.matrices[lo:hi]
        rng = self.rng
        top, bottom = self.matrices.shape[1:]
        streams = np.arange(lo, hi)
        rows = np.arange(hi - lo)

        i = rng.randbelow(streams, top)
        j = rng.randbelow(streams, top)
        clash = np.flatnonzero(i == j)
        while len(clash):
            j[clash] = rng.randbelow(streams[clash], top)
            clash = clash[j[clash] == i[clash]]

        ri = mats[rows, i]
        rj = mats[rows, j]
        pool = ri ^ rj
        need = (ri & ~rj).sum(axis=1)
        rem = pool.sum(axis=1)
        act = np.flatnonzero((need > 0) & (need < rem))
        if not len(act):
            return
        ri, rj, pool = ri[act], rj[act], pool[act]
        need, rem, streams = need[act], rem[act], streams[act]

        # selection sampling over the pool in ascending bottom-node order
        to_i = np.zeros_like(pool)
        for c in range(bottom):
            in_pool = pool[:, c]
            if not in_pool.any():
                continue
            take = in_pool & (need == rem)
            draw = np.flatnonzero(in_pool & (need > 0) & (need < rem))
            if len(draw):
                take[draw] = rng.randbelow(streams[draw], rem[draw]) < need[draw]
            to_i[:, c] = take
            need -= take
            rem -= in_pool

        shared = ri & rj
        mats[act, i[act]] = shared | to_i
        mats[act, j[act]] = shared | (pool & ~to_i)

    def differing_cells(self) -> np.ndarray:
        """Per-chain count of incidence cells that differ from the start."""
        return (self.matrices != self.start_matrix).sum(axis=(1, 2))

    def key_bytes(self) -> list[bytes]:
        packed = np.packbits(self.matrices.reshape(self.size, -1), axis=1)
        return [row.tobytes() for row in packed]

    def keys(self) -> list[CanonicalKey]:
        shape = self.start.shape
        return [CanonicalKey(shape, b) for b in self.key_bytes()]

    def unique_count(self) -> int:
        return len(set(self.key_bytes()))

    def network(self, k: int) -> BipartiteNetwork:
        return BipartiteNetwork.from_matrix(self.matrices[k])

    def networks(self) -> list[BipartiteNetwork]:
        return [BipartiteNetwork.from_matrix(m) for m in self.matrices]
