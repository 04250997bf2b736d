"""Degree-preserving trades between pairs of top nodes (curveball/fastball family).

A trade pools the neighbors that exactly one of two top nodes has, and
hands a uniformly random subset of the pool's original size back to the
first node; the rest go to the second. Neighbors shared by both stay put.

Draw protocol, shared with :class:`bipartite_sampler.ensemble.Ensemble`:

1. pair: ``i = randbelow(T)``, then ``j = randbelow(T)`` redrawn until ``j != i``.
2. let ``u`` be the pool size and ``a`` the number of pooled neighbors that
   came from ``i``. Nothing is drawn unless ``0 < a < u``.
3. fastball: visit the pool in ascending bottom-node order, keeping ``need``
   (slots left for ``i``) and ``rem`` (pool members not yet visited). When
   ``0 < need < rem`` draw ``randbelow(rem)`` and give the node to ``i`` iff
   the draw is ``< need``; otherwise the outcome is forced. This is
   selection sampling, uniform over all ``C(u, a)`` splits.
4. curveball: Fisher-Yates shuffle the ascending pool with
   ``randbelow(k + 1)`` for ``k = u-1 .. 1``; the first ``a`` go to ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import BipartiteNetwork
from .errors import DegenerateNetworkError, InvalidInputError
from .rng import SplitMix64

VARIANTS = ("fastball", "curveball")


def _check_pair(net: BipartiteNetwork, i: int, j: int):
    if i == j:
        raise InvalidInputError("a trade needs two distinct top nodes")
    for k in (i, j):
        if not 0 <= k < net.top_count:
            raise InvalidInputError(f"top node {k} out of range [0, {net.top_count})")


def _trade_fastball(ni: list[int], nj: list[int], rng: SplitMix64):
    # one merge pass: tag 0 = shared, 1 = only in i, 2 = only in j
    merged = []
    p = q = 0
    while p < len(ni) and q < len(nj):
        x, y = ni[p], nj[q]
        if x == y:
            merged.append((x, 0))
            p += 1
            q += 1
        elif x < y:
            merged.append((x, 1))
            p += 1
        else:
            merged.append((y, 2))
            q += 1
    merged.extend((x, 1) for x in ni[p:])
    merged.extend((y, 2) for y in nj[q:])

    shared = len(ni) + len(nj) - len(merged)
    need = len(ni) - shared
    rem = len(merged) - shared
    if need == 0 or need == rem:
        return ni, nj

    new_i, new_j = [], []
    for x, tag in merged:
        if tag == 0:
            new_i.append(x)
            new_j.append(x)
            continue
        if need == 0:
            take = False
        elif need == rem:
            take = True
        else:
            take = rng.randbelow(rem) < need
        if take:
            new_i.append(x)
            need -= 1
        else:
            new_j.append(x)
        rem -= 1
    return new_i, new_j


def _trade_curveball(ni: list[int], nj: list[int], rng: SplitMix64):
    si, sj = set(ni), set(nj)
    shared = si & sj
    pool = sorted(si ^ sj)
    a = len(ni) - len(shared)
    if a == 0 or a == len(pool):
        return ni, nj
    for k in range(len(pool) - 1, 0, -1):
        r = rng.randbelow(k + 1)
        pool[k], pool[r] = pool[r], pool[k]
    return sorted(shared.union(pool[:a])), sorted(shared.union(pool[a:]))


def trade(net: BipartiteNetwork, i: int, j: int, rng: SplitMix64, variant: str = "fastball") -> BipartiteNetwork:
    """Trade unique neighbors between top nodes ``i`` and ``j`` in place.

    Degrees of ``i``, ``j`` and every bottom node are unchanged, and each of
    the ``C(u, a)`` possible splits of the pooled neighbors is equally likely.
    Returns ``net`` for chaining.
    """
    _check_pair(net, i, j)
    if variant == "fastball":
        fn = _trade_fastball
    elif variant == "curveball":
        fn = _trade_curveball
    else:
        raise InvalidInputError(f"unknown trade variant {variant!r}; use one of {VARIANTS}")
    net.neighbors[i], net.neighbors[j] = fn(net.neighbors[i], net.neighbors[j], rng)
    return net


def pick_pair(rng: SplitMix64, top_count: int) -> tuple[int, int]:
    i = rng.randbelow(top_count)
    j = rng.randbelow(top_count)
    while j == i:
        j = rng.randbelow(top_count)
    return i, j


@dataclass
class TradeChain:
    """A single Markov chain of trades started from ``network`` (mutated in place)."""

    network: BipartiteNetwork
    rng: SplitMix64
    trades_done: int = 0
    variant: str = "fastball"
    last_pair: tuple[int, int] | None = field(default=None, repr=False)

    @classmethod
    def start(cls, network: BipartiteNetwork, seed: int, variant: str = "fastball") -> "TradeChain":
        return cls(network.copy(), SplitMix64(seed), variant=variant)

    def step(self) -> tuple[int, int]:
        random_trade_step(self)
        return self.last_pair

    def run(self, t: int) -> "TradeChain":
        return run_trades(self, t)


def random_trade_step(chain: TradeChain) -> TradeChain:
    """Trade between a uniformly random unordered pair of top nodes.

    Trades that move no neighbor still count.
    """
    net = chain.network
    if net.top_count < 2:
        raise DegenerateNetworkError("trading needs at least two top nodes")
    i, j = pick_pair(chain.rng, net.top_count)
    trade(net, i, j, chain.rng, chain.variant)
    chain.last_pair = (i, j)
    chain.trades_done += 1
    return chain


def run_trades(chain: TradeChain, t: int) -> TradeChain:
    if t < 1:
        raise InvalidInputError("number of trades must be positive")
    if chain.network.top_count < 2:
        raise DegenerateNetworkError("trading needs at least two top nodes")
    for _ in range(t):
        random_trade_step(chain)
    return chain
