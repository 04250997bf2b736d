"""Bipartite networks with fixed margins: representation, distance and feasibility."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class DegreeSequencePair:
    """Top- and bottom-node degree sequences (the margins of an incidence matrix).

    The pair is not required to be realizable; use :func:`is_realizable`
    to check that some network has these margins.
    """

    top: tuple[int, ...]
    bottom: tuple[int, ...]

    def __init__(self, top: Iterable[int], bottom: Iterable[int]):
        top = tuple(int(d) for d in top)
        bottom = tuple(int(d) for d in bottom)
        if any(d < 0 for d in top + bottom):
            raise InvalidInputError("degrees must be non-negative")
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "bottom", bottom)

    @property
    def edge_count(self) -> int:
        return sum(self.top)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.top), len(self.bottom)

    def __str__(self):
        top = ",".join(map(str, self.top))
        bottom = ",".join(map(str, self.bottom))
        return f"{{{top}}}/{{{bottom}}}"

    @classmethod
    def parse(cls, text: str) -> "DegreeSequencePair":
        """Parse ``"t1,..,tk;b1,..,bm"``."""
        parts = text.replace(" ", "").split(";")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise InvalidInputError(
                f"expected 'top;bottom' comma-separated degrees, got {text!r}"
            )
        try:
            top = [int(x) for x in parts[0].split(",")]
            bottom = [int(x) for x in parts[1].split(",")]
        except ValueError as exc:
            raise InvalidInputError(f"non-integer degree in {text!r}") from exc
        return cls(top, bottom)


@dataclass(frozen=True, order=True)
class CanonicalKey:
    """Row-major incidence bits packed into bytes (most significant bit first).

    Keys of the same shape order lexicographically by their bit strings.
    """

    shape: tuple[int, int]
    data: bytes

    def bitstring(self) -> str:
        n = self.shape[0] * self.shape[1]
        bits = np.unpackbits(np.frombuffer(self.data, dtype=np.uint8), count=n)
        return "".join("1" if b else "0" for b in bits)


class BipartiteNetwork:
    """Simple bipartite graph stored as sorted per-top-node neighbor lists.

    ``neighbors[i]`` is the strictly increasing list of bottom nodes that
    top node ``i`` is attached to. Nodes of degree zero are kept.
    """

    __slots__ = ("top_count", "bottom_count", "neighbors")

    def __init__(self, top_count: int, bottom_count: int, neighbors: Sequence[Iterable[int]] | None = None):
        if top_count < 0 or bottom_count < 0:
            raise InvalidInputError("node counts must be non-negative")
        self.top_count = int(top_count)
        self.bottom_count = int(bottom_count)
        if neighbors is None:
            neighbors = [[] for _ in range(self.top_count)]
        if len(neighbors) != self.top_count:
            raise InvalidInputError(
                f"expected {self.top_count} neighbor lists, got {len(neighbors)}"
            )
        lists = []
        for i, nbrs in enumerate(neighbors):
            row = sorted(int(j) for j in nbrs)
            for a, b in zip(row, row[1:]):
                if a == b:
                    raise InvalidInputError(f"duplicate neighbor {a} for top node {i}")
            if row and (row[0] < 0 or row[-1] >= self.bottom_count):
                raise InvalidInputError(f"neighbor index out of range for top node {i}")
            lists.append(row)
        self.neighbors = lists

    @classmethod
    def from_neighbors(cls, neighbors: Sequence[Iterable[int]], bottom_count: int | None = None):
        neighbors = [list(n) for n in neighbors]
        if bottom_count is None:
            bottom_count = 1 + max((max(n) for n in neighbors if n), default=-1)
        return cls(len(neighbors), bottom_count, neighbors)

    @classmethod
    def from_matrix(cls, matrix) -> "BipartiteNetwork":
        m = np.asarray(matrix)
        if m.ndim != 2:
            raise InvalidInputError("incidence matrix must be two-dimensional")
        if not np.isin(m, (0, 1)).all():
            raise InvalidInputError("incidence matrix must be binary")
        net = cls.__new__(cls)
        net.top_count, net.bottom_count = (int(s) for s in m.shape)
        net.neighbors = [np.flatnonzero(row).tolist() for row in m]
        return net

    def to_matrix(self) -> np.ndarray:
        m = np.zeros((self.top_count, self.bottom_count), dtype=np.uint8)
        for i, nbrs in enumerate(self.neighbors):
            m[i, nbrs] = 1
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return self.top_count, self.bottom_count

    @property
    def edge_count(self) -> int:
        return sum(len(n) for n in self.neighbors)

    def edges(self):
        for i, nbrs in enumerate(self.neighbors):
            for j in nbrs:
                yield i, j

    def copy(self) -> "BipartiteNetwork":
        net = BipartiteNetwork.__new__(BipartiteNetwork)
        net.top_count = self.top_count
        net.bottom_count = self.bottom_count
        net.neighbors = [list(n) for n in self.neighbors]
        return net

    def __eq__(self, other):
        if not isinstance(other, BipartiteNetwork):
            return NotImplemented
        return self.shape == other.shape and self.neighbors == other.neighbors

    __hash__ = None

    def __repr__(self):
        return f"BipartiteNetwork({self.top_count}, {self.bottom_count}, {self.neighbors})"


def _check_same_shape(a: BipartiteNetwork, b: BipartiteNetwork):
    if a.shape != b.shape:
        raise InvalidInputError(f"dimension mismatch: {a.shape} vs {b.shape}")


def differing_cells(a: BipartiteNetwork, b: BipartiteNetwork) -> int:
    """Number of incidence cells where ``a`` and ``b`` disagree."""
    _check_same_shape(a, b)
    total = 0
    for x, y in zip(a.neighbors, b.neighbors):
        # sorted-list merge for |x symmetric-difference y|
        p = q = common = 0
        while p < len(x) and q < len(y):
            if x[p] == y[q]:
                common += 1
                p += 1
                q += 1
            elif x[p] < y[q]:
                p += 1
            else:
                q += 1
        total += len(x) + len(y) - 2 * common
    return total


def distance(a: BipartiteNetwork, b: BipartiteNetwork) -> Fraction:
    """Fraction of incidence cells that differ between two same-shaped networks."""
    diff = differing_cells(a, b)
    cells = a.top_count * a.bottom_count
    if cells == 0:
        return Fraction(0)
    return Fraction(diff, cells)


def canonical_key(net: BipartiteNetwork) -> CanonicalKey:
    return CanonicalKey(net.shape, np.packbits(net.to_matrix().ravel()).tobytes())


def degree_sequences(net: BipartiteNetwork) -> DegreeSequencePair:
    bottom = [0] * net.bottom_count
    for nbrs in net.neighbors:
        for j in nbrs:
            bottom[j] += 1
    return DegreeSequencePair([len(n) for n in net.neighbors], bottom)


def is_realizable(pair: DegreeSequencePair) -> bool:
    """Gale-Ryser test: does some binary matrix have these row and column sums?"""
    return gale_ryser(pair.top, pair.bottom)


def gale_ryser(rows: Sequence[int], cols: Sequence[int]) -> bool:
    if any(d < 0 for d in rows) or any(d < 0 for d in cols):
        return False
    if sum(rows) != sum(cols):
        return False
    rows = sorted(rows, reverse=True)
    cols = list(cols)
    lhs = 0
    for k, r in enumerate(rows, start=1):
        if r == 0:
            break
        lhs += r
        if lhs > sum(min(c, k) for c in cols):
            return False
    return True
