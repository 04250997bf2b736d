"""Built-in degree sequences, greedy realization, and incidence / edge-list I/O."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .core import BipartiteNetwork, DegreeSequencePair, degree_sequences, is_realizable
from .errors import DatasetNotFoundError, InfeasibleMarginsError, InvalidInputError, ParseError


@dataclass
class NamedDataset:
    name: str
    pair: DegreeSequencePair
    network: BipartiteNetwork | None = None
    top_labels: list[str] = field(default_factory=list)
    bottom_labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.network is not None and degree_sequences(self.network) != self.pair:
            raise InvalidInputError("network margins do not match the dataset's degree sequences")

    def starting_network(self) -> BipartiteNetwork:
        """The bundled network, or a greedy realization of the margins."""
        return self.network if self.network is not None else realize(self.pair)


# Degree sequences only; the incidence data belongs to its original authors.
_BUILTINS = {
    "finches": (  # 13 species x 17 islands
        (14, 13, 14, 10, 12, 2, 10, 1, 10, 11, 6, 2, 17),
        (4, 4, 11, 10, 10, 8, 9, 10, 8, 9, 3, 10, 4, 7, 9, 3, 3),
    ),
    "women": (  # 18 women x 14 events
        (8, 7, 8, 7, 4, 4, 4, 3, 4, 4, 4, 6, 7, 8, 5, 2, 2, 2),
        (3, 3, 6, 4, 8, 8, 10, 14, 12, 5, 4, 6, 3, 3),
    ),
}

BUILTIN_NAMES = tuple(sorted(_BUILTINS))


def builtin(name: str) -> NamedDataset:
    try:
        top, bottom = _BUILTINS[name]
    except KeyError:
        raise DatasetNotFoundError(
            f"no built-in dataset {name!r}; available: {', '.join(BUILTIN_NAMES)}"
        ) from None
    return NamedDataset(name, DegreeSequencePair(top, bottom))


def realize(pair: DegreeSequencePair) -> BipartiteNetwork:
    """Deterministic greedy construction of a network with the given margins.

    Top nodes are served largest degree first; each takes the bottom nodes
    with the largest remaining demand. Ties go to the lowest index.
    """
    if not is_realizable(pair):
        raise InfeasibleMarginsError(f"no bipartite network has margins {pair}")
    residual = list(pair.bottom)
    neighbors: list[list[int]] = [[] for _ in pair.top]
    for i in sorted(range(len(pair.top)), key=lambda k: (-pair.top[k], k)):
        chosen = sorted(range(len(residual)), key=lambda j: (-residual[j], j))[: pair.top[i]]
        for j in chosen:
            residual[j] -= 1
        neighbors[i] = sorted(chosen)
    net = BipartiteNetwork(len(pair.top), len(pair.bottom), neighbors)
    if degree_sequences(net) != pair:  # pragma: no cover - guaranteed by Gale-Ryser
        raise InfeasibleMarginsError(f"greedy construction failed for {pair}")
    return net


_NUMERIC = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _split(line: str) -> list[str]:
    for delim in (",", "\t", ";"):
        if delim in line:
            return [c.strip().strip('"') for c in line.split(delim)]
    return line.split()


def parse_incidence(lines: Iterable[str], name: str = "incidence") -> NamedDataset:
    """Parse a 0/1 matrix with rows as top nodes.

    A header row and a label column are detected by non-numeric cells.
    """
    rows = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            rows.append((lineno, _split(line)))
    if not rows:
        raise ParseError("empty incidence file", 1)

    bottom_labels: list[str] = []
    first_line, first = rows[0]
    # a label column makes only the first cell non-numeric; a header row makes the rest so
    if any(c and not _NUMERIC.match(c) for c in first[1:]):
        bottom_labels = list(first)
        rows = rows[1:]
        if not rows:
            raise ParseError("incidence file has a header but no data", first_line)

    has_labels = not _NUMERIC.match(rows[0][1][0])
    width = len(rows[0][1])
    top_labels: list[str] = []
    matrix = []
    for lineno, cells in rows:
        if len(cells) != width:
            raise ParseError(f"ragged row: expected {width} cells, got {len(cells)}", lineno)
        if has_labels:
            top_labels.append(cells[0])
            cells = cells[1:]
        for c in cells:
            if c not in ("0", "1"):
                raise ParseError(f"non-binary cell {c!r}", lineno)
        matrix.append([c == "1" for c in cells])

    bottom_count = len(matrix[0])
    if bottom_labels:
        if len(bottom_labels) == bottom_count + 1:
            bottom_labels = bottom_labels[1:]
        elif len(bottom_labels) != bottom_count:
            raise ParseError("header width does not match data rows", first_line)
    else:
        bottom_labels = [str(j) for j in range(bottom_count)]
    if not top_labels:
        top_labels = [str(i) for i in range(len(matrix))]
    net = BipartiteNetwork(len(matrix), bottom_count, [[j for j, v in enumerate(row) if v] for row in matrix])
    return NamedDataset(name, degree_sequences(net), net, top_labels, bottom_labels)


def load_incidence(path) -> NamedDataset:
    path = Path(path)
    with path.open() as fh:
        return parse_incidence(fh, path.stem)


def parse_edgelist(lines: Iterable[str], name: str = "edgelist") -> NamedDataset:
    """Two-column ``top bottom`` label pairs; labels indexed in first-appearance order."""
    top_index: dict[str, int] = {}
    bottom_index: dict[str, int] = {}
    edges = set()
    neighbors: list[list[int]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = line.split()
        if len(cells) != 2:
            raise ParseError(f"expected two columns, got {len(cells)}", lineno)
        t, b = cells
        if t not in top_index:
            top_index[t] = len(top_index)
            neighbors.append([])
        if b not in bottom_index:
            bottom_index[b] = len(bottom_index)
        edge = (top_index[t], bottom_index[b])
        if edge in edges:
            raise ParseError(f"duplicate edge {t} {b}", lineno)
        edges.add(edge)
        neighbors[edge[0]].append(edge[1])
    if not edges:
        raise ParseError("empty edge list", 1)
    net = BipartiteNetwork(len(top_index), len(bottom_index), neighbors)
    return NamedDataset(name, degree_sequences(net), net, list(top_index), list(bottom_index))


def load_edgelist(path) -> NamedDataset:
    path = Path(path)
    with path.open() as fh:
        return parse_edgelist(fh, path.stem)


def format_incidence(net: BipartiteNetwork, delimiter: str = ",") -> str:
    return "".join(delimiter.join(map(str, row)) + "\n" for row in net.to_matrix())


def write_incidence(path, net: BipartiteNetwork, delimiter: str = ","):
    Path(path).write_text(format_incidence(net, delimiter))


SECTION = re.compile(r"^#\s*network\s+(\d+)\s*$")


def write_sample_archive(path, networks: Sequence[BipartiteNetwork]):
    """One edge list per network, each section headed by ``# network <k>``.

    Node labels are the integer indices. A leading ``# shape T B`` line records
    the dimensions so isolated nodes survive a round trip.
    """
    shape = networks[0].shape if networks else (0, 0)
    with Path(path).open("w") as fh:
        fh.write(f"# shape {shape[0]} {shape[1]}\n")
        for k, net in enumerate(networks):
            fh.write(f"# network {k}\n")
            for i, j in net.edges():
                fh.write(f"{i} {j}\n")


def read_sample_archive(path) -> list[BipartiteNetwork]:
    sections = split_archive(Path(path).read_text())
    shape = sections.pop("shape", None)
    if shape is None:
        raise ParseError("sample archive lacks a '# shape T B' line", 1)
    top, bottom = shape
    nets = []
    for k in sorted(k for k in sections):
        neighbors = [[] for _ in range(top)]
        for lineno, line in sections[k]:
            try:
                i, j = (int(x) for x in line.split())
            except ValueError:
                raise ParseError(f"bad edge line {line!r}", lineno) from None
            neighbors[i].append(j)
        nets.append(BipartiteNetwork(top, bottom, neighbors))
    return nets


def split_archive(text: str) -> dict:
    """Map section index to its ``(line number, edge line)`` pairs; ``"shape"`` to the dimensions."""
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        m = SECTION.match(line)
        if m:
            current = int(m.group(1))
            sections[current] = []
        elif line.startswith("# shape"):
            parts = line.split()
            sections["shape"] = (int(parts[2]), int(parts[3]))
        elif line.startswith("#"):
            continue
        elif current is None:
            raise ParseError("edge line before first '# network' header", lineno)
        else:
            sections[current].append((lineno, line))
    return sections
