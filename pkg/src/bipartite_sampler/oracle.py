"""Ground truth for small margins: enumerate every network, then check samples against it."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .core import (
    BipartiteNetwork,
    CanonicalKey,
    DegreeSequencePair,
    canonical_key,
    degree_sequences,
    distance,
    gale_ryser,
)
from .ensemble import Ensemble
from .errors import InvalidInputError, NonConvergenceError, SamplerError, UniverseTooLargeError
from .rng import derive_seed
from .stats import ChiSquaredResult, chi_squared_uniformity
from .stopping import StoppingConfig, run_stopping_rule

DEFAULT_CAP = 10**6

# (top, bottom, |B|, mean trades required, % random samples) as published
BENCHMARK_ROWS = [
    ((1, 1, 2), (1, 1, 2), 5, 12, 94.7),
    ((1, 2, 3), (1, 1, 2, 2), 8, 14, 94.2),
    ((2, 2, 3), (1, 1, 1, 2, 2), 31, 12, 95.6),
    ((3, 3, 3), (1, 1, 1, 2, 2, 2), 93, 12, 95.1),
    ((1, 4, 6), (1, 1, 1, 2, 2, 2, 2), 19, 17, 94.3),
    ((1, 5, 6), (1, 1, 1, 1, 2, 2, 2, 2), 52, 16, 94.8),
    ((1, 2, 2, 2), (1, 1, 2, 3), 27, 22, 94.8),
    ((1, 1, 2, 3), (1, 1, 1, 2, 2), 68, 23, 94.9),
    ((1, 1, 3, 5), (1, 1, 1, 2, 2, 3), 26, 25, 93.3),
    ((2, 2, 4, 4, 4), (2, 2, 4, 4, 4), 72, 31, 93.5),
]


def benchmark_pairs() -> list[DegreeSequencePair]:
    return [DegreeSequencePair(top, bottom) for top, bottom, *_ in BENCHMARK_ROWS]


@dataclass
class NetworkUniverse:
    """Every network with margins ``pair``, in ascending canonical-key order."""

    pair: DegreeSequencePair
    members: list[BipartiteNetwork]
    keys: list[CanonicalKey] = field(init=False)
    index: dict[bytes, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.keys = [canonical_key(m) for m in self.members]
        self.index = {k.data: n for n, k in enumerate(self.keys)}

    @property
    def cardinality(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)


def enumerate_universe(pair: DegreeSequencePair, cap: int = DEFAULT_CAP) -> NetworkUniverse:
    """Exhaustive row-by-row backtracking over binary matrices with the given margins.

    A partial assignment is abandoned as soon as the remaining rows and
    residual column sums fail the Gale-Ryser condition.
    """
    if cap < 1:
        raise InvalidInputError("cap must be positive")
    rows, cols = list(pair.top), list(pair.bottom)
    if not gale_ryser(rows, cols):
        return NetworkUniverse(pair, [])
    found: list[list[list[int]]] = []
    chosen: list[list[int]] = []
    residual = cols[:]

    def extend(r: int):
        if r == len(rows):
            found.append([list(c) for c in chosen])
            if len(found) > cap:
                raise UniverseTooLargeError(
                    f"more than {cap} networks have margins {pair}", len(found)
                )
            return
        open_cols = [j for j, c in enumerate(residual) if c > 0]
        for subset in itertools.combinations(open_cols, rows[r]):
            for j in subset:
                residual[j] -= 1
            if gale_ryser(rows[r + 1:], residual):
                chosen.append(list(subset))
                extend(r + 1)
                chosen.pop()
            for j in subset:
                residual[j] += 1

    extend(0)
    members = [BipartiteNetwork(len(rows), len(cols), nbrs) for nbrs in found]
    members.sort(key=canonical_key)
    return NetworkUniverse(pair, members)


def exact_distance_distribution(start: BipartiteNetwork, universe: NetworkUniverse) -> list[Fraction]:
    """Distance from ``start`` to every member of the universe, in member order."""
    if degree_sequences(start) != universe.pair:
        raise InvalidInputError("start does not have the universe's margins")
    return [distance(start, m) for m in universe.members]


@dataclass
class SampleValidation:
    covered: bool
    uniform: bool
    random: bool
    counts: list[int]
    chi_squared: ChiSquaredResult | None


def member_counts(keys: Iterable, universe: NetworkUniverse) -> list[int]:
    """Occurrences of each universe member among ``keys`` (CanonicalKey or raw bytes)."""
    counts = [0] * universe.cardinality
    for key in keys:
        data = key.data if isinstance(key, CanonicalKey) else key
        try:
            counts[universe.index[data]] += 1
        except KeyError:
            raise InvalidInputError("sampled network is not a member of the universe") from None
    return counts


def validate_counts(counts: Sequence[int], alpha: float = 0.05) -> SampleValidation:
    covered = all(c > 0 for c in counts)
    if len(counts) < 2:
        # a single-member universe is trivially uniform
        return SampleValidation(covered, True, covered, list(counts), None)
    chi = chi_squared_uniformity(counts)
    uniform = chi.p_value > alpha
    return SampleValidation(covered, uniform, covered and uniform, list(counts), chi)


def validate_sample(networks: Sequence[BipartiteNetwork], universe: NetworkUniverse, alpha: float = 0.05) -> SampleValidation:
    """Coverage (every member sampled) and uniformity (chi-squared p > alpha, zeros included)."""
    for net in networks:
        if net.shape != universe.pair.shape:
            raise InvalidInputError("sampled network has the wrong dimensions")
    return validate_counts(member_counts((canonical_key(n) for n in networks), universe), alpha)


@dataclass
class ValidationSummary:
    pair: DegreeSequencePair
    cardinality: int
    reps: int
    fraction_random: float
    mean_trades: float
    fraction_covered: float
    fraction_uniform: float
    trades: list[int] = field(default_factory=list, repr=False)
    nonconverged: int = 0

    def as_row(self) -> dict:
        return {
            "top": ",".join(map(str, self.pair.top)),
            "bottom": ",".join(map(str, self.pair.bottom)),
            "cardinality": self.cardinality,
            "reps": self.reps,
            "mean_trades": round(self.mean_trades, 4),
            "pct_random": round(100 * self.fraction_random, 2),
            "fraction_covered": round(self.fraction_covered, 4),
            "fraction_uniform": round(self.fraction_uniform, 4),
            "nonconverged": self.nonconverged,
        }


def run_validation_experiment(
    pair: DegreeSequencePair,
    reps: int,
    cfg: StoppingConfig | None = None,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    threads: int = 1,
    universe: NetworkUniverse | None = None,
    progress: Callable[[int], None] | None = None,
    validation_alpha: float = 0.05,
) -> ValidationSummary:
    """Repeat the stopping rule ``reps`` times from the first universe member
    and record how often the sample is random.

    ``validation_alpha`` is the chi-squared level for judging uniformity; it
    stays at 0.05 when the stopping rule itself uses a strict ``cfg.alpha``.
    """
    if reps < 1:
        raise InvalidInputError("reps must be positive")
    cfg = cfg or StoppingConfig()
    universe = universe or enumerate_universe(pair, cap)
    if universe.cardinality == 0:
        raise InvalidInputError(f"no network has margins {pair}")
    start = universe.members[0]
    n_random = n_covered = n_uniform = nonconverged = 0
    trades = []
    for rep in range(reps):
        ensemble = Ensemble(start, cfg.sample_size, derive_seed(seed, rep), threads)
        try:
            report = run_stopping_rule(ensemble, cfg)
        except NonConvergenceError as exc:
            nonconverged += 1
            trades.append(exc.trades_performed)
            continue
        trades.append(report.trades_performed)
        check = validate_counts(member_counts(ensemble.key_bytes(), universe), validation_alpha)
        n_random += check.random
        n_covered += check.covered
        n_uniform += check.uniform
        if progress is not None:
            progress(rep)
    return ValidationSummary(
        pair=pair,
        cardinality=universe.cardinality,
        reps=reps,
        fraction_random=n_random / reps,
        mean_trades=float(np.mean(trades)),
        fraction_covered=n_covered / reps,
        fraction_uniform=n_uniform / reps,
        trades=trades,
        nonconverged=nonconverged,
    )


@dataclass
class SweepSummary:
    rows: list[ValidationSummary]
    correlation_top_vs_trades: float | None
    failures: list[tuple[DegreeSequencePair, str]] = field(default_factory=list)

    @property
    def mean_fraction_random(self) -> float:
        return float(np.mean([r.fraction_random for r in self.rows])) if self.rows else math.nan

    @property
    def mean_trades(self) -> float:
        return float(np.mean([r.mean_trades for r in self.rows])) if self.rows else math.nan


def top_trades_correlation(rows: Sequence[ValidationSummary]) -> float | None:
    """Pearson r between top-node count and mean trades; None when undefined."""
    x = np.array([len(r.pair.top) for r in rows], dtype=float)
    y = np.array([r.mean_trades for r in rows], dtype=float)
    if len(set(x)) < 2 or np.ptp(y) == 0:
        return None
    return float(np.corrcoef(x, y)[0, 1])


def run_sweep(
    pairs: Sequence[DegreeSequencePair],
    reps: int,
    cfg: StoppingConfig | None = None,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    threads: int = 1,
    validation_alpha: float = 0.05,
) -> SweepSummary:
    rows, failures = [], []
    for p, pair in enumerate(pairs):
        try:
            rows.append(run_validation_experiment(
                pair, reps, cfg, derive_seed(seed, p), cap, threads, validation_alpha=validation_alpha
            ))
        except SamplerError as exc:
            failures.append((pair, str(exc)))
    return SweepSummary(rows, top_trades_correlation(rows), failures)


def _nondecreasing(length: int, low: int, high: int) -> Iterator[tuple[int, ...]]:
    return itertools.combinations_with_replacement(range(low, high + 1), length)


def degree_sequence_family(
    max_top: int,
    max_bottom: int,
    max_cardinality: int = 100,
    min_cardinality: int = 2,
    min_top: int = 2,
) -> Iterator[tuple[DegreeSequencePair, int]]:
    """All non-decreasing positive margin pairs up to the given side lengths
    whose universe size lies in ``[min_cardinality, max_cardinality)``.

    Yields ``(pair, cardinality)``.
    """
    for t in range(min_top, max_top + 1):
        for b in range(1, max_bottom + 1):
            for top in _nondecreasing(t, 1, b):
                total = sum(top)
                for bottom in _nondecreasing(b, 1, t):
                    if sum(bottom) != total or not gale_ryser(top, bottom):
                        continue
                    pair = DegreeSequencePair(top, bottom)
                    try:
                        size = enumerate_universe(pair, cap=max_cardinality - 1).cardinality
                    except UniverseTooLargeError:
                        continue
                    if size >= min_cardinality:
                        yield pair, size
