"""Trade until the distance-from-start distribution stops changing.

All chains start from the same network and advance ``n`` trades per round.
After each round the distances to the start form a profile ``D_t``; from
the second round on, ``D_t`` is compared with ``D_{t-n}`` by a two-sample
KS test, and trading stops at the first ``t`` whose p-value exceeds ``alpha``.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .core import BipartiteNetwork, differing_cells
from .ensemble import Ensemble
from .errors import DegenerateNetworkError, InvalidInputError, NonConvergenceError
from .rng import derive_seed
from .stats import KsResult, ks_permutation, ks_two_sample

KS_METHODS = ("asymptotic", "permutation")
STRICT_ALPHA = 0.95


@dataclass(frozen=True)
class StoppingConfig:
    """Stopping-rule parameters.

    ``checkpoint_interval=None`` means twice the number of top nodes.
    ``ks_method="permutation"`` swaps the asymptotic KS p-value for a
    permutation p-value with ``permutations`` resamples.
    """

    sample_size: int = 1000
    checkpoint_interval: int | None = None
    alpha: float = 0.05
    max_trades: int = 10**6
    ks_method: str = "asymptotic"
    permutations: int = 999

    def __post_init__(self):
        if self.sample_size < 2:
            raise InvalidInputError("sample_size must be at least 2")
        if self.checkpoint_interval is not None and self.checkpoint_interval < 1:
            raise InvalidInputError("checkpoint interval must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidInputError("alpha must lie strictly between 0 and 1")
        if self.max_trades < 1:
            raise InvalidInputError("max_trades must be positive")
        if self.ks_method not in KS_METHODS:
            raise InvalidInputError(f"ks_method must be one of {KS_METHODS}")

    def interval(self, top_count: int) -> int:
        if self.checkpoint_interval is not None:
            return self.checkpoint_interval
        return max(1, 2 * top_count)


@dataclass(eq=False)
class DistanceProfile:
    """Distances from the start for every ensemble member after ``t`` trades.

    Stored as integer differing-cell counts over ``cells`` incidence cells.
    """

    t: int
    diff_counts: np.ndarray
    cells: int

    @property
    def values(self) -> np.ndarray:
        if self.cells == 0:
            return np.zeros(len(self.diff_counts))
        return self.diff_counts / self.cells

    def fractions(self) -> list[Fraction]:
        return [Fraction(int(c), self.cells or 1) for c in self.diff_counts]

    def __len__(self):
        return len(self.diff_counts)


@dataclass(eq=False)
class SampleReport:
    trades_performed: int
    matrices: np.ndarray
    ks_trace: list[tuple[int, KsResult]]
    final_profile: DistanceProfile
    unique_count: int
    seed: int
    config: StoppingConfig
    elapsed_seconds: float = 0.0
    _networks: list | None = field(default=None, repr=False)

    @property
    def networks(self) -> list[BipartiteNetwork]:
        if self._networks is None:
            self._networks = [BipartiteNetwork.from_matrix(m) for m in self.matrices]
        return self._networks

    @property
    def sample_size(self) -> int:
        return len(self.matrices)

    def to_dict(self) -> dict:
        """Machine-readable summary; excludes timing so reruns compare equal."""
        return {
            "seed": self.seed,
            "config": asdict(self.config),
            "trades_performed": self.trades_performed,
            "sample_size": self.sample_size,
            "unique_count": self.unique_count,
            "ks_trace": [
                {"t": t, "ks_statistic": r.statistic, "p_value": r.p_value}
                for t, r in self.ks_trace
            ],
            "final_distance_counts": self.final_profile.diff_counts.tolist(),
            "cells": self.final_profile.cells,
            "networks_sha256": hashlib.sha256(
                np.ascontiguousarray(self.matrices, dtype=np.uint8).tobytes()
            ).hexdigest(),
        }


def distance_profile(start: BipartiteNetwork, ensemble: Sequence[BipartiteNetwork], t: int) -> DistanceProfile:
    counts = np.array([differing_cells(start, net) for net in ensemble], dtype=np.int64)
    return DistanceProfile(t, counts, start.top_count * start.bottom_count)


def ensemble_profile(ensemble: Ensemble) -> DistanceProfile:
    cells = ensemble.matrices.shape[1] * ensemble.matrices.shape[2]
    return DistanceProfile(ensemble.trades_done, ensemble.differing_cells(), cells)


def compare_profiles(current: DistanceProfile, previous: DistanceProfile, cfg: StoppingConfig, seed: int = 0) -> KsResult:
    if cfg.ks_method == "permutation":
        return ks_permutation(current.values, previous.values, cfg.permutations, derive_seed(seed, -1, current.t))
    return ks_two_sample(current.values, previous.values)


def run_stopping_rule(
    ensemble: Ensemble,
    cfg: StoppingConfig,
    on_checkpoint: Callable[[DistanceProfile], None] | None = None,
) -> SampleReport:
    """Advance ``ensemble`` in rounds of ``n`` trades until KS p > alpha.

    The ensemble is left at the stopping point, so callers may keep trading.
    Raises :class:`NonConvergenceError` when another round would exceed
    ``cfg.max_trades``.
    """
    began = time.perf_counter()
    n = cfg.interval(ensemble.top_count)
    trace: list[tuple[int, KsResult]] = []
    previous = None
    while True:
        if ensemble.trades_done + n > cfg.max_trades:
            raise NonConvergenceError(
                f"distance distribution did not stabilize within {cfg.max_trades} trades",
                trace,
                ensemble.trades_done,
            )
        ensemble.advance(n)
        current = ensemble_profile(ensemble)
        if on_checkpoint is not None:
            on_checkpoint(current)
        if previous is not None:
            result = compare_profiles(current, previous, cfg, ensemble.seed)
            trace.append((current.t, result))
            if result.p_value > cfg.alpha:
                break
        previous = current
    return SampleReport(
        trades_performed=ensemble.trades_done,
        matrices=ensemble.matrices.copy(),
        ks_trace=trace,
        final_profile=current,
        unique_count=ensemble.unique_count(),
        seed=ensemble.seed,
        config=cfg,
        elapsed_seconds=time.perf_counter() - began,
    )


def sample_with_stopping_rule(
    start: BipartiteNetwork,
    cfg: StoppingConfig | None = None,
    seed: int = 0,
    threads: int = 1,
    on_checkpoint: Callable[[DistanceProfile], None] | None = None,
) -> SampleReport:
    """Draw ``cfg.sample_size`` networks with ``start``'s margins using the stopping rule.

    Chain ``k`` is seeded with ``derive_seed(seed, k)``; the report is a
    deterministic function of ``(start, cfg, seed)``.
    """
    cfg = cfg or StoppingConfig()
    if start.top_count < 2:
        if start.edge_count:
            raise DegenerateNetworkError("trading needs at least two top nodes")
        # no edges: the start is the only network with these margins
        mats = np.zeros((cfg.sample_size,) + start.shape, dtype=bool)
        profile = DistanceProfile(0, np.zeros(cfg.sample_size, dtype=np.int64), start.top_count * start.bottom_count)
        return SampleReport(0, mats, [], profile, 1, seed, cfg)
    ensemble = Ensemble(start, cfg.sample_size, seed, threads)
    return run_stopping_rule(ensemble, cfg, on_checkpoint)
