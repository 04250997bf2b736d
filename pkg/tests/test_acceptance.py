"""Exit criteria. Each test records one PASS/FAIL line, printed in the terminal summary."""

import itertools
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from bipartite_sampler import (
    BipartiteNetwork,
    DegreeSequencePair,
    Ensemble,
    SplitMix64,
    StoppingConfig,
    builtin,
    degree_sequences,
    distance,
    enumerate_universe,
    exact_distance_distribution,
    run_validation_experiment,
    sample_with_stopping_rule,
    trade,
)
from bipartite_sampler.oracle import BENCHMARK_ROWS, run_sweep, benchmark_pairs
from bipartite_sampler.rng import derive_seed
from bipartite_sampler.stats import chi2_sf, chi_squared_uniformity, ks_statistic
from bipartite_sampler.stopping import ensemble_profile, ks_two_sample, run_stopping_rule

RESULTS: list[tuple[str, bool, str]] = []
SEED = 1
REPS = 200
TOY = DegreeSequencePair([1, 1, 2], [1, 1, 2])
ROW3 = DegreeSequencePair([2, 2, 3], [1, 1, 1, 2, 2])
ROW4 = DegreeSequencePair([3, 3, 3], [1, 1, 1, 2, 2, 2])


def record(name, ok, detail):
    RESULTS.append((name, bool(ok), detail))
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def toy_validation():
    began = time.perf_counter()
    summary = run_validation_experiment(TOY, REPS, StoppingConfig(sample_size=1000, checkpoint_interval=6), SEED)
    return summary, time.perf_counter() - began


@pytest.fixture(scope="module")
def row_validations():
    out = {}
    for pair in (ROW3, ROW4):
        for alpha in (0.05, 0.95):
            out[pair, alpha] = run_validation_experiment(pair, REPS, StoppingConfig(alpha=alpha), SEED)
    return out


def test_c01_enumeration_exactness():
    began = time.perf_counter()
    sizes = [enumerate_universe(p).cardinality for p in benchmark_pairs()]
    elapsed = time.perf_counter() - began
    expected = [5, 8, 31, 93, 19, 52, 27, 68, 26, 72]
    assert expected == [row[2] for row in BENCHMARK_ROWS]
    record("C1 enumeration exactness", sizes == expected and elapsed < 10,
           f"sizes={sizes} elapsed={elapsed:.3f}s (<10s)")


def test_c02_exact_distance_law():
    universe = enumerate_universe(TOY)
    target = sorted([Fraction(0), Fraction(4, 9), Fraction(4, 9), Fraction(4, 9), Fraction(6, 9)])
    laws = [sorted(exact_distance_distribution(m, universe)) for m in universe.members]
    matching = sum(law == target for law in laws)
    record("C2 exact distance law", matching >= 1,
           f"{matching}/{len(laws)} members have distance multiset {{0, 4/9 x3, 6/9}}")


def test_c03_toy_validity(toy_validation):
    summary, elapsed = toy_validation
    ok = 0.88 <= summary.fraction_random <= 1.0 and elapsed < 300
    record("C3 toy stopping-rule validity", ok,
           f"fraction_random={summary.fraction_random:.3f} over {summary.reps} reps in [0.88, 1.00] "
           f"(reference 0.947); elapsed={elapsed:.1f}s (<300s)")


def test_c04_toy_mean_trades(toy_validation):
    summary, _ = toy_validation
    record("C4 toy mean trades", 12 <= summary.mean_trades <= 18,
           f"mean t*={summary.mean_trades:.2f} in [12, 18] (reference 12)")


@pytest.mark.parametrize("pair,reference", [(ROW3, 0.956), (ROW4, 0.951)], ids=["row3", "row4"])
def test_c05_benchmark_rows(row_validations, pair, reference):
    s = row_validations[pair, 0.05]
    record(f"C5 benchmark row {pair}", abs(s.fraction_random - reference) <= 0.05 and s.reps >= 200,
           f"fraction_random={s.fraction_random:.3f} vs reference {reference:.3f} (+/-0.05), |B|={s.cardinality}, "
           f"mean trades={s.mean_trades:.2f}")


@pytest.mark.parametrize("pair", [ROW3, ROW4], ids=["row3", "row4"])
def test_c06_strict_threshold_direction(row_validations, pair):
    loose, strict = row_validations[pair, 0.05], row_validations[pair, 0.95]
    record(f"C6 strict alpha direction {pair}", strict.mean_trades > loose.mean_trades,
           f"mean trades alpha=0.95: {strict.mean_trades:.2f} > alpha=0.05: {loose.mean_trades:.2f}; "
           f"random {strict.fraction_random:.3f} vs {loose.fraction_random:.3f}")


@pytest.mark.parametrize("name", ["women", "finches"])
def test_c07_application_uniqueness(name):
    start = builtin(name).starting_network()
    began = time.perf_counter()
    report = sample_with_stopping_rule(start, StoppingConfig(sample_size=10_000), seed=SEED)
    elapsed = time.perf_counter() - began
    record(f"C7 uniqueness {name}", report.unique_count == 10_000 and elapsed < 60,
           f"unique={report.unique_count}/10000 after {report.trades_performed} trades in {elapsed:.2f}s (<60s)")


def test_c08_finches_convergence_shape():
    start = builtin("finches").starting_network()
    cfg = StoppingConfig(sample_size=10_000)
    ens = Ensemble(start, cfg.sample_size, SEED)
    report = run_stopping_rule(ens, cfg)
    n = cfg.interval(start.top_count)
    stop_p = report.ks_trace[-1][1].p_value
    previous, later = report.final_profile, []
    for _ in range(5):
        ens.advance(n)
        current = ensemble_profile(ens)
        later.append(ks_two_sample(current.values, previous.values).p_value)
        previous = current
    ok = stop_p > cfg.alpha and all(p > 0.01 for p in later)
    record("C8 finches convergence shape", ok,
           f"stopped at t={report.trades_performed} with p={stop_p:.4f}; next 5 checkpoint p-values "
           f"{[round(p, 3) for p in later]} all > 0.01")


def test_c09_property_suites():
    checks = {}

    # degree preservation over 10**6 trades
    gen = np.random.default_rng(0)
    net = BipartiteNetwork.from_matrix(gen.random((12, 15)) < 0.35)
    margins = degree_sequences(net)
    ens = Ensemble(net, 2000, SEED).advance(500)
    checks["degree preservation (1e6 trades)"] = (
        ens.size * ens.trades_done == 10**6
        and (ens.matrices.sum(axis=2) == margins.top).all()
        and (ens.matrices.sum(axis=1) == margins.bottom).all()
    )

    # metric axioms on random triples
    ok = True
    for _ in range(500):
        shape = tuple(gen.integers(1, 7, size=2))
        a, b, c = (BipartiteNetwork.from_matrix(gen.random(shape) < 0.5) for _ in range(3))
        ok &= distance(a, a) == 0 and distance(a, b) == distance(b, a)
        ok &= distance(a, c) <= distance(a, b) + distance(b, c)
    checks["metric axioms"] = ok

    # uniform split chi-squared at 1e5 draws for a fixed pool
    ni, nj = [0, 1, 5], [2, 3, 5, 6]
    rng = SplitMix64(SEED)
    counts = Counter()
    for _ in range(100_000):
        pair = BipartiteNetwork(2, 7, [ni, nj])
        trade(pair, 0, 1, rng)
        counts[tuple(pair.neighbors[0])] += 1
    pool = [0, 1, 2, 3, 6]
    splits = [tuple(sorted(set(c) | {5})) for c in itertools.combinations(pool, 2)]
    p_split = chi_squared_uniformity([counts.get(s, 0) for s in splits]).p_value
    checks[f"uniform split (p={p_split:.3f})"] = set(counts) <= set(splits) and p_split > 0.001

    # toy ergodicity
    universe = enumerate_universe(TOY)
    all_keys = {k.data for k in universe.keys}
    reached = True
    for x, member in enumerate(universe.members):
        chains = Ensemble(member, 50, derive_seed(SEED, x))
        seen = set()
        for _ in range(100):
            seen.update(chains.advance(1).key_bytes())
        reached &= seen == all_keys
    checks["toy ergodicity"] = reached

    # determinism
    a = sample_with_stopping_rule(universe.members[0], StoppingConfig(sample_size=500), seed=SEED)
    b = sample_with_stopping_rule(universe.members[0], StoppingConfig(sample_size=500), seed=SEED)
    checks["determinism"] = a.to_dict() == b.to_dict()

    record("C9 property suites", all(checks.values()),
           "; ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in checks.items()))


def test_c10_statistical_kernels():
    gen = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        m, k = gen.integers(1, 60, size=2)
        d1, d2 = gen.integers(0, 8, m) / 9, gen.integers(0, 8, k) / 9
        direct = max(abs(np.mean(d1 <= x) - np.mean(d2 <= x)) for x in np.union1d(d1, d2))
        worst = max(worst, abs(ks_statistic(d1, d2) - direct))
    critical = {0.05: [3.841, 5.991, 7.815, 9.488, 11.070, 12.592, 14.067, 15.507, 16.919, 18.307],
                0.01: [6.635, 9.210, 11.345, 13.277, 15.086, 16.812, 18.475, 20.090, 21.666, 23.209]}
    chi_ok = all(round(chi2_sf(x, df), 4) == level
                 for level, xs in critical.items() for df, x in enumerate(xs, start=1))
    record("C10 statistical kernels", worst < 1e-12 and chi_ok,
           f"max |KS - direct ECDF| over 1000 tied inputs = {worst:.1e}; chi2 critical values df<=10 to 4dp: {chi_ok}")


def test_benchmark_trades_grow_with_top_count():
    sweep = run_sweep(benchmark_pairs(), 100, StoppingConfig(), SEED)
    r = sweep.correlation_top_vs_trades
    record("benchmark sweep direction", not sweep.failures and r is not None and r > 0,
           f"corr(top count, mean trades)={r:.3f} > 0 over {len(sweep.rows)} rows, 100 reps each; "
           f"mean pct random={100 * sweep.mean_fraction_random:.1f}")
