"""Command-line interface: ``bipsample {sample,validate,enumerate,sweep,profile}``.

Exit codes: 0 success, 2 usage or parse error, 3 infeasible margins,
4 non-convergence, 5 universe too large.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import secrets
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import datasets
from .core import DegreeSequencePair, is_realizable
from .ensemble import Ensemble
from .errors import (
    DatasetNotFoundError,
    InfeasibleMarginsError,
    InvalidInputError,
    NonConvergenceError,
    ParseError,
    UniverseTooLargeError,
)
from .oracle import (
    DEFAULT_CAP,
    degree_sequence_family,
    enumerate_universe,
    run_sweep,
    run_validation_experiment,
    benchmark_pairs,
)
from .stopping import STRICT_ALPHA, StoppingConfig, run_stopping_rule

log = logging.getLogger("bipartite_sampler")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_NONCONVERGENCE = 4
EXIT_TOO_LARGE = 5


def _add_input(parser: argparse.ArgumentParser):
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", metavar="NAME", help=f"built-in margins: {', '.join(datasets.BUILTIN_NAMES)}")
    src.add_argument("--incidence", metavar="PATH", help="0/1 incidence matrix, rows are top nodes")
    src.add_argument("--edgelist", metavar="PATH", help="two-column 'top bottom' edge list")
    src.add_argument("--degrees", metavar="T;B", help='inline margins, e.g. "1,1,2;1,1,2"')


def _add_stopping(parser: argparse.ArgumentParser):
    parser.add_argument("--sample-size", type=int, default=1000)
    parser.add_argument("--interval", type=int, default=None, help="trades between checkpoints (default 2 x top nodes)")
    parser.add_argument("--alpha", type=float, default=None, help="stop when KS p exceeds this (default 0.05)")
    parser.add_argument("--strict", action="store_true", help=f"use alpha = {STRICT_ALPHA}")
    parser.add_argument("--max-trades", type=int, default=10**6)
    parser.add_argument("--ks-method", choices=("asymptotic", "permutation"), default="asymptotic")


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=None, help="master seed (random and recorded if omitted)")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", metavar="DIR", default=".", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bipsample", description="Sample bipartite networks with fixed degree sequences.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw a sample with the stopping rule")
    _add_input(p)
    _add_stopping(p)
    _add_common(p)

    p = sub.add_parser("validate", help="repeat the stopping rule and check randomness against the full universe")
    _add_input(p)
    _add_stopping(p)
    _add_common(p)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p = sub.add_parser("enumerate", help="list every network with the given margins")
    _add_input(p)
    _add_common(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p = sub.add_parser("sweep", help="validate many margin pairs and correlate trades with top-node count")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--benchmark", action="store_true", help="the ten published benchmark margin pairs")
    src.add_argument("--degrees", metavar="T;B", action="append", help="margin pair (repeatable)")
    src.add_argument("--family", metavar="T,B", help="all margin pairs up to T top and B bottom nodes")
    p.add_argument("--max-cardinality", type=int, default=100, help="family filter: keep |B| below this")
    _add_stopping(p)
    _add_common(p)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p = sub.add_parser("profile", help="time the stopping rule against bare trading")
    _add_input(p)
    _add_stopping(p)
    _add_common(p)
    return parser


def _load_input(args) -> datasets.NamedDataset:
    if args.builtin:
        return datasets.builtin(args.builtin)
    if args.incidence:
        return datasets.load_incidence(args.incidence)
    if args.edgelist:
        return datasets.load_edgelist(args.edgelist)
    pair = DegreeSequencePair.parse(args.degrees)
    if not is_realizable(pair):
        raise InfeasibleMarginsError(f"no bipartite network has margins {pair}")
    return datasets.NamedDataset("degrees", pair)


def _input_label(args) -> str:
    for flag in ("builtin", "incidence", "edgelist"):
        value = getattr(args, flag, None)
        if value:
            return f"--{flag} {value}"
    degrees = getattr(args, "degrees", None)
    if isinstance(degrees, list):
        return " ".join(f'--degrees "{d}"' for d in degrees)
    if degrees:
        return f'--degrees "{degrees}"'
    if getattr(args, "benchmark", False):
        return "--benchmark"
    return f"--family {args.family}"


def _config(args) -> StoppingConfig:
    if args.strict and args.alpha is not None:
        raise InvalidInputError("--strict and --alpha are mutually exclusive")
    alpha = STRICT_ALPHA if args.strict else (0.05 if args.alpha is None else args.alpha)
    return StoppingConfig(
        sample_size=args.sample_size,
        checkpoint_interval=args.interval,
        alpha=alpha,
        max_trades=args.max_trades,
        ks_method=args.ks_method,
    )


def _write_summary(out: Path, summary: dict):
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    lines = []
    for key in sorted(summary):
        value = summary[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key}={value}")
    (out / "summary.txt").write_text("\n".join(lines) + "\n")


def _write_trace(path: Path, trace):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "ks_statistic", "p_value"])
        for t, r in trace:
            w.writerow([t, repr(r.statistic), repr(r.p_value)])


def cmd_sample(args, out: Path) -> int:
    dataset = _load_input(args)
    start = dataset.starting_network()
    cfg = _config(args)
    summary = {
        "command": "sample",
        "input": _input_label(args),
        "seed": args.seed,
        "config": asdict(cfg),
        "top": list(dataset.pair.top),
        "bottom": list(dataset.pair.bottom),
    }
    began = time.perf_counter()
    profiles = (out / "profiles.csv").open("w")
    profiles.write("t,distance\n")

    def on_checkpoint(profile):
        profiles.writelines(f"{profile.t},{v:.12g}\n" for v in profile.values)

    ensemble = Ensemble(start, cfg.sample_size, args.seed, args.threads)
    try:
        report = run_stopping_rule(ensemble, cfg, on_checkpoint)
    except NonConvergenceError as exc:
        _write_trace(out / "ks_trace.csv", exc.trace)
        summary.update(status="nonconverged", trades_performed=exc.trades_performed,
                       elapsed_seconds=time.perf_counter() - began)
        _write_summary(out, summary)
        raise
    finally:
        profiles.close()
    _write_trace(out / "ks_trace.csv", report.ks_trace)
    datasets.write_sample_archive(out / "networks.txt", report.networks)
    summary.update(
        status="converged",
        trades_performed=report.trades_performed,
        sample_size=report.sample_size,
        unique_count=report.unique_count,
        final_ks_statistic=report.ks_trace[-1][1].statistic,
        final_p_value=report.ks_trace[-1][1].p_value,
        elapsed_seconds=time.perf_counter() - began,
    )
    _write_summary(out, summary)
    print(f"trades_performed={report.trades_performed} unique_count={report.unique_count}/{report.sample_size}")
    return EXIT_OK


_VALIDATION_FIELDS = ["top", "bottom", "cardinality", "reps", "mean_trades", "pct_random",
                      "fraction_covered", "fraction_uniform", "nonconverged"]


def _write_rows(path: Path, rows):
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=_VALIDATION_FIELDS)
        w.writeheader()
        w.writerows(rows)


def cmd_validate(args, out: Path) -> int:
    if args.reps < 1:
        raise InvalidInputError("--reps must be positive")
    pair = _load_input(args).pair
    cfg = _config(args)
    began = time.perf_counter()
    result = run_validation_experiment(pair, args.reps, cfg, args.seed, args.cap, args.threads)
    row = result.as_row()
    _write_rows(out / "validation.csv", [row])
    _write_summary(out, {
        "command": "validate", "input": _input_label(args), "seed": args.seed,
        "config": asdict(cfg), **row, "elapsed_seconds": time.perf_counter() - began,
    })
    print(f"{pair} |B|={result.cardinality} mean_trades={result.mean_trades:.2f} random={100 * result.fraction_random:.2f}%")
    return EXIT_OK


def cmd_enumerate(args, out: Path) -> int:
    pair = _load_input(args).pair
    universe = enumerate_universe(pair, args.cap)
    with (out / "universe.txt").open("w") as fh:
        for k, member in enumerate(universe.members):
            fh.write(f"# network {k}\n")
            fh.write(datasets.format_incidence(member))
    _write_summary(out, {
        "command": "enumerate", "input": _input_label(args), "seed": args.seed,
        "top": list(pair.top), "bottom": list(pair.bottom), "cardinality": universe.cardinality,
    })
    print(f"{pair} |B|={universe.cardinality}")
    return EXIT_OK


def cmd_sweep(args, out: Path) -> int:
    if args.reps < 1:
        raise InvalidInputError("--reps must be positive")
    if args.benchmark:
        pairs = benchmark_pairs()
    elif args.degrees:
        pairs = [DegreeSequencePair.parse(d) for d in args.degrees]
    else:
        try:
            max_top, max_bottom = (int(x) for x in args.family.split(","))
        except ValueError:
            raise InvalidInputError("--family expects T,B") from None
        pairs = [p for p, _ in degree_sequence_family(max_top, max_bottom, args.max_cardinality)]
    cfg = _config(args)
    began = time.perf_counter()
    sweep = run_sweep(pairs, args.reps, cfg, args.seed, args.cap, args.threads)
    _write_rows(out / "sweep.csv", [r.as_row() for r in sweep.rows])
    _write_summary(out, {
        "command": "sweep", "input": _input_label(args), "seed": args.seed, "config": asdict(cfg),
        "pairs": len(pairs),
        "correlation_top_vs_trades": sweep.correlation_top_vs_trades,
        "mean_pct_random": 100 * sweep.mean_fraction_random if sweep.rows else None,
        "mean_trades": sweep.mean_trades if sweep.rows else None,
        "failures": [{"pair": str(p), "error": msg} for p, msg in sweep.failures],
        "elapsed_seconds": time.perf_counter() - began,
    })
    r = sweep.correlation_top_vs_trades
    print(f"{len(sweep.rows)} pairs, mean random {100 * sweep.mean_fraction_random:.2f}%, "
          f"r(top, trades) = {'n/a' if r is None else f'{r:.3f}'}")
    return EXIT_OK


def cmd_profile(args, out: Path) -> int:
    dataset = _load_input(args)
    start = dataset.starting_network()
    cfg = _config(args)

    began = time.perf_counter()
    report = run_stopping_rule(Ensemble(start, cfg.sample_size, args.seed, args.threads), cfg)
    with_rule = time.perf_counter() - began

    # same trade budget, same chains, no profiles or KS tests
    ensemble = Ensemble(start, cfg.sample_size, args.seed, args.threads)
    began = time.perf_counter()
    ensemble.advance(report.trades_performed)
    bare = time.perf_counter() - began

    ratio = with_rule / bare if bare > 0 else None
    _write_summary(out, {
        "command": "profile", "input": _input_label(args), "seed": args.seed, "config": asdict(cfg),
        "trades_performed": report.trades_performed,
        "seconds_with_stopping_rule": with_rule,
        "seconds_bare_trades": bare,
        "overhead_ratio": ratio,
    })
    print(f"trades={report.trades_performed} with_rule={with_rule:.3f}s bare={bare:.3f}s ratio={ratio:.2f}")
    return EXIT_OK


COMMANDS = {
    "sample": cmd_sample,
    "validate": cmd_validate,
    "enumerate": cmd_enumerate,
    "sweep": cmd_sweep,
    "profile": cmd_profile,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.seed is None:
        args.seed = secrets.randbits(64)
        log.info("seed=%d", args.seed)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](args, out)
    except InfeasibleMarginsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except UniverseTooLargeError as exc:
        print(f"error: {exc} (at least {exc.partial_count} members)", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (ParseError, InvalidInputError, DatasetNotFoundError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
