"""Command-line benchmark runner.

Exit codes: 0 success, 1 configuration error, 2 missing data files,
3 at least one run failed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import ConfigError, ExperimentConfig, run_experiment
from .orchestrator import DEFAULT_XI, RestartParams
from .problems.suite import MissingDataError


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse's default exits with code 2
        raise ConfigError(message)


def parse_problem_ids(text: str) -> tuple[int, ...]:
    ids: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, _, hi = part.partition("-")
            ids.extend(range(int(lo), int(hi) + 1))
        else:
            ids.append(int(part))
    if not ids:
        raise ValueError("no problem ids given")
    return tuple(ids)


def parse_xi(text: str) -> RestartParams:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError("xi must be four comma-separated values")
    return RestartParams(n=int(parts[0]), n_inc=float(parts[1]),
                         n_c=float(parts[2]), n_c_inc=float(parts[3]))


def parse_budget_override(text: str) -> tuple[int, int]:
    pid, _, budget = text.partition("=")
    if not budget:
        raise ValueError("budget override must look like P=B")
    return int(pid), int(budget)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="hillvallea-bench",
        description="Run the multimodal benchmark suite and emit score tables.")
    parser.add_argument("--problems", default="1-20",
                        help="problem ids, e.g. '1-20' or '2,6,11' (default 1-20)")
    parser.add_argument("--runs", type=int, default=50,
                        help="repetitions per problem (default 50)")
    parser.add_argument("--seed", type=int, default=0,
                        help="base seed; run r uses seed+r (default 0)")
    parser.add_argument("--data-dir", type=Path, default=None,
                        help="directory with composition data files "
                             "(default: packaged data)")
    parser.add_argument("--out", type=Path, default=Path("bench-results"),
                        help="output directory (default bench-results)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="score table format (default csv)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel worker processes (default 1)")
    parser.add_argument("--xi", default=None, metavar="N,NINC,NC,NCINC",
                        help="restart parameters (default 64,2,0.8,1.1)")
    parser.add_argument("--xi-scaling", choices=("with-d", "literal"),
                        default="with-d",
                        help="scale the base population size by the problem "
                             "dimension, or use it literally (default with-d)")
    parser.add_argument("--budget-override", action="append", default=[],
                        metavar="P=B", help="override problem P's budget to B "
                                            "(repeatable)")
    parser.add_argument("--no-traces", action="store_true",
                        help="skip writing per-run trace CSVs")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = ExperimentConfig(
            problems=parse_problem_ids(args.problems),
            runs=args.runs,
            seed=args.seed,
            xi=parse_xi(args.xi) if args.xi else DEFAULT_XI,
            xi_scaling=args.xi_scaling,
            data_dir=args.data_dir,
            out_dir=args.out,
            fmt=args.format,
            jobs=args.jobs,
            budget_overrides=dict(parse_budget_override(s)
                                  for s in args.budget_override),
            write_traces=not args.no_traces,
        )
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1

    try:
        report, failures = run_experiment(cfg)
    except MissingDataError as exc:
        print(f"missing data: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1

    for p in report.problems:
        print(f"problem {p.problem_id:2d}: S1={p.s1:.3f} S2={p.s2:.3f} "
              f"S3={p.s3:.3f} over {p.n_runs} runs")
    if report.problems:
        print(f"avg: S1={report.grand_s1:.3f} S2={report.grand_s2:.3f} "
              f"S3={report.grand_s3:.3f}")
    if failures:
        for fail in failures:
            print(f"FAILED problem {fail.problem_id} run {fail.run_index}: "
                  f"{fail.message}", file=sys.stderr)
        return 3
    return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
