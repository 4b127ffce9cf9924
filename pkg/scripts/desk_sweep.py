"""Desk-scale benchmark sweep: 10 runs of the non-composition problems
plus the first two composition problems, printing the S1/S2/S3 table.

Finishes in roughly ten minutes on one core. Pass problem ids to
restrict the sweep, e.g.  python scripts/desk_sweep.py 1 2 3

Usage: python scripts/desk_sweep.py [problem_id ...]
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hillvallea.harness import ExperimentConfig, run_experiment

DEFAULT_PROBLEMS = (1, 2, 3, 4, 5, 6, 7, 10, 11, 12)


def main() -> int:
    problems = (tuple(int(a) for a in sys.argv[1:])
                if len(sys.argv) > 1 else DEFAULT_PROBLEMS)
    cfg = ExperimentConfig(problems=problems, runs=10, seed=0,
                           out_dir=Path("bench-results/desk"))
    report, failures = run_experiment(cfg)
    print(f"{'problem':>7}  {'S1':>6}  {'S2':>6}  {'S3':>6}")
    for p in report.problems:
        print(f"{p.problem_id:>7}  {p.s1:6.4f}  {p.s2:6.4f}  {p.s3:6.4f}")
    print(f"{'avg':>7}  {report.grand_s1:6.4f}  {report.grand_s2:6.4f}  "
          f"{report.grand_s3:6.4f}")
    for fail in failures:
        print(f"FAILED p{fail.problem_id} run {fail.run_index}: "
              f"{fail.message}", file=sys.stderr)
    return 3 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
