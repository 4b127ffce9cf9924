"""Full-scale benchmark reproduction: 50 runs of all 20 problems.

This is the long-running target documented in the README (hours of CPU
time; the 10- and 20-dimensional composition problems dominate). Score
tables land in bench-results/full/scores.csv; per-run traces are
skipped to keep the output small. Use --jobs to parallelize across
cores and --xi-scaling to switch how the base population size treats
the problem dimension.

Usage: python scripts/full_table.py [--jobs K] [--xi-scaling with-d|literal]
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hillvallea.cli import main

if __name__ == "__main__":
    raise SystemExit(main([
        "--problems", "1-20",
        "--runs", "50",
        "--seed", "0",
        "--out", "bench-results/full",
        "--no-traces",
        *sys.argv[1:],
    ]))
