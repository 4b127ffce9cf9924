"""Competition performance measures.

A solution counts as a distinct global optimum when its fitness is
within epsilon of an optimum's fitness and it lies within the problem's
niche radius of that optimum; each optimum can be claimed once, fittest
solutions first. Peak ratio, success rate, and the static and dynamic
F1 measures are built on that count. Scenario scores: S1 averages the
peak ratio over the five accuracy levels, S2 the static F1, S3 the
dynamic F1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .orchestrator import RunTrace
from .problems.evaluator import Solution
from .problems.suite import InvalidProblemError, Problem

ACCURACY_LEVELS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)


class InvalidTraceError(ValueError):
    """Raised when trace records are not in evaluation order."""


def count_distinct_global(solutions: Sequence[Solution], problem: Problem,
                          eps: float) -> int:
    """Greedy matching, fittest solution first: claim the nearest
    unclaimed optimum whose fitness differs by at most eps and whose
    position is within the niche radius."""
    if len(solutions) == 0:
        return 0
    fs = np.array([s.f for s in solutions])
    xs = np.array([s.x for s in solutions])
    opt_pos = problem.optima_positions
    opt_fit = problem.optima_fitness
    radius_sq = problem.niche_radius ** 2
    claimed = np.zeros(len(opt_fit), dtype=bool)
    g = 0
    for i in np.argsort(-fs, kind="stable"):
        close_fit = np.abs(opt_fit - fs[i]) <= eps
        if not close_fit.any():
            continue
        d2 = ((opt_pos - xs[i]) ** 2).sum(axis=1)
        eligible = close_fit & ~claimed & (d2 <= radius_sq)
        if eligible.any():
            hits = np.flatnonzero(eligible)
            claimed[hits[np.argmin(d2[hits])]] = True
            g += 1
    return g


def peak_ratio(g: int, n_global: int) -> float:
    if n_global < 1:
        raise InvalidProblemError("problem must have at least one global optimum")
    return g / n_global


def success_rate(g: int, n_solutions: int) -> float:
    if n_solutions == 0:
        return 0.0
    return g / n_solutions


def f1(pr: float, sr: float) -> float:
    if pr + sr == 0.0:
        return 0.0
    return 2.0 * pr * sr / (pr + sr)


def _prefix_f1(solutions: list[Solution], problem: Problem,
               eps: float, upto: int) -> float:
    prefix = solutions[:upto]
    g = count_distinct_global(prefix, problem, eps)
    return f1(peak_ratio(g, problem.n_global_optima),
              success_rate(g, len(prefix)))


def dyn_f1(trace: RunTrace, problem: Problem, eps: float) -> float:
    """Time-weighted F1: each obtained solution set is credited for the
    span of evaluations during which it was the current set, the full
    set for the span from its completion to the budget's end. The span
    before the first solution earns nothing."""
    t = len(trace)
    if t == 0:
        return 0.0
    fevals = trace.fevals
    budget = trace.budget
    if np.any(np.diff(fevals) <= 0):
        raise InvalidTraceError("trace records must be strictly feval-ascending")
    if fevals[0] < 1 or fevals[-1] > budget:
        raise InvalidTraceError("trace records must lie within the run budget")
    solutions = [Solution(x, fit, int(fe))
                 for (fe, fit, x) in trace.records]
    total = (budget - fevals[-1]) / budget * _prefix_f1(
        solutions, problem, eps, t)
    for i in range(2, t + 1):
        width = (fevals[i - 1] - fevals[i - 2]) / budget
        total += width * _prefix_f1(solutions, problem, eps, i - 1)
    return float(total)


@dataclass(frozen=True)
class LevelScores:
    eps: float
    g: int
    pr: float
    sr: float
    f1: float
    dyn_f1: float


def score_run(trace: RunTrace, problem: Problem,
              levels: Sequence[float] = ACCURACY_LEVELS) -> list[LevelScores]:
    solutions = [Solution(x, fit, int(fe)) for (fe, fit, x) in trace.records]
    out = []
    for eps in levels:
        g = count_distinct_global(solutions, problem, eps)
        pr = peak_ratio(g, problem.n_global_optima)
        sr = success_rate(g, len(solutions))
        out.append(LevelScores(eps=eps, g=g, pr=pr, sr=sr, f1=f1(pr, sr),
                               dyn_f1=dyn_f1(trace, problem, eps)))
    return out


@dataclass(frozen=True)
class ProblemScores:
    problem_id: int
    n_runs: int
    levels: tuple[float, ...]
    pr: tuple[float, ...]       # per level, averaged over runs
    sr: tuple[float, ...]
    f1: tuple[float, ...]
    dyn_f1: tuple[float, ...]

    @property
    def s1(self) -> float:
        return float(np.mean(self.pr))

    @property
    def s2(self) -> float:
        return float(np.mean(self.f1))

    @property
    def s3(self) -> float:
        return float(np.mean(self.dyn_f1))


@dataclass(frozen=True)
class ScoreReport:
    problems: tuple[ProblemScores, ...]

    @property
    def grand_s1(self) -> float:
        return float(np.mean([p.s1 for p in self.problems]))

    @property
    def grand_s2(self) -> float:
        return float(np.mean([p.s2 for p in self.problems]))

    @property
    def grand_s3(self) -> float:
        return float(np.mean([p.s3 for p in self.problems]))


def aggregate(per_problem: dict[int, list[list[LevelScores]]]) -> ScoreReport:
    """per_problem maps problem id to one list of LevelScores per run."""
    if not per_problem or any(not runs for runs in per_problem.values()):
        raise ValueError("aggregate requires at least one scored run per problem")
    rows = []
    for pid in sorted(per_problem):
        runs = per_problem[pid]
        levels = tuple(ls.eps for ls in runs[0])
        if any(tuple(ls.eps for ls in r) != levels for r in runs):
            raise ValueError(f"problem {pid}: runs scored at differing levels")
        by_level = lambda attr: tuple(
            float(np.mean([getattr(r[k], attr) for r in runs]))
            for k in range(len(levels)))
        rows.append(ProblemScores(
            problem_id=pid, n_runs=len(runs), levels=levels,
            pr=by_level("pr"), sr=by_level("sr"), f1=by_level("f1"),
            dyn_f1=by_level("dyn_f1")))
    return ScoreReport(problems=tuple(rows))
