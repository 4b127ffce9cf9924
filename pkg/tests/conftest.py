"""Shared fixtures and builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from hillvallea.bounds import Bounds
from hillvallea.problems.evaluator import Evaluator, Solution
from hillvallea.problems.suite import Problem


def synthetic_problem(fn, lower, upper, budget=10**9, optima_positions=None,
                      optima_fitness=None, niche_radius=0.01,
                      problem_id=0, name="synthetic") -> Problem:
    """Build a Problem around an arbitrary batch objective for unit tests.

    `fn` maps an (n, d) array to n fitness values (maximization). When no
    optima are given, a single placeholder optimum at the domain center is
    stored so scoring-free tests can still construct the dataclass.
    """
    bounds = Bounds(np.asarray(lower, dtype=float),
                    np.asarray(upper, dtype=float))
    if optima_positions is None:
        optima_positions = ((bounds.lower + bounds.upper) / 2.0)[None, :]
        optima_fitness = fn(optima_positions)
    optima_positions = np.asarray(optima_positions, dtype=float)
    optima_fitness = np.asarray(optima_fitness, dtype=float)
    return Problem(problem_id, name, bounds.d, bounds,
                   len(optima_positions), budget, optima_positions,
                   optima_fitness, niche_radius, fn)


def quadratic_bowl(center) -> callable:
    """Concave single-peak objective f(x) = -|x - center|^2."""
    center = np.asarray(center, dtype=float)

    def fn(xs: np.ndarray) -> np.ndarray:
        return -((xs - center) ** 2).sum(axis=1)

    return fn


def bowl_problem(d=1, budget=10**9, lo=-5.0, hi=5.0) -> Problem:
    center = np.zeros(d)
    return synthetic_problem(quadratic_bowl(center), np.full(d, lo),
                             np.full(d, hi), budget=budget,
                             optima_positions=center[None, :],
                             optima_fitness=np.zeros(1))


def make_solutions(problem: Problem, xs: np.ndarray,
                   start_index: int = 1) -> list[Solution]:
    """Hand-built solutions with genuine fitness and sequential indices,
    without consuming any evaluator budget."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    fs = problem.fn(xs)
    return [Solution(x.copy(), float(f), start_index + i)
            for i, (x, f) in enumerate(zip(xs, fs))]


def sorted_selection(problem: Problem, xs: np.ndarray) -> list[Solution]:
    """Solutions sorted fitness-descending, ready for clustering."""
    sols = make_solutions(problem, xs)
    return sorted(sols, key=lambda s: -s.f)


class RecordingProblem:
    """Wrap a problem so every evaluated point is logged in call order.

    Used to prove that two code paths issue identical evaluation streams
    and to count evaluations consumed behind an evaluator.
    """

    def __init__(self, problem: Problem):
        self.rows: list[np.ndarray] = []
        inner = problem.fn

        def recording_fn(xs: np.ndarray) -> np.ndarray:
            for row in np.atleast_2d(xs):
                self.rows.append(np.array(row, dtype=float))
            return inner(xs)

        import dataclasses
        self.problem = dataclasses.replace(problem, fn=recording_fn)

    @property
    def n_evals(self) -> int:
        return len(self.rows)

    def stream(self) -> np.ndarray:
        if not self.rows:
            return np.empty((0, self.problem.d))
        return np.vstack(self.rows)


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)


def fresh_evaluator(problem: Problem) -> Evaluator:
    return Evaluator(problem)
