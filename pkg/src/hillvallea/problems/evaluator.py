"""Budget-gated fitness evaluation.

Every fitness lookup in a run flows through one Evaluator, which owns
the evaluation counter used both for budget enforcement and for the
acceptance timestamps of the dynamic score. Counters are strictly
sequential; batch evaluation assigns consecutive indices in row order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .suite import Problem


class BudgetExhaustedError(RuntimeError):
    """Raised when an evaluation would exceed the problem budget."""


class OutOfBoundsError(ValueError):
    """Raised when a point violates the problem's box constraints."""


@dataclass(eq=False)
class Solution:
    x: np.ndarray
    f: float
    eval_index: int


class Evaluator:
    """Single-owner mutable evaluation gateway for one run."""

    def __init__(self, problem: "Problem"):
        self.problem = problem
        self.evals_used = 0
        self.best_seen: Solution | None = None
        self._fn = problem.fn
        self._lower = problem.bounds.lower
        self._upper = problem.bounds.upper

    @property
    def remaining(self) -> int:
        return self.problem.budget - self.evals_used

    def evaluate(self, x: np.ndarray) -> float:
        if self.evals_used >= self.problem.budget:
            raise BudgetExhaustedError(
                f"budget of {self.problem.budget} evaluations exhausted")
        if np.any(x < self._lower) or np.any(x > self._upper):
            raise OutOfBoundsError(f"point {x!r} outside problem bounds")
        f = float(self._fn(np.asarray(x, dtype=float)[None, :])[0])
        self.evals_used += 1
        if self.best_seen is None or f > self.best_seen.f:
            self.best_seen = Solution(np.array(x, dtype=float), f, self.evals_used)
        return f

    def evaluate_batch(self, xs: np.ndarray) -> np.ndarray:
        """Evaluate all rows of xs, or none: raises the budget signal
        without consuming anything when fewer than len(xs) evaluations
        remain, so callers never see a partially timestamped batch."""
        xs = np.asarray(xs, dtype=float)
        n = xs.shape[0]
        if n == 0:
            return np.empty(0)
        if self.remaining < n:
            raise BudgetExhaustedError(
                f"{n} evaluations requested, {self.remaining} remaining")
        if np.any(xs < self._lower) or np.any(xs > self._upper):
            raise OutOfBoundsError("batch contains out-of-bounds points")
        fs = self._fn(xs)
        base = self.evals_used
        self.evals_used += n
        i = int(np.argmax(fs))
        if self.best_seen is None or fs[i] > self.best_seen.f:
            self.best_seen = Solution(xs[i].copy(), float(fs[i]), base + i + 1)
        return fs


def remaining_budget(ev: Evaluator) -> int:
    return ev.remaining
