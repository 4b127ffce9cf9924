"""The outer optimization loop.

Repeats until the evaluation budget runs out: sample an initial
population (biased away from the previous restart's known basins),
select the fittest fraction, cluster it into niches, run one core
search per cluster in descending best-fitness order, and feed each
terminated search's best solution to the elite archive. Population size
doubles and the cluster-size factor grows by 1.1x per restart.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .amalgam import (DEFAULT_CORE_CONFIG, CoreSearchConfig,
                      core_search_step, core_search_terminated,
                      guideline_pop_size, init_core_search)
from .bounds import Bounds
from .hillvalley import (expected_edge_length, hill_valley_clustering,
                         hill_valley_test, n_test_points)
from .problems.evaluator import (BudgetExhaustedError, Evaluator, Solution)
from .problems.suite import Problem
from .sampling import EMPTY_HISTORY, LabeledHistory, sample_initial_population

XI_SCALING_MODES = ("with-d", "literal")

SELECTION_FRACTION = 0.35

ELITE_PRUNE_TOL = 1e-5

# Candidates closer to their nearest elite than this fraction of the
# domain diagonal merge without a hill-valley test: at that separation
# the segment's fitness differences sit at double-precision noise, so
# the test's strict comparison fires on rounding error, not on a valley.
DUPLICATE_DISTANCE_FRACTION = 1e-5


@dataclass(frozen=True)
class RestartParams:
    n: int
    n_inc: float
    n_c: float
    n_c_inc: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("initial population size must be at least 2")
        if self.n_inc <= 1.0:
            raise ValueError("population multiplier must exceed 1")
        if self.n_c <= 0.0:
            raise ValueError("cluster-size factor must be positive")
        if self.n_c_inc < 1.0:
            raise ValueError("cluster-size multiplier must be at least 1")


DEFAULT_XI = RestartParams(n=2 ** 6, n_inc=2.0, n_c=0.8, n_c_inc=1.1)


def restart_update(p: RestartParams) -> RestartParams:
    return dataclasses.replace(p, n=int(round(p.n * p.n_inc)),
                               n_c=p.n_c * p.n_c_inc)


def initial_restart_params(p: RestartParams, d: int,
                           xi_scaling: str = "with-d") -> RestartParams:
    """Resolve the configured base population size against the problem
    dimension: 'with-d' multiplies by d, 'literal' uses it as given."""
    if xi_scaling not in XI_SCALING_MODES:
        raise ValueError(f"unknown scaling mode {xi_scaling!r}")
    if xi_scaling == "with-d":
        return dataclasses.replace(p, n=p.n * d)
    return p


def cluster_pop_size(p: RestartParams, d: int) -> int:
    return max(2, int(np.ceil(p.n_c * guideline_pop_size(d))))


@dataclass(eq=False)
class EliteArchive:
    elites: list[Solution] = field(default_factory=list)
    accept_feval: list[int] = field(default_factory=list)
    unverified: list[Solution] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.elites)

    def best_fitness(self) -> float:
        return max(e.f for e in self.elites) if self.elites else -np.inf


def update_elite_archive(archive: EliteArchive, candidate: Solution,
                         ev: Evaluator, bounds: Bounds) -> EliteArchive:
    """Merge a terminated core search's best into the archive. The
    candidate is hill-valley tested against its nearest elite only:
    same niche keeps the fitter of the two, different niche appends."""
    if not archive.elites:
        archive.elites.append(candidate)
        archive.accept_feval.append(ev.evals_used)
        return archive

    positions = np.array([e.x for e in archive.elites])
    d2 = ((positions - candidate.x) ** 2).sum(axis=1)
    nearest = int(np.argmin(d2))
    dist = float(np.sqrt(d2[nearest]))
    if dist <= DUPLICATE_DISTANCE_FRACTION * float(np.linalg.norm(bounds.range)):
        same_niche = True
    else:
        eel = expected_edge_length(len(archive.elites) + 1, bounds)
        n_t = n_test_points(dist, eel)
        try:
            same_niche = hill_valley_test(ev, candidate,
                                          archive.elites[nearest], n_t)
        except BudgetExhaustedError:
            archive.unverified.append(candidate)
            return archive

    if not same_niche:
        archive.elites.append(candidate)
        archive.accept_feval.append(ev.evals_used)
    elif candidate.f > archive.elites[nearest].f:
        archive.elites[nearest] = candidate
        archive.accept_feval[nearest] = candidate.eval_index
        order = np.argsort(archive.accept_feval, kind="stable")
        archive.elites = [archive.elites[k] for k in order]
        archive.accept_feval = [archive.accept_feval[k] for k in order]
    return archive


def prune_archive(archive: EliteArchive, tol: float) -> EliteArchive:
    """Drop elites more than tol below the archive's best fitness, in
    place. Keeps acceptance order."""
    if archive.elites:
        cutoff = archive.best_fitness() - tol
        kept = [k for k, e in enumerate(archive.elites) if e.f >= cutoff]
        archive.elites = [archive.elites[k] for k in kept]
        archive.accept_feval = [archive.accept_feval[k] for k in kept]
    return archive


@dataclass(eq=False)
class RunTrace:
    """(feval_index, fitness, position) per accepted elite, in
    acceptance order, plus the run's budget and seed."""

    records: list[tuple[int, float, np.ndarray]]
    budget: int
    seed: int

    @property
    def fevals(self) -> np.ndarray:
        return np.array([r[0] for r in self.records], dtype=int)

    @property
    def fitness(self) -> np.ndarray:
        return np.array([r[1] for r in self.records])

    @property
    def positions(self) -> np.ndarray:
        return np.array([r[2] for r in self.records])

    def __len__(self) -> int:
        return len(self.records)


def run(problem: Problem, p0: RestartParams = DEFAULT_XI, seed: int = 0,
        *, xi_scaling: str = "with-d",
        selection_fraction: float = SELECTION_FRACTION,
        core_config: CoreSearchConfig = DEFAULT_CORE_CONFIG,
        prune_tol: float | None = ELITE_PRUNE_TOL,
        ) -> tuple[EliteArchive, RunTrace]:
    rng = np.random.default_rng(seed)
    ev = Evaluator(problem)
    bounds = problem.bounds
    archive = EliteArchive()
    history = EMPTY_HISTORY
    p = initial_restart_params(p0, problem.d, xi_scaling)

    while ev.remaining >= p.n:
        xs = sample_initial_population(p.n, bounds, history, rng)
        base_index = ev.evals_used
        fs = ev.evaluate_batch(xs)

        n_sel = int(np.ceil(selection_fraction * p.n))
        order = np.argsort(-fs, kind="stable")[:n_sel]
        selection = [Solution(xs[j], float(fs[j]), base_index + int(j) + 1)
                     for j in order]
        clusters = hill_valley_clustering(selection, ev, bounds)

        label_of = {}
        for ci, cluster in enumerate(clusters):
            for member in cluster.members:
                label_of[id(member)] = ci
        history = LabeledHistory(
            np.array([s.x for s in selection]),
            np.array([label_of[id(s)] for s in selection], dtype=int))

        pop_size = cluster_pop_size(p, problem.d)
        for cluster in sorted(clusters, key=lambda c: -c.best_solution.f):
            if ev.remaining == 0:
                break
            state = init_core_search(cluster, pop_size, bounds, core_config)
            while not core_search_terminated(state, core_config.fitness_tol,
                                             core_config.param_tol):
                state = core_search_step(state, ev, bounds, rng, core_config)
            update_elite_archive(archive, state.best, ev, bounds)
        p = restart_update(p)

    if prune_tol is not None:
        prune_archive(archive, prune_tol)
    trace = RunTrace(
        [(t, e.f, e.x) for t, e in zip(archive.accept_feval, archive.elites)],
        problem.budget, seed)
    return archive, trace
