"""Per-cluster core search: univariate-Gaussian estimation of
distribution with adaptive variance scaling.

Each generation samples a diagonal Gaussian, clamps to bounds, shifts a
slice of the samples along the recent mean displacement (anticipated
mean shift), evaluates, and re-estimates the distribution from the
fittest fraction. The distribution multiplier grows when improvements
land more than one estimated standard deviation from the mean and never
drops below one while improvements keep arriving. While the model stays
wider than the initialization floor, stagnation leaves its scale alone
(a wide model may still be straddling several peaks); once narrower,
every stagnant generation shrinks it, driving collapse and termination.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .bounds import Bounds
from .hillvalley import Cluster
from .problems.evaluator import Evaluator, Solution


@dataclass(frozen=True)
class CoreSearchConfig:
    selection_fraction: float = 0.35
    eta_dec: float = 0.9
    delta_ams: float = 2.0
    sdr_threshold: float = 1.0
    c_mult_min: float = 1e-10
    c_mult_max: float = 1e3
    init_stddev_floor: float = 1e-4    # fraction of bound range
    step_stddev_floor: float = 1e-12   # fraction of bound range
    fitness_tol: float = 1e-12
    param_tol: float = 1e-12
    # Smallest relative fitness gain that counts as progress for the
    # stagnation counter and the scaling trigger. Best-so-far tracking
    # still records every gain; this only stops sub-resolution gains
    # from keeping a converged search alive.
    material_gain_rel: float = 1e-9
    # Stagnant generations tolerated at nominal scale once the model has
    # contracted below the initialization floor. Short unlucky streaks
    # during terminal polish cost nothing; sustained stagnation there
    # shrinks the model and frees the remaining budget.
    stagnation_grace: int = 5

    @property
    def eta_inc(self) -> float:
        return 1.0 / self.eta_dec

    @property
    def ams_fraction(self) -> float:
        # Half of the eventual selection receives the anticipated shift.
        return 0.5 * self.selection_fraction

    def nis_limit(self, d: int) -> int:
        return 25 + d


DEFAULT_CORE_CONFIG = CoreSearchConfig()


@dataclass(eq=False)
class CoreSearchState:
    mean: np.ndarray
    stddev: np.ndarray
    c_mult: float
    pop_size: int
    selection_fraction: float
    nis: int
    best: Solution
    prev_mean: np.ndarray
    generation: int
    bounds: Bounds
    terminated: bool = False
    selection_spread: float = np.inf


def guideline_pop_size(d: int) -> int:
    return int(np.ceil(10.0 * np.sqrt(d)))


def init_core_search(cluster: Cluster, pop_size: int, bounds: Bounds,
                     config: CoreSearchConfig = DEFAULT_CORE_CONFIG,
                     ) -> CoreSearchState:
    xs = np.array([m.x for m in cluster.members])
    mean = xs.mean(axis=0)
    if len(xs) > 1:
        stddev = xs.std(axis=0, ddof=1)
    else:
        stddev = np.zeros(bounds.d)
    stddev = np.maximum(stddev, config.init_stddev_floor * bounds.range)
    return CoreSearchState(
        mean=mean, stddev=stddev, c_mult=1.0, pop_size=pop_size,
        selection_fraction=config.selection_fraction, nis=0,
        best=cluster.best_solution, prev_mean=mean.copy(), generation=0,
        bounds=bounds,
    )


def core_search_step(state: CoreSearchState, ev: Evaluator, bounds: Bounds,
                     rng: np.random.Generator,
                     config: CoreSearchConfig = DEFAULT_CORE_CONFIG,
                     ) -> CoreSearchState:
    pop = state.pop_size
    if ev.remaining < pop:
        return dataclasses.replace(state, terminated=True)

    scale = state.c_mult * state.stddev
    xs = state.mean + rng.standard_normal((pop, bounds.d)) * scale
    n_ams = int(config.ams_fraction * pop)
    if state.generation > 0 and n_ams > 0:
        shift = config.delta_ams * state.c_mult * (state.mean - state.prev_mean)
        xs[:n_ams] += shift
    np.clip(xs, bounds.lower, bounds.upper, out=xs)

    base_index = ev.evals_used
    fs = ev.evaluate_batch(xs)

    # The tracked best joins the candidate set (elitism of one), so the
    # model stays anchored to the basin it has already reached even when
    # a generation of fresh samples scatters. Stable sort puts fresh
    # samples ahead of the elite on fitness ties.
    cand_x = np.vstack([xs, state.best.x[None, :]])
    cand_f = np.append(fs, state.best.f)

    n_sel = max(1, int(np.ceil(state.selection_fraction * pop)))
    order = np.argsort(-cand_f, kind="stable")
    sel = order[:n_sel]
    spread = float(cand_f[sel[0]] - cand_f[sel[-1]])

    gen_best = int(np.argmax(fs))
    if fs[gen_best] > state.best.f:
        best = Solution(xs[gen_best].copy(), float(fs[gen_best]),
                        base_index + gen_best + 1)
    else:
        best = state.best

    gain_floor = config.material_gain_rel * max(1.0, abs(state.best.f))
    if fs[gen_best] > state.best.f + gain_floor:
        improved_sel = sel[cand_f[sel] > state.best.f]
        avg_improvement = cand_x[improved_sel].mean(axis=0)
        # Improvement displacement measured in unmultiplied standard
        # deviations: an inflated model still registers far-flung
        # improvements as "beyond one deviation" and keeps growing.
        sdr = float(np.abs((avg_improvement - state.mean) / state.stddev).max())
        c_mult = max(state.c_mult, 1.0)
        if sdr > config.sdr_threshold:
            c_mult *= config.eta_inc
        nis = 0
    else:
        nis = state.nis + 1
        c_mult = state.c_mult
        # A model still wider than the initialization floor may be
        # straddling several peaks, so stagnation leaves its nominal
        # scale alone; once narrower than any freshly initialized model
        # it is in terminal polish, where only a short streak is
        # tolerated before every stagnant generation shrinks it.
        wide = bool(np.any(c_mult * state.stddev
                           >= config.init_stddev_floor * bounds.range))
        hold = wide or nis <= config.stagnation_grace
        if c_mult > 1.0 or not hold:
            c_mult *= config.eta_dec
        if hold and c_mult < 1.0:
            c_mult = 1.0
    c_mult = float(np.clip(c_mult, config.c_mult_min, config.c_mult_max))

    new_mean = cand_x[sel].mean(axis=0)
    if n_sel > 1:
        new_stddev = cand_x[sel].std(axis=0, ddof=1)
    else:
        new_stddev = np.zeros(bounds.d)
    new_stddev = np.maximum(new_stddev, config.step_stddev_floor * bounds.range)

    return dataclasses.replace(
        state, mean=new_mean, stddev=new_stddev, c_mult=c_mult, nis=nis,
        best=best, prev_mean=state.mean, generation=state.generation + 1,
        selection_spread=spread,
    )


def core_search_terminated(state: CoreSearchState,
                           fitness_tol: float = DEFAULT_CORE_CONFIG.fitness_tol,
                           param_tol: float = DEFAULT_CORE_CONFIG.param_tol,
                           ) -> bool:
    if state.terminated:
        return True
    if state.nis > DEFAULT_CORE_CONFIG.nis_limit(state.bounds.d):
        return True
    if np.all(state.c_mult * state.stddev < param_tol * state.bounds.range):
        return True
    return state.selection_spread < fitness_tol
