"""Global-optimum databases for the closed-form problems (ids 1-10).

Positions are either exact by construction (trap endpoints, sine peaks,
cosine grids) or polished numerically from analytic seeds (root finding
on the gradient, bounded scalar minimization). Stored fitness is always
the objective evaluated at the stored position, so evaluating a stored
optimum reproduces its stored fitness exactly.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.optimize import fsolve, minimize_scalar

from . import functions


def _sorted_rows(points: np.ndarray) -> np.ndarray:
    order = np.lexsort(points.T[::-1])
    return points[order]


def _five_uneven_peak_trap_optima() -> np.ndarray:
    return np.array([[0.0], [30.0]])


def _equal_maxima_optima() -> np.ndarray:
    return np.array([[0.1], [0.3], [0.5], [0.7], [0.9]])


def _uneven_decreasing_maxima_optima() -> np.ndarray:
    res = minimize_scalar(
        lambda t: -functions.uneven_decreasing_maxima(np.array([[t]]))[0],
        bounds=(0.05, 0.12), method="bounded",
        options={"xatol": 1e-13},
    )
    return np.array([[res.x]])


def _himmelblau_optima() -> np.ndarray:
    def grad(p: np.ndarray) -> list[float]:
        x, y = p
        u = x * x + y - 11.0
        v = x + y * y - 7.0
        return [4.0 * x * u + 2.0 * v, 2.0 * u + 4.0 * y * v]

    seeds = [(3.0, 2.0), (-2.8, 3.1), (-3.78, -3.28), (3.58, -1.85)]
    roots = [fsolve(grad, seed, xtol=1e-13) for seed in seeds]
    return _sorted_rows(np.array(roots))


def _six_hump_camel_back_optima() -> np.ndarray:
    def grad(p: np.ndarray) -> list[float]:
        x, y = p
        return [8.0 * x - 8.4 * x ** 3 + 2.0 * x ** 5 + y,
                x - 8.0 * y + 16.0 * y ** 3]

    roots = [fsolve(grad, seed, xtol=1e-13)
             for seed in [(0.09, -0.71), (-0.09, 0.71)]]
    return _sorted_rows(np.array(roots))


def _shubert_factor(y: np.ndarray) -> np.ndarray:
    j = np.arange(1.0, 6.0)
    return (j * np.cos((j + 1.0) * np.asarray(y)[..., None] + j)).sum(axis=-1)


def _shubert_factor_extrema() -> tuple[np.ndarray, np.ndarray]:
    """Locations of the three lowest minima and three highest maxima of
    the one-dimensional factor on [-10, 10], polished to ~1e-12."""
    grid = np.linspace(-10.0, 10.0, 20001)
    vals = _shubert_factor(grid)

    def polish(sign: float) -> np.ndarray:
        v = sign * vals
        interior = (v[1:-1] < v[:-2]) & (v[1:-1] < v[2:])
        locs = []
        for i in np.flatnonzero(interior) + 1:
            res = minimize_scalar(
                lambda t: float(sign * _shubert_factor(t)),
                bounds=(grid[i - 1], grid[i + 1]), method="bounded",
                options={"xatol": 1e-13},
            )
            locs.append((res.fun, res.x))
        best = min(f for f, _ in locs)
        xs = np.array(sorted(x for f, x in locs if f - best < 1e-6))
        if len(xs) != 3:
            raise RuntimeError(f"expected 3 extrema copies, found {len(xs)}")
        return xs

    return polish(1.0), polish(-1.0)


def _shubert_optima(d: int) -> np.ndarray:
    mins, maxs = _shubert_factor_extrema()
    points = []
    # The product of factors is most negative with exactly one factor at
    # a minimum of the 1-D factor and the rest at maxima.
    for neg_axis in range(d):
        choices = [maxs] * d
        choices[neg_axis] = mins
        mesh = np.meshgrid(*choices, indexing="ij")
        points.append(np.stack([m.ravel() for m in mesh], axis=1))
    return _sorted_rows(np.vstack(points))


def _vincent_optima(d: int) -> np.ndarray:
    peaks = np.exp((np.pi / 2.0 + 2.0 * np.pi * np.arange(-2, 4)) / 10.0)
    mesh = np.meshgrid(*([peaks] * d), indexing="ij")
    return _sorted_rows(np.stack([m.ravel() for m in mesh], axis=1))


def _modified_rastrigin_optima() -> np.ndarray:
    axes = [(2.0 * np.arange(k) + 1.0) / (2.0 * k)
            for k in functions._MOD_RASTRIGIN_K]
    mesh = np.meshgrid(*axes, indexing="ij")
    return _sorted_rows(np.stack([m.ravel() for m in mesh], axis=1))


_BUILDERS = {
    1: (functions.five_uneven_peak_trap, _five_uneven_peak_trap_optima),
    2: (functions.equal_maxima, _equal_maxima_optima),
    3: (functions.uneven_decreasing_maxima, _uneven_decreasing_maxima_optima),
    4: (functions.himmelblau, _himmelblau_optima),
    5: (functions.six_hump_camel_back, _six_hump_camel_back_optima),
    6: (functions.shubert, lambda: _shubert_optima(2)),
    7: (functions.vincent, lambda: _vincent_optima(2)),
    8: (functions.shubert, lambda: _shubert_optima(3)),
    9: (functions.vincent, lambda: _vincent_optima(3)),
    10: (functions.modified_rastrigin, _modified_rastrigin_optima),
}


@lru_cache(maxsize=None)
def closed_form_optima(problem_id: int) -> tuple[np.ndarray, np.ndarray]:
    """(positions, fitness) of all global optima for problems 1-10."""
    fn, builder = _BUILDERS[problem_id]
    positions = builder()
    fitness = fn(positions)
    positions.setflags(write=False)
    fitness.setflags(write=False)
    return positions, fitness
