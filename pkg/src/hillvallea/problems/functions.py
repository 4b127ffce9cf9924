"""Closed-form objectives of the niching benchmark suite (problems 1-10).

All functions are maximization objectives. Each takes an array of shape
(n, d) and returns the n fitness values. Source functions that are
conventionally minimized (six-hump camel back, Shubert, modified
Rastrigin) are negated here once and for all.
"""

from __future__ import annotations

import numpy as np

_TRAP_BREAKS = (2.5, 5.0, 7.5, 12.5, 17.5, 22.5, 27.5)


def five_uneven_peak_trap(x: np.ndarray) -> np.ndarray:
    """Piecewise-linear trap on [0, 30] with peaks of 200 at both ends."""
    t = x[:, 0]
    conds = [
        t < 2.5,
        t < 5.0,
        t < 7.5,
        t < 12.5,
        t < 17.5,
        t < 22.5,
        t < 27.5,
    ]
    vals = [
        80.0 * (2.5 - t),
        64.0 * (t - 2.5),
        64.0 * (7.5 - t),
        28.0 * (t - 7.5),
        28.0 * (17.5 - t),
        32.0 * (t - 17.5),
        32.0 * (27.5 - t),
    ]
    return np.select(conds, vals, default=80.0 * (t - 27.5))


def equal_maxima(x: np.ndarray) -> np.ndarray:
    """Five equal peaks of height 1 at x = 0.1, 0.3, 0.5, 0.7, 0.9."""
    return np.sin(5.0 * np.pi * x[:, 0]) ** 6


def uneven_decreasing_maxima(x: np.ndarray) -> np.ndarray:
    """Five unevenly spaced peaks under a decaying envelope; one global."""
    t = x[:, 0]
    env = np.exp(-2.0 * np.log(2.0) * ((t - 0.08) / 0.854) ** 2)
    return env * np.sin(5.0 * np.pi * (t ** 0.75 - 0.05)) ** 6


def himmelblau(x: np.ndarray) -> np.ndarray:
    """Himmelblau rescaled to maximization; four peaks of exactly 200."""
    a = x[:, 0] ** 2 + x[:, 1] - 11.0
    b = x[:, 0] + x[:, 1] ** 2 - 7.0
    return 200.0 - a * a - b * b


def six_hump_camel_back(x: np.ndarray) -> np.ndarray:
    """Negated six-hump camel back; two global peaks of ~1.0316."""
    u = x[:, 0]
    v = x[:, 1]
    u2 = u * u
    v2 = v * v
    return -((4.0 - 2.1 * u2 + u2 * u2 / 3.0) * u2 + u * v + (4.0 * v2 - 4.0) * v2)


def shubert(x: np.ndarray) -> np.ndarray:
    """Negated Shubert function; n*3^n global peaks on [-10, 10]^n."""
    j = np.arange(1.0, 6.0)
    # Sum_j j*cos((j+1)*x + j), per coordinate, then product over coordinates.
    terms = j * np.cos((j + 1.0) * x[..., None] + j)
    return -np.prod(terms.sum(axis=-1), axis=-1)


def vincent(x: np.ndarray) -> np.ndarray:
    """Mean of sin(10 ln x_i); 6^d equal global peaks on [0.25, 10]^d."""
    return np.sin(10.0 * np.log(x)).mean(axis=1)


_MOD_RASTRIGIN_K = np.array([3.0, 4.0])


def modified_rastrigin(x: np.ndarray) -> np.ndarray:
    """Negated modified Rastrigin (d=2, k=(3,4)); 12 global peaks of -2."""
    return -(10.0 + 9.0 * np.cos(2.0 * np.pi * _MOD_RASTRIGIN_K * x)).sum(axis=1)
