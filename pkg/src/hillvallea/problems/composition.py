"""Composition functions (problems 11-20).

A composition blends n shifted, scaled, rotated basic functions with
Gaussian weights centered at the shift points. Every basic function is
non-negative with minimum 0 at the origin, so the composed objective,
negated for maximization, attains its global maximum of exactly 0 at
each shift point: the shift points are the global optima.

Shift vectors and rotation matrices are never hard-coded; they are read
from a plain-text data file per instance (see `load_composition` for
the format). Defaults ship with the package and can be regenerated with
scripts/generate_composition_data.py.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

BasicFunction = Callable[[np.ndarray], np.ndarray]

BLEND_SCALE = 2000.0


def sphere(z: np.ndarray) -> np.ndarray:
    return (z * z).sum(axis=1)


def grienwank(z: np.ndarray) -> np.ndarray:
    i = np.sqrt(np.arange(1.0, z.shape[1] + 1.0))
    return (z * z).sum(axis=1) / 4000.0 - np.cos(z / i).prod(axis=1) + 1.0


def rastrigin(z: np.ndarray) -> np.ndarray:
    return (z * z - 10.0 * np.cos(2.0 * np.pi * z) + 10.0).sum(axis=1)


_WEIERSTRASS_A = 0.5 ** np.arange(21)
_WEIERSTRASS_B = 3.0 ** np.arange(21)
_WEIERSTRASS_F0 = float((_WEIERSTRASS_A * np.cos(np.pi * _WEIERSTRASS_B)).sum())


def weierstrass(z: np.ndarray) -> np.ndarray:
    inner = _WEIERSTRASS_A * np.cos(2.0 * np.pi * _WEIERSTRASS_B * (z[..., None] + 0.5))
    return inner.sum(axis=(-2, -1)) - z.shape[1] * _WEIERSTRASS_F0


def expanded_griewank_rosenbrock(z: np.ndarray) -> np.ndarray:
    """Griewank-of-Rosenbrock chained over consecutive coordinate pairs,
    wrapping around, shifted so the minimum 0 sits at the origin."""
    u = z + 1.0
    v = np.roll(u, -1, axis=1)
    r = 100.0 * (u * u - v) ** 2 + (1.0 - u) ** 2
    return (r * r / 4000.0 - np.cos(r) + 1.0).sum(axis=1)


@dataclass(frozen=True)
class CompositionFamily:
    """Static recipe for one composition: which basics, scales, spreads."""

    name: str
    sigma: tuple[float, ...]
    lam: tuple[float, ...]
    components: tuple[BasicFunction, ...]
    rotated: bool

    @property
    def n_components(self) -> int:
        return len(self.components)


CF1 = CompositionFamily(
    name="CF1",
    sigma=(1.0,) * 6,
    lam=(1.0, 1.0, 8.0, 8.0, 1.0 / 5.0, 1.0 / 5.0),
    components=(grienwank, grienwank, weierstrass, weierstrass, sphere, sphere),
    rotated=False,
)

CF2 = CompositionFamily(
    name="CF2",
    sigma=(1.0,) * 8,
    lam=(1.0, 1.0, 10.0, 10.0, 1.0 / 10.0, 1.0 / 10.0, 1.0 / 7.0, 1.0 / 7.0),
    components=(rastrigin, rastrigin, weierstrass, weierstrass,
                grienwank, grienwank, sphere, sphere),
    rotated=False,
)

CF3 = CompositionFamily(
    name="CF3",
    sigma=(1.0, 1.0, 2.0, 2.0, 2.0, 2.0),
    lam=(1.0 / 4.0, 1.0 / 10.0, 2.0, 1.0, 2.0, 5.0),
    components=(expanded_griewank_rosenbrock, expanded_griewank_rosenbrock,
                weierstrass, weierstrass, grienwank, grienwank),
    rotated=True,
)

CF4 = CompositionFamily(
    name="CF4",
    sigma=(1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0),
    lam=(4.0, 1.0, 4.0, 1.0, 1.0 / 10.0, 1.0 / 5.0, 1.0 / 10.0, 1.0 / 40.0),
    components=(rastrigin, rastrigin,
                expanded_griewank_rosenbrock, expanded_griewank_rosenbrock,
                weierstrass, weierstrass, grienwank, grienwank),
    rotated=True,
)

FAMILIES = {f.name: f for f in (CF1, CF2, CF3, CF4)}


class CompositionFunction:
    """Callable composition instance bound to concrete shifts/rotations."""

    def __init__(self, family: CompositionFamily, shifts: np.ndarray,
                 rotations: np.ndarray):
        n = family.n_components
        shifts = np.asarray(shifts, dtype=float)
        rotations = np.asarray(rotations, dtype=float)
        d = shifts.shape[1]
        if shifts.shape != (n, d) or rotations.shape != (n, d, d):
            raise ValueError("shift/rotation shapes do not match the family")
        self.family = family
        self.d = d
        self.shifts = shifts
        self.rotations = rotations
        self._sigma_sq2d = 2.0 * d * np.asarray(family.sigma) ** 2
        self._lam = np.asarray(family.lam)
        # Reference magnitude per component, evaluated at a fixed probe
        # point so the blended terms share a common scale.
        probe = np.full(d, 5.0)
        self._fmax = np.empty(n)
        for i, fn in enumerate(family.components):
            zi = (probe / self._lam[i]) @ rotations[i]
            self._fmax[i] = abs(float(fn(zi[None, :])[0]))
        if not np.all(self._fmax > 0.0):
            raise ValueError("degenerate component normalization")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        fam = self.family
        n = fam.n_components
        m = x.shape[0]
        w = np.empty((m, n))
        g = np.empty((m, n))
        for i, fn in enumerate(fam.components):
            diff = x - self.shifts[i]
            w[:, i] = np.exp(-(diff * diff).sum(axis=1) / self._sigma_sq2d[i])
            z = (diff / self._lam[i]) @ self.rotations[i]
            g[:, i] = BLEND_SCALE * fn(z) / self._fmax[i]
        wmax = w.max(axis=1, keepdims=True)
        w = np.where(w == wmax, w, w * (1.0 - wmax ** 10))
        total = w.sum(axis=1, keepdims=True)
        w = np.where(total == 0.0, 1.0 / n, w / np.where(total == 0.0, 1.0, total))
        return -(w * g).sum(axis=1)


def composition_data_filename(family_name: str, d: int) -> str:
    return f"{family_name.lower()}_d{d:02d}.txt"


def load_composition(family: CompositionFamily, d: int,
                     path: Path) -> CompositionFunction:
    """Read one instance's data file: n rows of d shift coordinates,
    then n stacked d-by-d rotation matrices, whitespace-delimited."""
    raw = np.loadtxt(path, dtype=float)
    n = family.n_components
    expected = n + n * d
    raw = np.atleast_2d(raw)
    if raw.shape != (expected, d):
        raise ValueError(
            f"{path}: expected {expected} rows of {d} values "
            f"(got shape {raw.shape})"
        )
    shifts = raw[:n]
    rotations = raw[n:].reshape(n, d, d)
    return CompositionFunction(family, shifts, rotations)


def save_composition_data(path: Path, shifts: np.ndarray,
                          rotations: np.ndarray) -> None:
    rows = np.vstack([shifts, rotations.reshape(-1, shifts.shape[1])])
    np.savetxt(path, rows, fmt="%.17g")
