"""
Sampled closed curves and the library of closed-form initial data.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from spinflow.errors import NotClosed, OffSphere
from spinflow.spectral import PeriodicGrid
from spinflow.su2 import SpherePoint

SPHERE_TOL = 1e-12


@dataclass
class CurveState:
    grid: PeriodicGrid
    points: np.ndarray
    t: float = 0.0
    deviation: float = 0.0  # largest | |γ| - 1 | seen before projection

    def __len__(self):
        return self.grid.n

    def point(self, j) -> SpherePoint:
        return SpherePoint.from_array(self.points[j])

    def sphere_deviation(self) -> float:
        return float(np.max(np.abs(np.linalg.norm(self.points, axis=1) - 1.0)))

    def tail(self) -> float:
        return self.grid.spectral_tail(self.points)

    def validate(self, tail_threshold=1e-8, sphere_tol=SPHERE_TOL):
        dev = self.sphere_deviation()
        if dev > sphere_tol:
            raise OffSphere(f"Curve leaves the unit sphere by {dev:.3e}")
        tail = self.tail()
        if tail > tail_threshold:
            raise NotClosed(f"Spectral tail {tail:.3e} exceeds {tail_threshold:.1e}; samples are not a smooth closed curve")
        return self

    @classmethod
    def projected(cls, grid, points, t=0.0):
        """Renormalize samples onto S², recording the deviation removed."""
        points = np.asarray(points, dtype=float)
        norms = np.linalg.norm(points, axis=1)
        return cls(grid, points / norms[:, None], t, float(np.max(np.abs(norms - 1.0))))


@dataclass(frozen=True)
class CurveLibraryEntry:
    name: str
    formula: Callable[[np.ndarray], np.ndarray]
    on_sphere: bool = True

    def sample(self, grid: PeriodicGrid) -> np.ndarray:
        return self.formula(grid.x)


def _great_circle(x):
    return np.stack([np.zeros_like(x), np.cos(x), np.sin(x)], axis=1)


def _fixed_point(x):
    return np.stack([np.ones_like(x), np.zeros_like(x), np.zeros_like(x)], axis=1)


def _viviani(x):
    return np.stack([np.sin(x) * np.cos(x), np.sin(x), np.cos(x) ** 2], axis=1)


def _spherical_sinusoid(x):
    scale = np.sqrt(1.0 + np.cos(2 * x) ** 2)
    return np.stack([np.cos(x), np.sin(x), np.cos(2 * x)], axis=1) / scale[:, None]


def _smoke_ring(x):
    return np.stack([np.cos(x), np.sin(x), np.cos(x)], axis=1)


def _planar_circle(x):
    return np.stack([np.cos(x), np.sin(x), np.zeros_like(x)], axis=1)


LIBRARY = {
    entry.name: entry for entry in [
        CurveLibraryEntry('great_circle', _great_circle),
        CurveLibraryEntry('fixed_point', _fixed_point),
        CurveLibraryEntry('viviani', _viviani),
        CurveLibraryEntry('spherical_sinusoid', _spherical_sinusoid),
        CurveLibraryEntry('smoke_ring', _smoke_ring, on_sphere=False),
        CurveLibraryEntry('planar_circle', _planar_circle, on_sphere=False),
    ]
}

SPHERE_CURVES = [name for name, entry in LIBRARY.items() if entry.on_sphere]
FILAMENT_SEEDS = [name for name, entry in LIBRARY.items() if not entry.on_sphere]


def library_curve(name, grid: PeriodicGrid) -> CurveState:
    try:
        entry = LIBRARY[name]
    except KeyError:
        raise KeyError(f"Unknown library curve '{name}'; choose one of {sorted(LIBRARY)}") from None
    if not entry.on_sphere:
        raise ValueError(f"Library curve '{name}' is a filament seed, not a curve on S²")
    return CurveState(grid, entry.sample(grid))


def great_circle_exact(x, t):
    """Stationary exact solution γ(x, t) = (0, cos x, sin x)."""
    return _great_circle(np.asarray(x, dtype=float))


def library_filament(name, grid: PeriodicGrid) -> np.ndarray:
    """Samples of a filament seed in R³; not yet arclength-parametrized."""
    try:
        entry = LIBRARY[name]
    except KeyError:
        raise KeyError(f"Unknown library curve '{name}'; choose one of {sorted(LIBRARY)}") from None
    if entry.on_sphere:
        raise ValueError(f"Library curve '{name}' lies on S²; filament seeds are {FILAMENT_SEEDS}")
    return entry.sample(grid)
