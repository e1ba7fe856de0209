"""
Pseudo-spectral solver for the periodic focusing cubic NLS

    q_t = i σ (q_xx + 2 |q|² q),   σ ∈ {1, 1/2}.

`nls_solve` steps internally at dt/2 and keeps every half step, so frame
integrators can use q at t, t + dt/2 and t + dt without interpolating in time.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from spinflow.errors import FixedPointDiverged, NonFinite
from spinflow.spectral import PeriodicGrid

logger = logging.getLogger(__name__)

SCHEMES = ('split_step', 'implicit')


@dataclass(frozen=True, eq=False)
class InvariantField:
    grid: PeriodicGrid
    values: np.ndarray
    t: float = 0.0
    sigma: float = 1.0

    def derivative(self) -> np.ndarray:
        return self.grid.derivative(self.values)

    def tail(self) -> float:
        return self.grid.spectral_tail(self.values)

    def evolved(self, values, dt):
        return InvariantField(self.grid, values, self.t + dt, self.sigma)


@dataclass
class NlsTrajectory:
    """Fields at t0, t0 + dt/2, t0 + dt, ...; index 2n is full step n."""
    fields: list
    dt: float
    scheme: str = 'split_step'
    iterations: list = field(default_factory=list)

    @property
    def grid(self) -> PeriodicGrid:
        return self.fields[0].grid

    @property
    def sigma(self) -> float:
        return self.fields[0].sigma

    @property
    def steps(self) -> int:
        return (len(self.fields) - 1) // 2

    def full_step(self, n) -> InvariantField:
        return self.fields[2 * n]

    def times(self) -> np.ndarray:
        return np.array([f.t for f in self.fields[::2]])

    def values(self, half_steps=False) -> np.ndarray:
        fields = self.fields if half_steps else self.fields[::2]
        return np.stack([f.values for f in fields])


def _dealias_mask(grid: PeriodicGrid):
    return np.abs(grid.wavenumbers) <= grid.n // 3


def _check_finite(q, t):
    if not np.all(np.isfinite(q)):
        raise NonFinite(f"NLS solution became non-finite at t={t:.6g}")


def split_step(q: InvariantField, dt, dealias=False) -> InvariantField:
    """Strang splitting: half nonlinear phase, full linear step in Fourier space, half nonlinear phase."""
    sigma = q.sigma
    k = q.grid.wavenumbers
    v = q.values * np.exp(1j * sigma * np.abs(q.values) ** 2 * dt)
    coeffs = np.fft.fft(v) * np.exp(-1j * sigma * k ** 2 * dt)
    if dealias:
        coeffs = coeffs * _dealias_mask(q.grid)
    v = np.fft.ifft(coeffs)
    v = v * np.exp(1j * sigma * np.abs(v) ** 2 * dt)
    return q.evolved(v, dt)


def implicit_step(q: InvariantField, dt, tol_fp=1e-12, max_iter=50, dealias=False):
    """Crank-Nicolson linear part with the midpoint nonlinear term, solved by fixed-point iteration."""
    sigma = q.sigma
    k2 = q.grid.wavenumbers ** 2
    mask = _dealias_mask(q.grid) if dealias else 1.0
    numer = 1.0 - 0.5j * sigma * k2 * dt
    denom = 1.0 + 0.5j * sigma * k2 * dt
    base = np.fft.fft(q.values) * numer

    current = q.values
    change = np.inf
    for iteration in range(1, max_iter + 1):
        mid = 0.5 * (q.values + current)
        nonlinear = 2j * sigma * np.abs(mid) ** 2 * mid
        updated = np.fft.ifft(mask * (base + dt * np.fft.fft(nonlinear)) / denom)
        change = float(np.max(np.abs(updated - current)))
        current = updated
        if change < tol_fp:
            break
    if change > max(tol_fp, 1e-8):
        raise FixedPointDiverged(f"Fixed-point iteration stopped after {max_iter} iterations with change {change:.3e}")
    return q.evolved(current, dt), iteration


def nls_step(q: InvariantField, dt, scheme='split_step', tol_fp=1e-12, max_iter=50, dealias=False) -> InvariantField:
    if dt <= 0:
        raise ValueError(f"Time step must be positive, got {dt}")
    if scheme == 'split_step':
        out = split_step(q, dt, dealias)
    elif scheme == 'implicit':
        out, _ = implicit_step(q, dt, tol_fp, max_iter, dealias)
    else:
        raise ValueError(f"Unknown NLS scheme '{scheme}'")
    _check_finite(out.values, out.t)
    return out


def nls_solve(q0: InvariantField, T, dt, scheme='split_step', tol_fp=1e-12, max_iter=50, dealias=False) -> NlsTrajectory:
    if T <= 0 or dt <= 0:
        raise ValueError("Final time and time step must be positive")
    steps = int(round(T / dt))
    if abs(steps * dt - T) > 1e-9 * max(1.0, T):
        raise ValueError(f"Time step {dt} does not divide the final time {T}")

    logger.info(f"Solving NLS (sigma={q0.sigma}) with {scheme} on N={q0.grid.n}: {steps} steps of {dt}")
    mass0 = conserved_quantities(q0)[0].real
    fields = [q0]
    iterations = []
    q = q0
    report_every = max(1, steps // 10)
    for n in range(2 * steps):
        if scheme == 'implicit':
            q, count = implicit_step(q, dt / 2, tol_fp, max_iter, dealias)
            iterations.append(count)
            _check_finite(q.values, q.t)
        else:
            q = nls_step(q, dt / 2, scheme, tol_fp, max_iter, dealias)
        fields.append(q)
        if (n + 1) % (2 * report_every) == 0:
            logger.debug(f"NLS step {(n + 1) // 2}/{steps}")

    mass = conserved_quantities(q)[0].real
    drift = abs(mass - mass0) / mass0 if mass0 > 0 else abs(mass)
    logger.info(f"NLS solve done at t={q.t:.6g}; relative H1 drift {drift:.3e}")
    return NlsTrajectory(fields, dt, scheme, iterations)


def conserved_quantities(q: InvariantField):
    """H1 = ∮|q|², H2 = ∮ q̄ q_x, H3 = ∮ |q_x|² - |q|⁴, H4 = ∮ q q̄_x - q̄ q_x (trapezoid on the grid)."""
    grid = q.grid
    v = q.values
    vx = grid.derivative(v)
    h1 = grid.trapezoid(np.abs(v) ** 2)
    h2 = grid.trapezoid(np.conj(v) * vx)
    h3 = grid.trapezoid(np.abs(vx) ** 2 - np.abs(v) ** 4)
    h4 = grid.trapezoid(v * np.conj(vx) - np.conj(v) * vx)
    return complex(h1), complex(h2), complex(h3), complex(h4)


def nls_residual(values, grid: PeriodicGrid, dt, sigma=1.0) -> float:
    """Sup over interior times of |q_t - iσ(q_xx + 2|q|²q)|, central differences in t."""
    values = np.asarray(values)
    if values.shape[0] < 3:
        raise ValueError("Residual needs at least three time levels")
    qt = (values[2:] - values[:-2]) / (2 * dt)
    inner = values[1:-1]
    qxx = grid.derivative(inner, order=2, axis=1)
    rhs = 1j * sigma * (qxx + 2 * np.abs(inner) ** 2 * inner)
    return float(np.max(np.abs(qt - rhs)))
