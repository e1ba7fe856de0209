"""
Extended frames of an NLS solution and curve reconstruction.

The Lax pair used throughout is

    E^{-1} E_x = a λ + u,
    E^{-1} E_t = σ (a λ² + u λ + Q_{-1}),

with u = [[0, q], [-q̄, 0]] and Q_{-1} = i [[-|q|², q_x], [q̄_x, |q|²]]. For
σ = 1 this is the system whose flatness is the cubic NLS for q.
"""

import logging
from dataclasses import dataclass

import numpy as np

from spinflow.curves import CurveState
from spinflow.errors import Overflow, UnitaryDrift
from spinflow.nls import InvariantField, NlsTrajectory
from spinflow.spectral import PeriodicGrid, interior_derivative
from spinflow.su2 import (
    A, adjoint_vectors, frame_axis, nearest_special_unitary, normalize_det, unitarity_defect,
)

logger = logging.getLogger(__name__)

OVERFLOW_LIMIT = 1e12


@dataclass
class FrameField:
    grid: PeriodicGrid
    frames: np.ndarray
    t: float
    lam: complex
    branch_sign: int = 1
    defect: float = 0.0  # unitarity defect before projection


@dataclass
class ConnectionPair:
    ax: np.ndarray
    at: np.ndarray


def potential(q) -> np.ndarray:
    q = np.asarray(q)
    u = np.zeros(q.shape + (2, 2), dtype=complex)
    u[..., 0, 1] = q
    u[..., 1, 0] = -np.conj(q)
    return u


def q_minus_one(q, qx) -> np.ndarray:
    q, qx = np.asarray(q), np.asarray(qx)
    m = np.empty(q.shape + (2, 2), dtype=complex)
    mod2 = np.abs(q) ** 2
    m[..., 0, 0] = -1j * mod2
    m[..., 1, 1] = 1j * mod2
    m[..., 0, 1] = 1j * qx
    m[..., 1, 0] = 1j * np.conj(qx)
    return m


def x_part(q, lam) -> np.ndarray:
    return lam * A + potential(q)


def t_part(q, qx, lam, sigma=1.0) -> np.ndarray:
    return sigma * (lam ** 2 * A + lam * potential(q) + q_minus_one(q, qx))


def connection(q: InvariantField, lam) -> ConnectionPair:
    qx = q.derivative()
    return ConnectionPair(x_part(q.values, lam), t_part(q.values, qx, lam, q.sigma))


def _flatness_defect(traj: NlsTrajectory, lam, index) -> float:
    fields = traj.fields
    h = traj.dt / 2
    pair = connection(fields[index], lam)
    ax_t = (x_part(fields[index + 1].values, lam) - x_part(fields[index - 1].values, lam)) / (2 * h)
    at_x = traj.grid.derivative(pair.at)
    curvature = ax_t - at_x - (pair.ax @ pair.at - pair.at @ pair.ax)
    return float(np.max(np.abs(curvature)))


def zero_curvature_residual(traj: NlsTrajectory, lam) -> float:
    """Sup of ∂_t A_x - ∂_x A_t - [A_x, A_t] over interior half steps."""
    return max((_flatness_defect(traj, lam, i) for i in range(1, len(traj.fields) - 1)), default=0.0)


def zero_curvature_series(traj: NlsTrajectory, lam, times) -> np.ndarray:
    """Flatness defect at each of `times`; nan at the first and last time level."""
    out = np.full(len(times), np.nan)
    for k, t in enumerate(times):
        index = 2 * int(round((t - traj.fields[0].t) / traj.dt))
        if 0 < index < len(traj.fields) - 1:
            out[k] = _flatness_defect(traj, lam, index)
    return out


def _rk4(y, a1, a2, a3, step):
    k1 = y @ a1
    k2 = (y + step / 2 * k1) @ a2
    k3 = (y + step / 2 * k2) @ a2
    k4 = (y + step * k3) @ a3
    return y + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _t_parts(traj: NlsTrajectory, lam, index):
    field = traj.fields[index]
    return t_part(field.values, field.derivative(), lam, traj.sigma)


def evolve_frame(lift, traj: NlsTrajectory, output_every=1, drift_tol=1e-4) -> list:
    """RK4 in t at every grid point from E(x, 0) = f̃(x) at λ0 = -c0, projected back to SU(2) each step."""
    lam = lift.lam0
    grid = traj.grid
    frames = lift.frame_tilde.copy()
    out = [FrameField(grid, frames.copy(), traj.fields[0].t, lam, lift.branch_sign)]
    worst = 0.0
    current = _t_parts(traj, lam, 0)
    for n in range(traj.steps):
        half = _t_parts(traj, lam, 2 * n + 1)
        end = _t_parts(traj, lam, 2 * n + 2)
        frames = _rk4(frames, current, half, end, traj.dt)
        defect = unitarity_defect(frames)
        if defect > drift_tol:
            raise UnitaryDrift(f"Frame left SU(2) by {defect:.3e} at step {n + 1}; reduce the time step")
        worst = max(worst, defect)
        frames = nearest_special_unitary(frames)
        current = end
        if (n + 1) % output_every == 0 or n + 1 == traj.steps:
            out.append(FrameField(grid, frames.copy(), traj.full_step(n + 1).t, lam, lift.branch_sign, defect))
    logger.info(f"Frame evolution done: {len(out)} frames, worst unitarity defect {worst:.3e}")
    return out


def reconstruct(frame_fields, c0, rotation=None) -> list:
    """γ(x, t) = η(x + 2 c0 t, t) with η = E a E^{-1}, rotated back when the lift rotated the curve."""
    curves = []
    for field in frame_fields:
        eta = frame_axis(field.frames)
        shifted = field.grid.shift(eta, 2 * c0 * field.t)
        if rotation is not None:
            shifted = adjoint_vectors(rotation.inverse().matrix, shifted)
        curve = CurveState.projected(field.grid, shifted, field.t)
        curves.append(curve)
    worst = max(c.deviation for c in curves)
    logger.info(f"Reconstructed {len(curves)} curves; worst sphere deviation before projection {worst:.3e}")
    return curves


def pde_residual_series(curves, periodic=True) -> np.ndarray:
    """
    Sup in x of |γ_t - γ × γ_xx| at each curve, central differences in t; nan
    at the first and last curve.

    γ_xx is spectral for periodic curves; otherwise fourth-order differences
    on the interior samples are used.
    """
    out = np.full(len(curves), np.nan)
    for k in range(1, len(curves) - 1):
        prev, cur, nxt = curves[k - 1], curves[k], curves[k + 1]
        grid = cur.grid
        gamma_t = (nxt.points - prev.points) / (nxt.t - prev.t)
        if periodic:
            gamma, gamma_xx = cur.points, grid.derivative(cur.points, order=2)
        else:
            gamma, gamma_xx = cur.points[2:-2], interior_derivative(cur.points, grid.h, order=2)
            gamma_t = gamma_t[2:-2]
        out[k] = float(np.max(np.linalg.norm(gamma_t - np.cross(gamma, gamma_xx), axis=1)))
    return out


def pde_residual(curves, periodic=True) -> float:
    """Sup over interior frames of `pde_residual_series`."""
    if len(curves) < 3:
        raise ValueError("Residual needs at least three curves")
    return float(np.nanmax(pde_residual_series(curves, periodic)))


def closure_defect(field: FrameField, q: InvariantField) -> float:
    """|E(2π, t) - ε E(0, t)| with E(2π, t) from one RK4 step in x past the last sample."""
    grid = field.grid
    h = grid.h
    ends = grid.shift(q.values, h)
    mids = grid.shift(q.values, h / 2)
    y = field.frames[-1]
    end = _rk4(y, x_part(q.values[-1], field.lam), x_part(mids[-1], field.lam), x_part(ends[-1], field.lam), h)
    return float(np.max(np.abs(end - field.branch_sign * field.frames[0])))


def extended_frames(traj: NlsTrajectory, lam, initial, output_every=1, refine=4) -> list:
    """
    Frames at a fixed (possibly complex) λ: RK4 in t along x = 0, then RK4 in x
    on each output slice with `refine` substeps per grid cell.
    """
    grid = traj.grid
    h = grid.h
    step = h / refine
    seam = np.asarray(initial, dtype=complex).copy()
    seams = [seam.copy()]
    indices = [0]
    for n in range(traj.steps):
        parts = [t_part(traj.fields[i].values[0], traj.fields[i].derivative()[0], lam, traj.sigma)
                 for i in (2 * n, 2 * n + 1, 2 * n + 2)]
        seam = normalize_det(_rk4(seam, *parts, traj.dt))
        if (n + 1) % output_every == 0 or n + 1 == traj.steps:
            seams.append(seam.copy())
            indices.append(2 * n + 2)

    q = np.stack([traj.fields[i].values for i in indices])
    # q at x_j + m h / (2 refine) for m = 0 .. 2 refine
    offsets = [grid.shift(q, m * step / 2, axis=1) for m in range(2 * refine)] + [np.roll(q, -1, axis=1)]
    frames = np.empty((len(indices), grid.n, 2, 2), dtype=complex)
    frames[:, 0] = np.stack(seams)
    for j in range(grid.n - 1):
        y = frames[:, j]
        for s in range(refine):
            parts = [x_part(offsets[m][:, j], lam) for m in (2 * s, 2 * s + 1, 2 * s + 2)]
            y = normalize_det(_rk4(y, *parts, step))
        frames[:, j + 1] = y
    peak = float(np.max(np.abs(frames)))
    if not np.isfinite(peak) or peak > OVERFLOW_LIMIT:
        raise Overflow(f"Frame entries reached {peak:.3e} at λ={lam}; shorten the span for this spectral parameter")
    return [FrameField(grid, frames[k], traj.fields[i].t, lam) for k, i in enumerate(indices)]
