"""
Vortex filament equation α_t = α_x × α_xx.

Two reconstruction routes are provided. `filament_from_flow` integrates a
Schrödinger-flow curve γ = α_x in x. `hframe_lift` and `sym_reconstruct` go
the other way round: a closed arclength filament is lifted to a periodic
h-frame and NLS invariant, and the evolved filament is read off the
λ-derivative of the extended frame.
"""

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.transform import Rotation

from spinflow.errors import (
    ArclengthDriftWarning, DegenerateSpeed, DerivativeNoise, FrameDegenerate, NonClosedWarning, NotClosed,
)
from spinflow.frames import extended_frames
from spinflow.nls import InvariantField
from spinflow.spectral import PeriodicGrid, resample_periodic
from spinflow.su2 import algebra_vectors, rotation_to_group, skew_part

logger = logging.getLogger(__name__)

MEAN_TOL = 1e-8
ARCLENGTH_TOL = 1e-6
NEWTON_TOL = 1e-14


@dataclass
class FilamentState:
    """
    Sampled filament α(x_j, t) in R³.

    Filaments built from a curve with nonzero mean grow linearly in x; `slope`
    holds that linear rate so derivatives act on the periodic remainder only.
    `scale` is the factor that maps the 2π-length working copy back to the
    original length.
    """
    grid: PeriodicGrid
    points: np.ndarray
    t: float = 0.0
    arclength: bool = False
    slope: np.ndarray = field(default_factory=lambda: np.zeros(3))
    scale: float = 1.0

    def _periodic(self):
        return self.points - self.grid.x[:, None] * self.slope

    def tangent(self) -> np.ndarray:
        return self.grid.derivative(self._periodic()) + self.slope

    def second_derivative(self) -> np.ndarray:
        return self.grid.derivative(self._periodic(), order=2)

    def speed(self) -> np.ndarray:
        return np.linalg.norm(self.tangent(), axis=1)

    def arclength_defect(self) -> float:
        return float(np.max(np.abs(self.speed() - 1.0)))

    def closure_gap(self) -> float:
        return float(2 * np.pi * np.linalg.norm(self.slope))

    def tail(self) -> float:
        return self.grid.spectral_tail(self._periodic())

    def centroid(self) -> np.ndarray:
        return np.mean(self.points, axis=0)

    def rescaled(self):
        """Copy in the original length and time units."""
        return FilamentState(
            self.grid, self.points * self.scale, self.t * self.scale ** 2, False, self.slope * self.scale, 1.0,
        )


@dataclass
class HFrame:
    grid: PeriodicGrid
    tangent: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    omega: np.ndarray
    c0: float
    zeta1: np.ndarray
    zeta2: np.ndarray

    def orthonormality_defect(self) -> float:
        frame = np.stack([self.tangent, self.n1, self.n2], axis=2)
        gram = np.swapaxes(frame, 1, 2) @ frame
        return float(np.max(np.abs(gram - np.eye(3))))

    def rotations(self) -> np.ndarray:
        """Rotation matrices with columns (e0, n1, n2)."""
        return np.stack([self.tangent, self.n1, self.n2], axis=2)


def filament_from_flow(curves) -> list:
    """α = ∫_0^x γ + c(t) with c(0) = 0 and c'(t) = γ × γ_x at x = 0."""
    if not curves:
        return []
    grid = curves[0].grid
    drifts = []
    filaments = []
    warned = False
    for curve in curves:
        gamma = curve.points
        gamma_x = grid.derivative(gamma)
        drifts.append(np.cross(gamma[0], gamma_x[0]))
        slope = np.mean(gamma, axis=0)
        if not warned and np.linalg.norm(slope) > MEAN_TOL:
            warnings.warn(
                f"Curve has mean {np.linalg.norm(slope):.3e}; the filament is not periodic in x",
                NonClosedWarning,
            )
            warned = True
        filaments.append(FilamentState(grid, grid.antiderivative(gamma), curve.t, True, slope))

    times = np.array([c.t for c in curves])
    drifts = np.array(drifts)
    offset = np.zeros(3)
    for k, filament in enumerate(filaments):
        if k:
            offset = offset + 0.5 * (times[k] - times[k - 1]) * (drifts[k] + drifts[k - 1])
        filament.points = filament.points + offset
    logger.info(f"Integrated {len(filaments)} filaments from the curve flow; translation at end {offset}")
    return filaments


def max_arclength_defect(filaments) -> float:
    return max((f.arclength_defect() for f in filaments), default=0.0)


def vfe_residual(filaments) -> float:
    """Sup over interior times of |α_t - α_x × α_xx|, central differences in t."""
    if len(filaments) < 3:
        raise ValueError("Residual needs at least three filaments")
    worst = 0.0
    for prev, cur, nxt in zip(filaments, filaments[1:], filaments[2:]):
        alpha_t = (nxt.points - prev.points) / (nxt.t - prev.t)
        binormal = np.cross(cur.tangent(), cur.second_derivative())
        worst = max(worst, float(np.max(np.linalg.norm(alpha_t - binormal, axis=1))))
    return worst


def arclength_reparametrize(points, grid: PeriodicGrid = None) -> FilamentState:
    """Resample a closed curve at equal arclength and rescale it to length 2π."""
    points = np.asarray(points, dtype=float)
    grid = grid or PeriodicGrid(points.shape[0])
    speed = np.linalg.norm(grid.derivative(points), axis=1)
    if np.min(speed) < 1e-8:
        raise DegenerateSpeed(f"Curve speed drops to {np.min(speed):.3e}; not a regular curve")

    length_rate = float(np.mean(speed))
    length = 2 * np.pi * length_rate
    cumulative = grid.antiderivative(speed) - length_rate * grid.x

    targets = grid.x * length_rate
    params = grid.x.copy()
    for _ in range(50):
        residual = grid.interpolate(cumulative, params) + length_rate * params - targets
        step = residual / grid.interpolate(speed, params)
        params = params - step
        if np.max(np.abs(step)) < NEWTON_TOL:
            break

    resampled = grid.interpolate(points, params)
    scale = length / (2 * np.pi)
    filament = FilamentState(grid, resampled / scale, 0.0, True, np.zeros(3), scale)
    logger.info(f"Reparametrized filament by arclength: length {length:.10f}, defect {filament.arclength_defect():.2e}")
    return filament


def _transport_rhs(tangent, tangent_x, n):
    return -np.dot(tangent_x, n) * tangent


def _parallel_normal(grid: PeriodicGrid, tangent, tangent_x, refine=4):
    """Transport a unit normal once around the loop; returns samples and the value at 2π."""
    fine = 2 * refine * grid.n
    fine_t = resample_periodic(tangent, fine)
    fine_tx = resample_periodic(tangent_x, fine)
    step = grid.h / refine
    seed = np.cross(tangent[0], np.eye(3)[np.argmin(np.abs(tangent[0]))])
    n = seed / np.linalg.norm(seed)
    normals = np.empty_like(tangent)
    for s in range(refine * grid.n):
        if s % refine == 0:
            normals[s // refine] = n
        i, mid, nxt = 2 * s, 2 * s + 1, (2 * s + 2) % fine
        k1 = _transport_rhs(fine_t[i], fine_tx[i], n)
        k2 = _transport_rhs(fine_t[mid], fine_tx[mid], n + step / 2 * k1)
        k3 = _transport_rhs(fine_t[mid], fine_tx[mid], n + step / 2 * k2)
        k4 = _transport_rhs(fine_t[nxt], fine_tx[nxt], n + step * k3)
        n = n + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        # stay on the unit circle of normals
        n = n - np.dot(n, fine_t[nxt]) * fine_t[nxt]
        n = n / np.linalg.norm(n)
    return normals, n


def hframe_lift(filament: FilamentState, tail_threshold=1e-8, tol=1e-6):
    """
    Periodic h-frame along a closed arclength filament.

    Returns the frame, the invariant q = (-ζ2 + iζ1)/2 for the σ = 1/2
    equation and the SU(2) element φ whose adjoint action maps (a, b, c) to
    (e0, n1, n2) at x = 0.
    """
    if not filament.arclength:
        raise ValueError("h-frame lift needs an arclength-parametrized filament")
    if filament.closure_gap() > 0 or filament.tail() > tail_threshold:
        raise NotClosed(f"Filament is not closed (tail {filament.tail():.3e}, gap {filament.closure_gap():.3e})")

    grid = filament.grid
    tangent = filament.tangent()
    tangent_x = filament.second_derivative()
    transported, end = _parallel_normal(grid, tangent, tangent_x)

    defect = float(max(
        np.max(np.abs(np.einsum('ij,ij->i', transported, tangent))),
        np.max(np.abs(np.linalg.norm(transported, axis=1) - 1.0)),
    ))
    if defect > tol:
        raise FrameDegenerate(f"Transported normal lost orthonormality by {defect:.3e}")

    binormal0 = np.cross(tangent[0], transported[0])
    theta = float(np.arctan2(np.dot(end, binormal0), np.dot(end, transported[0])))
    c0 = -theta / (2 * np.pi)

    psi = c0 * grid.x
    other = np.cross(tangent, transported)
    n1 = np.cos(psi)[:, None] * transported + np.sin(psi)[:, None] * other
    n2 = -np.sin(psi)[:, None] * transported + np.cos(psi)[:, None] * other

    zeta1 = np.einsum('ij,ij->i', tangent_x, n1)
    zeta2 = np.einsum('ij,ij->i', tangent_x, n2)
    omega = np.einsum('ij,ij->i', grid.derivative(n1), n2)
    frame = HFrame(grid, tangent, n1, n2, omega, c0, zeta1, zeta2)

    q = 0.5 * (-zeta2 + 1j * zeta1)
    phi = rotation_to_group(Rotation.from_matrix(frame.rotations()[0]))
    logger.info(f"h-frame lift: transport holonomy {theta:.10f}, c0={c0:.10f}, torsion spread {np.ptp(omega):.2e}")
    return frame, InvariantField(grid, q, 0.0, 0.5), phi


def _lambda_derivative(traj, lam, delta, initial, output_every):
    plus = extended_frames(traj, lam + delta, initial, output_every)
    minus = extended_frames(traj, lam - delta, initial, output_every)
    return [(p.frames - m.frames) / (2 * delta) for p, m in zip(plus, minus)]


def sym_reconstruct(phi, traj, c0, alpha0, dlambda=1e-4, scale=1.0, output_every=1,
                    arclength_tol=ARCLENGTH_TOL) -> list:
    """
    Filament α(x, t) = η(x - 2c0 t, t/σ) + α0 - η(0, 0) with η = E_λ E^{-1} at λ = c0.

    `traj` is the σ = 1/2 NLS run on its own clock; filament time is σ times
    that clock. Filaments stay in the 2π-length working units; `scale` is
    recorded on each so `FilamentState.rescaled` restores the seed units.

    The closing condition at λ = c0 only holds up to the time error of the NLS
    run, so the arclength defect grows with t. An `ArclengthDriftWarning` is
    issued once it exceeds `arclength_tol`; a smaller NLS step brings it down.
    """
    sigma = traj.sigma
    initial = phi.matrix if hasattr(phi, 'matrix') else np.asarray(phi)
    grid = traj.grid
    base = extended_frames(traj, c0, initial, output_every)
    fine = _lambda_derivative(traj, c0, dlambda, initial, output_every)
    coarse = _lambda_derivative(traj, c0, dlambda / 2, initial, output_every)

    noise = max(float(np.max(np.abs(f - c))) for f, c in zip(fine, coarse))
    if noise > 1e-3:
        raise DerivativeNoise(f"λ-derivative estimates at δλ={dlambda} and δλ/2 differ by {noise:.3e}")

    origin = np.asarray(alpha0, dtype=float)
    filaments = []
    anchor = None
    for frames, derivative in zip(base, coarse):
        eta = algebra_vectors(skew_part(derivative @ np.linalg.inv(frames.frames)), check=False)
        if anchor is None:
            anchor = eta[0].copy()
        t = sigma * frames.t
        points = grid.shift(eta, -2 * c0 * t) - anchor + origin
        filaments.append(FilamentState(grid, points, t, True, np.zeros(3), scale))
    drift = max_arclength_defect(filaments)
    if drift > arclength_tol:
        warnings.warn(
            f"Sym filaments drift from arclength by {drift:.3e} (tolerance {arclength_tol:.1e}); "
            f"reduce the NLS time step {traj.dt}",
            ArclengthDriftWarning,
        )
    logger.info(f"Sym reconstruction at λ={c0:.6f}: {len(filaments)} filaments, derivative noise {noise:.2e}")
    return filaments
