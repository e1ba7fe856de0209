"""
Lifting a closed curve on S² to a periodic SU(2) frame.

The curve is diagonalized pointwise by the closed-form eigenvector frame F,
gauged by a diagonal factor k so that the connection f^{-1} f_x is
off-diagonal, and its monodromy f(0)^{-1} f(2π) gives the normal holonomy c0.
Removing the holonomy yields the periodic frame f̃ and the periodic invariant
q̃0 that seed the NLS solve.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.transform import Rotation

from spinflow.curves import CurveState
from spinflow.errors import GaugeResidual, NoSafeRotation, NonDiagonalMonodromy, SingularPoint
from spinflow.nls import InvariantField
from spinflow.spectral import PeriodicGrid
from spinflow.su2 import (
    GroupElement, SpherePoint, exp_diagonal, frame_axis, rotation_to_group,
)

logger = logging.getLogger(__name__)

SOUTH = np.array([-1.0, 0.0, 0.0])


@dataclass
class GaugedFrame:
    """Frame f = F k with off-diagonal connection, plus the periodic pieces of q0."""
    grid: PeriodicGrid
    frames: np.ndarray
    q0: np.ndarray
    offdiag: np.ndarray
    phase_periodic: np.ndarray
    phase_rate: float
    residual: float

    def q0_at(self, points) -> np.ndarray:
        points = np.atleast_1d(np.asarray(points, dtype=float))
        offdiag = self.grid.interpolate(self.offdiag, points)
        phase = self.grid.interpolate(self.phase_periodic, points) + self.phase_rate * points
        return offdiag * np.exp(1j * phase)


@dataclass
class LiftResult:
    grid: PeriodicGrid
    frame_tilde: np.ndarray
    q0_tilde: np.ndarray
    c0: float
    branch_sign: int
    monodromy: GroupElement
    q0: np.ndarray
    rotation: GroupElement = field(default_factory=GroupElement.identity)

    def invariant(self) -> InvariantField:
        return InvariantField(self.grid, self.q0_tilde.copy(), 0.0, 1.0)

    @property
    def lam0(self) -> float:
        return -self.c0

    def curve_points(self) -> np.ndarray:
        """Curve reproduced by the periodic frame, in the rotated coordinates."""
        return frame_axis(self.frame_tilde)


def diagonalizing_frames(points, eps_sing=1e-6) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    r1, r2, r3 = p[..., 0], p[..., 1], p[..., 2]
    if np.any(r1 <= -1.0 + eps_sing):
        raise SingularPoint(f"Curve passes within {eps_sing:.1e} of (-1, 0, 0); the eigenvector frame is discontinuous there")
    root = np.sqrt(1.0 + r1)
    frames = np.empty(p.shape[:-1] + (2, 2), dtype=complex)
    frames[..., 0, 0] = np.sqrt((1.0 + r1) / 2.0)
    frames[..., 1, 1] = frames[..., 0, 0]
    frames[..., 0, 1] = 1j / np.sqrt(2.0) * (r2 + 1j * r3) / root
    frames[..., 1, 0] = 1j / np.sqrt(2.0) * (r2 - 1j * r3) / root
    return frames


def diagonalizing_frame(p: SpherePoint, eps_sing=1e-6) -> GroupElement:
    return GroupElement(diagonalizing_frames(p.as_array(), eps_sing))


def _fibonacci_sphere(count):
    i = np.arange(count) + 0.5
    polar = np.arccos(1.0 - 2.0 * i / count)
    azimuth = np.pi * (1.0 + 5.0 ** 0.5) * i
    return np.stack([np.cos(polar), np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth)], axis=1)


def avoid_singularity(curve: CurveState, radius=0.1, candidates=4096):
    """Rotate the curve away from (-1, 0, 0) when it comes within `radius` of it."""
    distance = np.linalg.norm(curve.points - SOUTH, axis=1).min()
    if distance >= radius:
        return GroupElement.identity(), curve

    directions = _fibonacci_sphere(candidates)
    closest = np.max(directions @ curve.points.T, axis=1)
    clearance = np.sqrt(np.maximum(2.0 - 2.0 * closest, 0.0))
    best = int(np.argmax(clearance))
    if clearance[best] < radius:
        raise NoSafeRotation(f"No direction keeps a clearance of {radius} from the sampled curve")

    rotation = Rotation.align_vectors(SOUTH[None, :], directions[best][None, :])[0]
    logger.info(f"Curve comes within {distance:.3e} of (-1,0,0); rotating, new clearance {clearance[best]:.3f}")
    rotated = CurveState(curve.grid, rotation.apply(curve.points), curve.t, curve.deviation)
    return rotation_to_group(rotation), rotated


def gauge_offdiagonal(frames, grid: PeriodicGrid, residual_tol=1e-6) -> GaugedFrame:
    connection = np.conj(np.swapaxes(frames, -1, -2)) @ grid.derivative(frames)
    # diagonal part is delta(x) * a
    delta = 2.0 * connection[:, 0, 0].imag
    offdiag = connection[:, 0, 1]
    phase = grid.antiderivative(delta)
    rate = float(np.mean(delta))
    phase_periodic = phase - rate * grid.x

    frames_gauged = frames @ exp_diagonal(-phase)
    q0 = offdiag * np.exp(1j * phase)

    phase_x = grid.derivative(phase_periodic) + rate
    residual = float(max(
        np.max(np.abs(delta - phase_x)) / 2.0,
        np.max(np.abs(connection[:, 0, 0].real)),
        np.max(np.abs(connection[:, 0, 0] + connection[:, 1, 1])),
    ))
    if residual > residual_tol:
        raise GaugeResidual(f"Diagonal part of the gauged connection is {residual:.3e}")
    return GaugedFrame(grid, frames_gauged, q0, offdiag, phase_periodic, rate, residual)


def _offdiagonal(q):
    u = np.zeros(np.shape(q) + (2, 2), dtype=complex)
    u[..., 0, 1] = q
    u[..., 1, 0] = -np.conj(q)
    return u


def holonomy(gauged: GaugedFrame, grid: PeriodicGrid, branch='projective', tol=1e-6):
    """Monodromy f(0)^{-1} f(2π) written as ε exp(2π c0 a)."""
    h = grid.h
    x_last = grid.x[-1]
    q = gauged.q0_at([x_last, x_last + h / 2, grid.period])
    u0, u1, u2 = _offdiagonal(q)
    y = gauged.frames[-1]
    k1 = y @ u0
    k2 = (y + h / 2 * k1) @ u1
    k3 = (y + h / 2 * k2) @ u1
    k4 = (y + h * k3) @ u2
    end = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    monodromy = np.conj(gauged.frames[0].T) @ end
    off = max(abs(monodromy[0, 1]), abs(monodromy[1, 0]))
    if off > tol:
        raise NonDiagonalMonodromy(f"Monodromy has off-diagonal entries of size {off:.3e}; curve not closed or under-resolved")

    c = float(np.angle(monodromy[0, 0]) / np.pi)
    if c <= -1.0 + 1e-8:
        c += 2.0
    sign = 1
    if branch == 'projective':
        if c > 0.5:
            c, sign = c - 1.0, -1
        elif c <= -0.5:
            c, sign = c + 1.0, -1
    elif branch != 'strict':
        raise ValueError(f"Unknown holonomy branch '{branch}'")
    return c, sign, GroupElement(monodromy)


def periodic_gauge(gauged: GaugedFrame, c0, branch_sign, grid: PeriodicGrid, rotation=None, monodromy=None) -> LiftResult:
    x = grid.x
    frame_tilde = gauged.frames @ exp_diagonal(-c0 * x)
    q0_tilde = gauged.q0 * np.exp(1j * c0 * x)
    if monodromy is None:
        monodromy = GroupElement(np.diag([branch_sign * np.exp(1j * np.pi * c0), branch_sign * np.exp(-1j * np.pi * c0)]))
    return LiftResult(
        grid, frame_tilde, q0_tilde, float(c0), int(branch_sign), monodromy, gauged.q0,
        rotation if rotation is not None else GroupElement.identity(),
    )


def lift_curve(curve: CurveState, branch='projective', eps_sing=1e-6, safety_radius=0.1, tail_threshold=1e-8) -> LiftResult:
    curve.validate(tail_threshold, sphere_tol=1e-10)
    rotation, rotated = avoid_singularity(curve, safety_radius)
    grid = curve.grid

    frames = diagonalizing_frames(rotated.points, eps_sing)
    gauged = gauge_offdiagonal(frames, grid)
    c0, sign, monodromy = holonomy(gauged, grid, branch)
    lift = periodic_gauge(gauged, c0, sign, grid, rotation, monodromy)

    round_trip = float(np.max(np.abs(lift.curve_points() - rotated.points)))
    tail = grid.spectral_tail(lift.q0_tilde)
    logger.info(f"Lifted curve on N={grid.n}: c0={c0:.10f}, branch sign {sign:+d}, round trip {round_trip:.2e}")
    if tail > tail_threshold:
        logger.warning(f"Periodic invariant has spectral tail {tail:.3e} above {tail_threshold:.1e}")
    return lift
