"""
Unit tests for the lift module.
"""

import numpy as np
import pytest

from spinflow.curves import CurveState, library_curve
from spinflow.errors import GaugeResidual, NoSafeRotation, NonDiagonalMonodromy, SingularPoint
from spinflow.frames import FrameField, reconstruct
from spinflow.lift import (
    avoid_singularity, diagonalizing_frame, diagonalizing_frames, gauge_offdiagonal, holonomy, lift_curve,
)
from spinflow.spectral import PeriodicGrid
from spinflow.su2 import IDENTITY, SpherePoint, exp_diagonal, exp_vectors, frame_axis, unitarity_defect


def test_diagonalizing_frame_of_basis_points():
    assert diagonalizing_frame(SpherePoint(1.0, 0.0, 0.0)).allclose(IDENTITY)
    s = 1 / np.sqrt(2)
    expected = np.array([[s, 1j * s], [1j * s, s]])
    assert diagonalizing_frame(SpherePoint(0.0, 1.0, 0.0)).allclose(expected)


def test_diagonalizing_frames_reproduce_points(rng):
    points = rng.standard_normal((200, 3))
    points /= np.linalg.norm(points, axis=1)[:, None]
    points = points[points[:, 0] > -0.9]
    frames = diagonalizing_frames(points)
    assert unitarity_defect(frames) < 1e-14
    assert np.allclose(np.linalg.det(frames), 1.0, atol=1e-14)
    assert np.allclose(frame_axis(frames), points, atol=1e-14)


def test_diagonalizing_frame_singular_at_south_pole():
    with pytest.raises(SingularPoint):
        diagonalizing_frame(SpherePoint(-1.0, 0.0, 0.0))


def test_great_circle_frame_closed_form(grid64):
    x = grid64.x
    frames = diagonalizing_frames(library_curve('great_circle', grid64).points)
    s = 1 / np.sqrt(2)
    assert np.allclose(frames[:, 0, 0], s)
    assert np.allclose(frames[:, 0, 1], 1j * s * np.exp(1j * x))
    assert np.allclose(frames[:, 1, 0], 1j * s * np.exp(-1j * x))


def test_great_circle_gauge_is_constant(grid64):
    frames = diagonalizing_frames(library_curve('great_circle', grid64).points)
    gauged = gauge_offdiagonal(frames, grid64)
    assert np.allclose(gauged.q0, -0.5, atol=1e-10)
    assert np.isclose(gauged.phase_rate, -1.0, atol=1e-12)
    assert np.allclose(gauged.frames, frames @ exp_diagonal(grid64.x), atol=1e-12)
    assert gauged.residual < 1e-10


def test_great_circle_holonomy_branches(grid64):
    frames = diagonalizing_frames(library_curve('great_circle', grid64).points)
    gauged = gauge_offdiagonal(frames, grid64)

    c0, sign, monodromy = holonomy(gauged, grid64, 'projective')
    assert abs(c0) < 1e-8
    assert sign == -1
    assert monodromy.allclose(-IDENTITY, atol=1e-7)

    c0, sign, _ = holonomy(gauged, grid64, 'strict')
    assert abs(c0 - 1.0) < 1e-7
    assert sign == 1

    with pytest.raises(ValueError):
        holonomy(gauged, grid64, 'sideways')


def test_great_circle_lift(great_circle_lift, grid64):
    lift = great_circle_lift
    assert abs(lift.c0) < 1e-8
    assert lift.branch_sign == -1
    assert np.allclose(lift.q0_tilde, -0.5, atol=1e-8)
    assert np.allclose(lift.curve_points(), library_curve('great_circle', grid64).points, atol=1e-12)
    invariant = lift.invariant()
    assert invariant.sigma == 1.0 and invariant.t == 0.0


def test_great_circle_strict_lift(grid64):
    lift = lift_curve(library_curve('great_circle', grid64), branch='strict')
    x = grid64.x
    assert abs(lift.c0 - 1.0) < 1e-7
    assert lift.branch_sign == 1
    assert lift.lam0 == -lift.c0
    assert np.allclose(lift.q0_tilde, -0.5 * np.exp(1j * x), atol=1e-6)
    # the periodic frame is the eigenvector frame itself
    assert np.allclose(lift.frame_tilde, diagonalizing_frames(library_curve('great_circle', grid64).points), atol=1e-6)


def test_fixed_point_lift(fixed_point_lift):
    lift = fixed_point_lift
    assert lift.c0 == 0.0
    assert lift.branch_sign == 1
    assert np.allclose(lift.q0_tilde, 0.0, atol=1e-14)
    assert np.allclose(lift.frame_tilde, IDENTITY, atol=1e-14)
    assert lift.monodromy.allclose(IDENTITY)


@pytest.mark.parametrize('name, n', [('viviani', 128), ('spherical_sinusoid', 256), ('great_circle', 64)])
def test_lift_round_trip(name, n):
    grid = PeriodicGrid(n)
    curve = library_curve(name, grid)
    lift = lift_curve(curve)
    assert np.max(np.abs(lift.curve_points() - curve.points)) < 1e-8
    assert unitarity_defect(lift.frame_tilde) < 1e-12
    assert grid.spectral_tail(lift.q0_tilde) < 1e-8


def test_viviani_holonomy_is_resolution_independent():
    c0 = [lift_curve(library_curve('viviani', PeriodicGrid(n))).c0 for n in (256, 512)]
    assert abs(c0[0] - c0[1]) < 1e-6
    assert -0.5 < c0[0] <= 0.5


def test_avoid_singularity_leaves_distant_curves_alone(grid64):
    curve = library_curve('great_circle', grid64)
    rotation, rotated = avoid_singularity(curve)
    assert rotation.allclose(IDENTITY)
    assert rotated is curve


def test_curve_through_south_pole_is_rotated_and_restored(grid64):
    x = grid64.x
    curve = CurveState(grid64, np.stack([np.cos(x), np.sin(x), 0 * x], axis=1))
    rotation, rotated = avoid_singularity(curve, radius=0.1)
    assert not rotation.allclose(IDENTITY)
    assert np.min(np.linalg.norm(rotated.points - [-1.0, 0.0, 0.0], axis=1)) >= 0.1

    lift = lift_curve(curve)
    assert np.allclose(lift.curve_points(), rotated.points, atol=1e-8)
    [restored] = reconstruct([FrameField(grid64, lift.frame_tilde, 0.0, lift.lam0)], lift.c0, lift.rotation)
    assert np.allclose(restored.points, curve.points, atol=1e-8)


def test_no_safe_rotation(grid64):
    # no direction on the sphere is 2.5 away from every sample
    curve = library_curve('great_circle', grid64)
    with pytest.raises(NoSafeRotation):
        avoid_singularity(curve, radius=2.5)


def test_gauge_residual_on_unresolved_curve(grid32, rng):
    points = rng.standard_normal((32, 3))
    points /= np.linalg.norm(points, axis=1)[:, None]
    points[:, 0] = np.abs(points[:, 0])
    with pytest.raises(GaugeResidual):
        gauge_offdiagonal(diagonalizing_frames(points), grid32)


def test_frames_that_do_not_close_up(grid64):
    frames = diagonalizing_frames(library_curve('great_circle', grid64).points)
    gauged = gauge_offdiagonal(frames, grid64)
    gauged.frames[0] = gauged.frames[0] @ exp_vectors(np.array([0.0, 0.2, 0.0]))
    with pytest.raises(NonDiagonalMonodromy):
        holonomy(gauged, grid64, branch='strict')
