"""
Unit tests for the vfe module.
"""

import warnings

import numpy as np
import pytest

from spinflow.curves import CurveState, great_circle_exact, library_filament
from spinflow.errors import (
    ArclengthDriftWarning, DegenerateSpeed, DerivativeNoise, FrameDegenerate, NonClosedWarning, NotClosed,
)
from spinflow.nls import nls_solve
from spinflow.su2 import adjoint_vectors
from spinflow.vfe import (
    FilamentState, arclength_reparametrize, filament_from_flow, hframe_lift, max_arclength_defect, sym_reconstruct,
    vfe_residual,
)


def great_circle_filament(grid, t=0.0):
    x = grid.x
    return np.stack([t + 0 * x, np.sin(x), 1 - np.cos(x)], axis=1)


def test_great_circle_flow_gives_translating_circle(grid64):
    curves = [CurveState(grid64, great_circle_exact(grid64.x, t), t) for t in (0.0, 0.05, 0.1, 0.15)]
    filaments = filament_from_flow(curves)
    for filament in filaments:
        assert np.allclose(filament.points, great_circle_filament(grid64, filament.t), atol=1e-12)
        assert filament.closure_gap() < 1e-12
        assert filament.arclength_defect() < 1e-12
    assert vfe_residual(filaments) < 1e-10


def test_fixed_point_flow_is_not_closed(grid32):
    curves = [CurveState(grid32, np.tile([1.0, 0.0, 0.0], (32, 1)), t) for t in (0.0, 0.1)]
    with pytest.warns(NonClosedWarning):
        filaments = filament_from_flow(curves)
    assert np.allclose(filaments[0].points[:, 0], grid32.x)
    assert np.isclose(filaments[0].closure_gap(), 2 * np.pi)
    assert np.allclose(filaments[0].tangent(), [1.0, 0.0, 0.0])


def test_vfe_residual_needs_three_filaments(grid32):
    filament = FilamentState(grid32, great_circle_filament(grid32))
    with pytest.raises(ValueError):
        vfe_residual([filament, filament])


def test_circle_is_already_arclength(grid64):
    points = library_filament('planar_circle', grid64)
    filament = arclength_reparametrize(points, grid64)
    assert np.isclose(filament.scale, 1.0)
    assert np.allclose(filament.points, points, atol=1e-12)
    assert filament.arclength


def test_ellipse_reparametrization(grid128):
    filament = arclength_reparametrize(library_filament('smoke_ring', grid128), grid128)
    assert filament.arclength_defect() < 1e-8
    assert 1.2 < filament.scale < 1.23
    assert np.allclose(filament.rescaled().points, filament.points * filament.scale)
    assert filament.rescaled().t == 0.0


def test_reparametrization_is_resolution_independent():
    from spinflow.spectral import PeriodicGrid
    scales = [arclength_reparametrize(library_filament('smoke_ring', PeriodicGrid(n))).scale for n in (128, 256)]
    assert abs(scales[0] - scales[1]) < 1e-10


def test_degenerate_speed(grid32):
    with pytest.raises(DegenerateSpeed):
        arclength_reparametrize(np.ones((32, 3)), grid32)


def test_planar_circle_hframe(grid64):
    filament = arclength_reparametrize(library_filament('planar_circle', grid64), grid64)
    frame, q0, phi = hframe_lift(filament)
    assert abs(frame.c0) < 1e-8
    assert frame.orthonormality_defect() < 1e-8
    assert np.allclose(frame.omega, frame.c0, atol=1e-8)
    assert np.allclose(np.abs(q0.values), 0.5, atol=1e-8)
    assert q0.sigma == 0.5
    assert np.allclose(adjoint_vectors(phi.matrix, [1.0, 0.0, 0.0]), frame.tangent[0], atol=1e-10)
    assert np.allclose(adjoint_vectors(phi.matrix, [0.0, 1.0, 0.0]), frame.n1[0], atol=1e-10)


def test_hframe_requires_closed_arclength_filament(grid32):
    points = great_circle_filament(grid32)
    with pytest.raises(ValueError):
        hframe_lift(FilamentState(grid32, points))
    with pytest.raises(NotClosed):
        hframe_lift(FilamentState(grid32, points, arclength=True, slope=np.array([1.0, 0.0, 0.0])))


def test_sym_route_matches_flow_route(grid64):
    seed = FilamentState(grid64, great_circle_filament(grid64), 0.0, True)
    frame, q0, phi = hframe_lift(seed)
    traj = nls_solve(q0, 0.1, 0.002)
    filaments = sym_reconstruct(phi, traj, frame.c0, seed.points[0], output_every=10)
    assert [round(f.t, 12) for f in filaments] == [0.0, 0.01, 0.02, 0.03, 0.04, 0.05]
    for filament in filaments:
        assert np.max(np.abs(filament.points - great_circle_filament(grid64, filament.t))) < 1e-4
    assert vfe_residual(filaments) < 1e-3


def smoke_ring_filaments(grid, dt, output_every):
    seed = arclength_reparametrize(library_filament('smoke_ring', grid), grid)
    frame, q0, phi = hframe_lift(seed)
    traj = nls_solve(q0, 0.2, dt)
    filaments = sym_reconstruct(phi, traj, frame.c0, seed.points[0], scale=seed.scale, output_every=output_every)
    return seed, frame, filaments


def test_smoke_ring_floats_along_its_binormal(grid128):
    with warnings.catch_warnings():
        warnings.simplefilter('error', ArclengthDriftWarning)
        seed, frame, filaments = smoke_ring_filaments(grid128, 0.001, 50)
    heights = [f.centroid()[2] for f in filaments]
    assert len(heights) == 5
    assert all(b > a for a, b in zip(heights, heights[1:]))
    assert all(f.arclength_defect() < 1e-6 for f in filaments)
    assert filaments[-1].scale == seed.scale

    later, _, _ = hframe_lift(filaments[-1])
    assert abs(later.c0 - frame.c0) < 1e-6


def test_coarse_time_step_drifts_from_arclength(grid128):
    with pytest.warns(ArclengthDriftWarning):
        _, _, filaments = smoke_ring_filaments(grid128, 0.002, 25)
    assert max_arclength_defect(filaments) > 1e-6
    assert filaments[0].arclength_defect() < 1e-6


def test_transport_fails_on_non_arclength_filament(grid64):
    # flagged as arclength although |α_x| varies between 1 and √2
    points = library_filament('smoke_ring', grid64)
    with pytest.raises(FrameDegenerate):
        hframe_lift(FilamentState(grid64, points, arclength=True))


def test_lambda_step_too_large(grid64):
    seed = FilamentState(grid64, great_circle_filament(grid64), 0.0, True)
    frame, q0, phi = hframe_lift(seed)
    traj = nls_solve(q0, 0.01, 0.002)
    with pytest.raises(DerivativeNoise):
        sym_reconstruct(phi, traj, frame.c0, seed.points[0], dlambda=1.0)
