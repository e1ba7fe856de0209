"""
Unit tests for the backlund module.
"""

import numpy as np
import pytest

from spinflow.backlund import (
    BtParams, Projector, bt_apply, canonical_line, frame_at_complex_lambda, simple_factor, simple_factor_inverse,
)
from spinflow.curves import library_curve
from spinflow.errors import DegenerateLine, PoleHit
from spinflow.frames import evolve_frame
from spinflow.lift import lift_curve
from spinflow.nls import nls_solve
from spinflow.su2 import IDENTITY


def transform(lift, params, t_final=0.02, dt=1e-3, output_every=1):
    traj = nls_solve(lift.invariant(), t_final, dt)
    real = evolve_frame(lift, traj, output_every)
    cplx = frame_at_complex_lambda(lift, traj, params.alpha, output_every)
    return traj, real, cplx, bt_apply(lift, traj, real, cplx, params)


def test_simple_factor_entries():
    params = BtParams(1 - 1j, [1.0, 0.0])
    k = simple_factor(params, Projector.onto(params.v), 0.0)
    assert not k.unitary
    assert np.allclose(k.matrix, np.diag([1.0, 1j]))


def test_simple_factor_inverse(rng):
    for _ in range(10):
        alpha = complex(*rng.standard_normal(2))
        params = BtParams(alpha, rng.standard_normal(2) + 1j * rng.standard_normal(2))
        pi = Projector.onto(params.v)
        lam = complex(*rng.standard_normal(2))
        product = simple_factor(params, pi, lam) @ simple_factor_inverse(params, pi, lam)
        assert product.allclose(IDENTITY, atol=1e-10)


def test_simple_factor_poles():
    params = BtParams(0.5 + 2j, [1.0, 1.0])
    pi = Projector.onto(params.v)
    with pytest.raises(PoleHit):
        simple_factor(params, pi, 0.5 + 2j)
    with pytest.raises(PoleHit):
        simple_factor_inverse(params, pi, 0.5 - 2j)


def test_projector_properties():
    pi = Projector.onto([1.0, 1j])
    assert pi.defect() < 1e-12
    assert np.isclose(np.trace(pi.matrix), 1.0)
    assert np.allclose(pi.perp @ pi.matrix, 0.0)
    with pytest.raises(DegenerateLine):
        Projector.onto([0.0, 0.0])


def test_line_vectors_are_canonical():
    assert np.allclose(canonical_line([0.0, 2j]), [0.0, 1.0])
    assert np.allclose(canonical_line([1j, 1.0]), np.array([1.0, -1j]) / np.sqrt(2))
    assert np.allclose(BtParams(1j, [3.0, 0.0]).v, [1.0, 0.0])


def test_pole_must_leave_the_real_axis():
    with pytest.raises(ValueError):
        BtParams(0.7, [1.0, 0.0])


def test_params_from_config():
    params = BtParams.from_config({'alpha': [1.0, -1.0], 'v': [[1.0, 0.0], [0.0, 1.0]]})
    assert params.alpha == 1 - 1j
    assert np.allclose(params.v, np.array([1.0, 1j]) / np.sqrt(2))


def test_vacuum_is_invariant_for_aligned_line(fixed_point_lift):
    _, _, _, result = transform(fixed_point_lift, BtParams(1 - 1j, [1.0, 0.0]), t_final=0.01, output_every=5)
    for q in result.q_tilde:
        assert np.allclose(q.values, 0.0, atol=1e-12)
    for curve in result.curves:
        assert np.allclose(curve.points, [1.0, 0.0, 0.0], atol=1e-12)


def test_vacuum_dresses_to_a_soliton(grid128):
    lift = lift_curve(library_curve('fixed_point', grid128))
    _, _, _, result = transform(lift, BtParams(1 - 1j, [1.0, 1.0]))
    x = grid128.x
    for q in result.q_tilde:
        expected = np.exp(-1j * x) / np.cosh(x + 2 * q.t)
        assert np.max(np.abs(q.values - expected)) < 1e-6
    assert result.sphere_deviation < 1e-10
    assert result.projector_defect < 1e-12
    assert result.nls_residual < 1e-3
    assert len(result.times) == 21


def test_great_circle_transform(grid128):
    lift = lift_curve(library_curve('great_circle', grid128))
    params = BtParams(1 - 1j, [1.0, 1j])
    traj, _, _, result = transform(lift, params)
    assert result.sphere_deviation < 1e-5
    assert result.nls_residual < 1e-3
    assert result.pde_residual is not None and np.isfinite(result.pde_residual)
    assert result.closure_tail >= 0.0
    for q in result.q_tilde:
        base = traj.full_step(int(round(q.t / traj.dt)))
        assert np.max(np.abs(q.values - base.values)) <= abs(params.alpha.imag) + 1e-12


def test_transform_checks_time_slices(fixed_point_lift):
    params = BtParams(1 - 1j, [1.0, 1.0])
    traj = nls_solve(fixed_point_lift.invariant(), 0.01, 1e-3)
    real = evolve_frame(fixed_point_lift, traj, 5)
    cplx = frame_at_complex_lambda(fixed_point_lift, traj, params.alpha, 2)
    with pytest.raises(ValueError):
        bt_apply(fixed_point_lift, traj, real, cplx, params)
    with pytest.raises(ValueError):
        bt_apply(fixed_point_lift, traj, real, cplx[:len(real)], params)
    shifted = BtParams(params.alpha, params.v, lambda0=0.5)
    with pytest.raises(ValueError):
        bt_apply(fixed_point_lift, traj, real, frame_at_complex_lambda(fixed_point_lift, traj, params.alpha, 5), shifted)
