"""
Unit tests for the spectral module.
"""

import numpy as np
import pytest

from spinflow.spectral import PeriodicGrid, interior_derivative, resample_periodic, spectral_tail


@pytest.mark.parametrize('n', [8, 48, 100])
def test_grid_size_must_be_power_of_two(n):
    with pytest.raises(ValueError):
        PeriodicGrid(n)


def test_grid_points(grid32):
    assert grid32.x[0] == 0.0
    assert np.isclose(grid32.h, 2 * np.pi / 32)
    assert np.isclose(grid32.x[-1] + grid32.h, 2 * np.pi)


def test_derivative_of_trigonometric_polynomials(grid32):
    x = grid32.x
    assert np.allclose(grid32.derivative(np.sin(3 * x)), 3 * np.cos(3 * x), atol=1e-12)
    assert np.allclose(grid32.derivative(np.sin(3 * x), order=2), -9 * np.sin(3 * x), atol=1e-11)
    assert np.allclose(grid32.derivative(np.exp(2j * x)), 2j * np.exp(2j * x), atol=1e-12)


def test_derivative_along_axis(grid32):
    x = grid32.x
    values = np.stack([np.sin(x), np.cos(2 * x)], axis=1)
    expected = np.stack([np.cos(x), -2 * np.sin(2 * x)], axis=1)
    assert np.allclose(grid32.derivative(values), expected, atol=1e-12)
    assert np.allclose(grid32.derivative(values.T, axis=1), expected.T, atol=1e-12)


def test_odd_derivative_drops_nyquist_mode(grid32):
    nyquist = np.cos(16 * grid32.x)
    assert np.allclose(grid32.derivative(nyquist), 0.0, atol=1e-12)
    assert np.allclose(grid32.derivative(nyquist, order=2), -256 * nyquist, atol=1e-9)


def test_antiderivative_includes_mean(grid32):
    x = grid32.x
    assert np.allclose(grid32.antiderivative(np.cos(x)), np.sin(x), atol=1e-13)
    assert np.allclose(grid32.antiderivative(np.sin(x)), 1 - np.cos(x), atol=1e-13)
    assert np.allclose(grid32.antiderivative(1.0 + np.cos(x)), x + np.sin(x), atol=1e-13)


def test_shift_and_interpolate(grid32):
    x = grid32.x
    values = np.sin(x) + 0.5 * np.cos(3 * x)
    s = 0.37
    assert np.allclose(grid32.shift(values, s), np.sin(x + s) + 0.5 * np.cos(3 * (x + s)), atol=1e-13)
    points = np.array([0.1, 1.7, 6.0])
    assert np.allclose(grid32.interpolate(values, points), np.sin(points) + 0.5 * np.cos(3 * points), atol=1e-13)


def test_trapezoid_integrates_constants(grid32):
    assert np.isclose(grid32.trapezoid(np.ones(32)), 2 * np.pi)


def test_spectral_tail_separates_smooth_from_rough(grid64):
    x = grid64.x
    assert grid64.spectral_tail(np.stack([np.cos(x), np.sin(x)], axis=1)) < 1e-25
    step = np.where(x < np.pi, 1.0, 0.0)
    assert spectral_tail(step) > 1e-3
    assert spectral_tail(np.zeros(16)) == 0.0


def test_resample_periodic_is_exact_for_band_limited_data():
    x100 = 2 * np.pi * np.arange(100) / 100
    x512 = PeriodicGrid(512).x
    assert np.allclose(resample_periodic(np.cos(x100), 512), np.cos(x512), atol=1e-12)
    same = np.sin(x100)
    assert np.array_equal(resample_periodic(same, 100), same)


def test_interior_derivative_is_fourth_order(grid64):
    x = grid64.x
    d1 = interior_derivative(np.sin(x), grid64.h)
    d2 = interior_derivative(np.sin(x), grid64.h, order=2)
    assert d1.shape == (60,)
    assert np.max(np.abs(d1 - np.cos(x[2:-2]))) < 1e-5
    assert np.max(np.abs(d2 + np.sin(x[2:-2]))) < 1e-5
    with pytest.raises(ValueError):
        interior_derivative(np.sin(x), grid64.h, order=3)
