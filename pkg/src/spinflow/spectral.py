"""
Periodic grid on [0, 2π) and the Fourier tools built on it: differentiation,
antiderivatives, trigonometric interpolation and the high-frequency tail test
used to certify that samples represent a smooth closed curve.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.signal import resample


@dataclass(frozen=True)
class PeriodicGrid:
    n: int

    def __post_init__(self):
        if self.n < 16 or self.n & (self.n - 1):
            raise ValueError(f"Grid size must be a power of two and at least 16, got {self.n}")

    @property
    def period(self) -> float:
        return 2 * np.pi

    @property
    def h(self) -> float:
        return 2 * np.pi / self.n

    @cached_property
    def x(self) -> np.ndarray:
        return self.h * np.arange(self.n)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        # symmetric range -N/2 .. N/2-1 in FFT order
        return np.fft.fftfreq(self.n, d=1.0 / self.n)

    @cached_property
    def _odd_wavenumbers(self) -> np.ndarray:
        k = self.wavenumbers.copy()
        k[self.n // 2] = 0.0
        return k

    def _expand(self, factor, values, axis):
        shape = [1] * np.ndim(values)
        shape[axis] = self.n
        return np.reshape(factor, shape)

    def derivative(self, values, order=1, axis=0):
        """Spectral derivative along `axis`; the Nyquist mode is dropped for odd orders."""
        k = self._odd_wavenumbers if order % 2 else self.wavenumbers
        factor = self._expand((1j * k) ** order, values, axis)
        out = np.fft.ifft(factor * np.fft.fft(values, axis=axis), axis=axis)
        return out.real if np.isrealobj(values) else out

    def antiderivative(self, values, axis=0):
        """Integral from 0 to x_j: spectral for the zero-mean part, exact linear term for the mean."""
        coeffs = np.fft.fft(values, axis=axis)
        k = self._odd_wavenumbers
        inv = np.zeros(self.n, dtype=complex)
        nonzero = k != 0
        inv[nonzero] = 1.0 / (1j * k[nonzero])
        periodic = np.fft.ifft(self._expand(inv, values, axis) * coeffs, axis=axis)
        periodic = periodic - np.take(periodic, [0], axis=axis)
        mean = np.mean(values, axis=axis, keepdims=True)
        out = periodic + mean * self._expand(self.x, values, axis)
        return out.real if np.isrealobj(values) else out

    def shift(self, values, s, axis=0):
        """Evaluate the trigonometric interpolant at x_j + s."""
        phase = np.exp(1j * self.wavenumbers * s)
        phase[self.n // 2] = np.cos(self.n / 2 * s)
        out = np.fft.ifft(self._expand(phase, values, axis) * np.fft.fft(values, axis=axis), axis=axis)
        return out.real if np.isrealobj(values) else out

    def interpolate(self, values, points):
        """Evaluate the trigonometric interpolant of `values` (first axis on the grid) at arbitrary points."""
        points = np.atleast_1d(np.asarray(points, dtype=float))
        coeffs = np.fft.fft(values, axis=0) / self.n
        k = self.wavenumbers
        basis = np.exp(1j * np.outer(points, k))
        basis[:, self.n // 2] = np.cos(self.n / 2 * points)
        out = np.tensordot(basis, coeffs, axes=(1, 0))
        return out.real if np.isrealobj(values) else out

    def trapezoid(self, values, axis=0):
        return self.h * np.sum(values, axis=axis)

    def spectral_tail(self, values, axis=0) -> float:
        return spectral_tail(values, axis)


def resample_periodic(values, n):
    """Trigonometric resampling of uniformly spaced periodic samples to n points."""
    values = np.asarray(values)
    if values.shape[0] == n:
        return values.copy()
    return resample(values, n, axis=0)


def interior_derivative(values, h, order=1, axis=0):
    """Fourth-order central differences on the samples 2 .. N-3, for data that need not be periodic."""
    v = np.moveaxis(np.asarray(values), axis, 0)
    if order == 1:
        d = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
    elif order == 2:
        d = (-v[:-4] + 16 * v[1:-3] - 30 * v[2:-2] + 16 * v[3:-1] - v[4:]) / (12 * h ** 2)
    else:
        raise ValueError(f"Unsupported derivative order {order}")
    return np.moveaxis(d, 0, axis)


def spectral_tail(values, axis=0) -> float:
    """Fraction of spectral energy in the top octave |k| >= n/4 of uniformly spaced periodic samples."""
    values = np.moveaxis(np.asarray(values), axis, 0)
    n = values.shape[0]
    energy = np.abs(np.fft.fft(values, axis=0)) ** 2
    energy = energy.reshape(n, -1).sum(axis=1)
    total = energy.sum()
    if total == 0.0:
        return 0.0
    top = np.abs(np.fft.fftfreq(n, d=1.0 / n)) >= n // 4
    return float(energy[top].sum() / total)
