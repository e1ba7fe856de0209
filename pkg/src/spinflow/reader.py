"""
Reads sampled closed curves from text files.
"""

import logging

import numpy as np

from spinflow.curves import CurveState
from spinflow.errors import BadFormat, NotClosed, OffSphere
from spinflow.spectral import PeriodicGrid, resample_periodic, spectral_tail

logger = logging.getLogger(__name__)

OFF_SPHERE_LIMIT = 0.01


class CurveReader:
    """Rows are `x, r1, r2, r3` or `r1, r2, r3`, uniformly spaced over one period, without the closing sample."""

    def __init__(self, path):
        self.path = path
        self._samples = None
        self._period = None

    def read(self):
        if self._samples is None:
            try:
                data = np.loadtxt(self.path, delimiter=',', comments='#', ndmin=2)
            except ValueError as e:
                raise BadFormat(f"Cannot parse curve file {self.path}: {e}") from None
            if data.shape[1] == 4:
                x = data[:, 0]
                spacing = np.diff(x)
                if len(x) < 2 or np.any(spacing <= 0) or np.ptp(spacing) > 1e-6 * np.mean(spacing):
                    raise BadFormat(f"Parameter column in {self.path} is not uniformly increasing")
                self._period = float(len(x) * np.mean(spacing))
                data = data[:, 1:]
            elif data.shape[1] != 3:
                raise BadFormat(f"Expected 3 or 4 columns in {self.path}, found {data.shape[1]}")
            else:
                self._period = 2 * np.pi
            if len(data) < 4 or not np.all(np.isfinite(data)):
                raise BadFormat(f"Curve file {self.path} needs at least four finite samples")
            self._samples = data
        return self._samples

    @property
    def period(self) -> float:
        self.read()
        return self._period

    def curve(self, n, tail_threshold=1e-8) -> CurveState:
        samples = self.read()
        norms = np.linalg.norm(samples, axis=1)
        deviation = float(np.max(np.abs(norms - 1.0)))
        if deviation > OFF_SPHERE_LIMIT:
            raise OffSphere(f"Samples in {self.path} leave the unit sphere by {deviation:.3e}")
        tail = spectral_tail(samples)
        if tail > tail_threshold:
            raise NotClosed(f"Samples in {self.path} have spectral tail {tail:.3e}; not a smooth closed curve")

        grid = PeriodicGrid(n)
        points = resample_periodic(samples, n)
        curve = CurveState.projected(grid, points)
        curve.deviation = max(curve.deviation, deviation)
        curve.validate(tail_threshold, sphere_tol=1e-10)
        logger.info(
            f"Read {len(samples)} samples from {self.path} (period {self._period:.6g}); "
            f"resampled to N={n}, sphere deviation {curve.deviation:.2e}"
        )
        return curve


def ingest_curve(path, n, tail_threshold=1e-8) -> CurveState:
    return CurveReader(path).curve(n, tail_threshold)
