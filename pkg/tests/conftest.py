import numpy as np
import pytest

from spinflow.curves import library_curve
from spinflow.lift import lift_curve
from spinflow.schema import validate_config
from spinflow.spectral import PeriodicGrid


@pytest.fixture
def grid32():
    return PeriodicGrid(32)


@pytest.fixture
def grid64():
    return PeriodicGrid(64)


@pytest.fixture
def grid128():
    return PeriodicGrid(128)


@pytest.fixture
def great_circle_lift(grid64):
    return lift_curve(library_curve('great_circle', grid64))


@pytest.fixture
def fixed_point_lift(grid64):
    return lift_curve(library_curve('fixed_point', grid64))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def make_config(tmp_path):
    """Validated configuration for short runs; keyword sections are merged over the defaults."""
    def _make(curve='great_circle', n=64, dt=1e-3, t_final=0.01, output_every=2, outdir=None, **sections):
        config = {
            'curve': curve,
            'grid': {'n': n},
            'time': {'dt': dt, 't_final': t_final, 'output_every': output_every},
            'output': {'dir': str(outdir or tmp_path / 'run'), 'plots': True},
        }
        config.update(sections)
        return validate_config(config)
    return _make
