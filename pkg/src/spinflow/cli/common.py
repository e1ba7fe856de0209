import copy
import logging
from contextlib import contextmanager

import click

from spinflow.errors import ExportError, SpinFlowError
from spinflow.exporter import RunExporter
from spinflow.schema import validate_config


def run_options(func):
    """Options shared by the commands that run the pipeline; each overrides one config key."""
    options = [
        click.option('--curve', help='Library curve name or path to a sampled curve file'),
        click.option('--n', 'n', type=int, help='Number of grid points (power of two)'),
        click.option('--dt', type=float, help='Time step'),
        click.option('--t-final', type=float, help='Final time'),
        click.option('--output-every', type=int, help='Write output every this many steps'),
        click.option('--scheme', type=click.Choice(['split_step', 'implicit']), help='NLS time stepping scheme'),
        click.option('--branch', type=click.Choice(['projective', 'strict']), help='Holonomy branch policy'),
        click.option('--outdir', type=click.Path(file_okay=False), help='Output directory'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def apply_overrides(config, extra=None, curve=None, n=None, dt=None, t_final=None, output_every=None,
                    scheme=None, branch=None, outdir=None):
    """Command-line values win over `extra`, which wins over the loaded configuration."""
    config = copy.deepcopy(config)
    options = {
        ('curve',): curve,
        ('grid', 'n'): n,
        ('time', 'dt'): dt,
        ('time', 't_final'): t_final,
        ('time', 'output_every'): output_every,
        ('nls', 'scheme'): scheme,
        ('lift', 'branch'): branch,
        ('output', 'dir'): outdir,
    }
    overrides = dict(extra or {})
    overrides.update({keys: value for keys, value in options.items() if value is not None})
    for keys, value in overrides.items():
        section = config
        for key in keys[:-1]:
            section = section.setdefault(key, {})
        section[keys[-1]] = value
    return validate_config(config)


def export(config, run):
    exporter = RunExporter(config['output']['dir'], config['output']['plots'])
    return exporter.export(run)


@contextmanager
def exit_on_error(ctx):
    """Log library errors by class name and exit with the code of their family."""
    try:
        yield
    except SpinFlowError as e:
        logging.error(f"{type(e).__name__}: {e}")
        ctx.exit(e.exit_code)
    except OSError as e:
        logging.error(f"{ExportError.__name__}: {e}")
        ctx.exit(ExportError.exit_code)
