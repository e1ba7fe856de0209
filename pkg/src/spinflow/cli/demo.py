import click
import logging

from spinflow.cli.common import apply_overrides, exit_on_error, run_options
from spinflow.pipeline import run_pipeline

PRESETS = {
    'fixed_point': {
        ('curve',): 'fixed_point', ('grid', 'n'): 64,
        ('time', 'dt'): 1e-3, ('time', 't_final'): 0.1, ('time', 'output_every'): 10,
    },
    'great_circle': {
        ('curve',): 'great_circle', ('grid', 'n'): 512,
        ('time', 'dt'): 1e-3, ('time', 't_final'): 0.1, ('time', 'output_every'): 10,
    },
    'viviani': {
        ('curve',): 'viviani', ('grid', 'n'): 1024,
        ('time', 'dt'): 1e-3, ('time', 't_final'): 2.0, ('time', 'output_every'): 500,
    },
    'sinusoid': {
        ('curve',): 'spherical_sinusoid', ('grid', 'n'): 1024,
        ('time', 'dt'): 1e-2, ('time', 't_final'): 4.0, ('time', 'output_every'): 100,
    },
    'backlund': {
        ('curve',): 'great_circle', ('grid', 'n'): 1024,
        ('time', 'dt'): 1e-2, ('time', 't_final'): 4.0, ('time', 'output_every'): 100,
        ('backlund', 'enabled'): True, ('backlund', 'alpha'): [1.0, -1.0],
        ('backlund', 'v'): [[1.0, 0.0], [0.0, 1.0]],
    },
    'smoke_ring': {
        ('curve',): 'great_circle', ('grid', 'n'): 256,
        ('time', 'dt'): 1e-3, ('time', 't_final'): 1.0, ('time', 'output_every'): 100,
        ('vfe', 'route'): 'sym', ('vfe', 'seed'): 'smoke_ring',
    },
}


@click.command()
@click.argument('name', type=click.Choice(sorted(PRESETS)))
@run_options
@click.pass_context
def demo(ctx, name, **options):
    """Reproduce one of the reference runs."""
    with exit_on_error(ctx):
        config = apply_overrides(ctx.obj['CONFIG'], PRESETS[name], **options)
        logging.info(f"Running demo '{name}'")
        run_pipeline(config)
        click.echo(f"Demo '{name}' written to {config['output']['dir']}")
