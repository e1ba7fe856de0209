import click
import logging

from spinflow.cli.common import apply_overrides, exit_on_error, export, run_options
from spinflow.pipeline import Pipeline


@click.command()
@run_options
@click.pass_context
def solve(ctx, **options):
    """Evolve the initial curve under the Schrödinger flow and export the frames."""
    with exit_on_error(ctx):
        config = apply_overrides(ctx.obj['CONFIG'], **options)
        run = Pipeline(config).run(backlund=False, vfe_route='none')
        manifest = export(config, run)
        logging.info(f"Solved '{config['curve']}' up to t={run.curves[-1].t:.6g}; manifest {manifest}")
        click.echo(f"Wrote {len(run.curves)} curves to {config['output']['dir']}")
