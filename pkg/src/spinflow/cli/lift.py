import click
import logging

from spinflow.cli.common import apply_overrides, exit_on_error, export, run_options
from spinflow.pipeline import Pipeline


@click.command()
@run_options
@click.pass_context
def lift(ctx, **options):
    """Lift the initial curve to its periodic frame and write the invariant q̃0."""
    with exit_on_error(ctx):
        config = apply_overrides(ctx.obj['CONFIG'], **options)
        run = Pipeline(config).lift()
        export(config, run)
        result = run.lift
        logging.info(f"Lifted '{config['curve']}': c0={result.c0:.12f}, branch sign {result.branch_sign:+d}")
        click.echo(f"c0={result.c0:.12f} branch_sign={result.branch_sign:+d}")
