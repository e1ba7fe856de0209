import click
import logging

from spinflow.cli.common import apply_overrides, exit_on_error, export, run_options
from spinflow.pipeline import Pipeline


@click.command()
@run_options
@click.option('--alpha', nargs=2, type=float, help='Real and imaginary part of the pole α')
@click.option('--line', nargs=4, type=float, help='Line vector V as re1 im1 re2 im2')
@click.pass_context
def backlund(ctx, alpha, line, **options):
    """Apply a Bäcklund transformation to the computed frame and export the new curve."""
    extra = {('backlund', 'enabled'): True}
    if alpha:
        extra[('backlund', 'alpha')] = list(alpha)
    if line:
        extra[('backlund', 'v')] = [list(line[:2]), list(line[2:])]
    with exit_on_error(ctx):
        config = apply_overrides(ctx.obj['CONFIG'], extra, **options)
        run = Pipeline(config).run(backlund=True, vfe_route='none')
        export(config, run)
        bt = run.backlund
        logging.info(
            f"Bäcklund curve: sphere deviation {bt.sphere_deviation:.3e}, closure tail {bt.closure_tail:.3e}, "
            f"NLS residual {bt.nls_residual}, PDE residual {bt.pde_residual}"
        )
        click.echo(f"Wrote {len(bt.curves)} transformed curves to {config['output']['dir']}")
