import click
import logging

from spinflow.cli.common import apply_overrides, exit_on_error, export, run_options
from spinflow.pipeline import Pipeline


@click.command()
@run_options
@click.option('--route', type=click.Choice(['antiderivative', 'sym', 'both']), default='both',
              help='Filament reconstruction route')
@click.option('--seed', help='Filament seed for the Sym route')
@click.pass_context
def vfe(ctx, route, seed, **options):
    """Build vortex filaments from the curve flow and/or from a filament seed."""
    extra = {('vfe', 'route'): route}
    if seed:
        extra[('vfe', 'seed')] = seed
    with exit_on_error(ctx):
        config = apply_overrides(ctx.obj['CONFIG'], extra, **options)
        run = Pipeline(config).run(backlund=False, vfe_route=route)
        export(config, run)
        for name, filaments in run.filaments.items():
            residual = run.filament_meta.get(name, {}).get('vfe_residual')
            logging.info(f"Route '{name}': {len(filaments)} filaments, VFE residual {residual}")
        click.echo(f"Wrote filaments ({', '.join(run.filaments)}) to {config['output']['dir']}")
