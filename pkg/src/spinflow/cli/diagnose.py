import click
import yaml

from spinflow.cli.common import apply_overrides, exit_on_error, export, run_options
from spinflow.pipeline import Pipeline


@click.command()
@run_options
@click.pass_context
def diagnose(ctx, **options):
    """Run the flow and print the diagnostics summary."""
    with exit_on_error(ctx):
        config = apply_overrides(ctx.obj['CONFIG'], **options)
        run = Pipeline(config).run()
        export(config, run)
        click.echo(yaml.safe_dump(run.report.summary(), sort_keys=True))
