import os
import click
import logging
import yaml
import importlib.resources as pkg_resources

from spinflow.errors import ConfigError
from spinflow.schema import validate_config
from spinflow.__version__ import __version__
from spinflow.cli.lift import lift
from spinflow.cli.solve import solve
from spinflow.cli.backlund import backlund
from spinflow.cli.vfe import vfe
from spinflow.cli.diagnose import diagnose
from spinflow.cli.demo import demo

logging.basicConfig(level=logging.INFO)


def load_config(config_file):
    try:
        with open(config_file, 'r') as file:
            return yaml.safe_load(file) or {}
    except yaml.YAMLError as e:
        mark = getattr(e, 'problem_mark', None)
        where = f" at line {mark.line + 1}" if mark is not None else ''
        raise ConfigError(f"Cannot parse {config_file}{where}: {e}") from None


@click.group()
@click.option('--config', type=click.Path(exists=True), help='Path to the configuration file')
@click.version_option(__version__)
@click.pass_context
def cli(ctx, config):
    if config:
        config_file = config
    elif os.getenv('SPINFLOW_CONFIG'):
        config_file = os.getenv('SPINFLOW_CONFIG')
    else:
        with pkg_resources.path('spinflow', 'default_config.yaml') as default_config_path:
            config_file = str(default_config_path)

    ctx.ensure_object(dict)
    try:
        config = load_config(config_file)
        if os.getenv('SPINFLOW_OUTPUT_DIR'):
            config.setdefault('output', {})['dir'] = os.getenv('SPINFLOW_OUTPUT_DIR')
        config = validate_config(config)
    except ConfigError as e:
        logging.error(f"{type(e).__name__}: {e}")
        ctx.exit(e.exit_code)
    ctx.obj['CONFIG'] = config

    logging.info(f"Using configuration {config_file}; output goes to {config['output']['dir']}")


cli.add_command(lift)
cli.add_command(solve)
cli.add_command(backlund)
cli.add_command(vfe)
cli.add_command(diagnose)
cli.add_command(demo)
