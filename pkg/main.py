import logging

import click

from ordbase.commands.approx import approx
from ordbase.commands.check import check
from ordbase.commands.demo import demo
from ordbase.commands.enumerate import emit, enumerate_
from ordbase.commands.gallery import gallery
from ordbase.config import get_settings
from ordbase.errors import ConstructionError, OrdbaseError


class InputError(click.ClickException):
    exit_code = 2


class ConstructionFailure(click.ClickException):
    exit_code = 1


class OrdbaseGroup(click.Group):
    """Report library errors as a one-line message: exit 1 for a broken construction, 2 for bad input."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ConstructionError as e:
            raise ConstructionFailure(f"{type(e).__name__}: {e}")
        except OrdbaseError as e:
            raise InputError(f"{type(e).__name__}: {e}")


@click.group(cls=OrdbaseGroup)
@click.option("--log-level", default=None, help="Overrides ORDBASE_LOG_LEVEL")
def cli(log_level):
    """Order-theoretic checkers, enumerations and demos over exact rationals."""
    settings = get_settings()
    logging.basicConfig(level=(log_level or settings.log_level).upper())


cli.add_command(check)
cli.add_command(enumerate_)
cli.add_command(emit)
cli.add_command(approx)
cli.add_command(demo)
cli.add_command(gallery)

# Entrypoint for running via `python main.py`
if __name__ == "__main__":
    cli()
