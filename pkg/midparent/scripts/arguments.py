"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

import logging
import sys
from functools import wraps

import click  # type: ignore

from midparent.errors import SolverError


def config_path():
    """Add click.option for the configuration file.

    :return: click.option decorator
    :rtype: click.Option
    """
    return click.option(
        "--config",
        "-c",
        "config_path",
        required=True,
        type=click.Path(exists=False, file_okay=True, dir_okay=False, readable=True),
        help="Path to TOML configuration file.",
    )


def output_path():
    """Add click.option for the output folder.

    :return: click.option decorator
    :rtype: click.Option
    """
    return click.option(
        "--out",
        "-o",
        "output_path",
        type=click.Path(exists=False, file_okay=False, dir_okay=True, writable=True),
        default=".",
        help="""Output folder, created if missing. Default: "." """,
    )


def threads():
    """Add click.option for threads.

    :return: click.option decorator
    :rtype: click.Option
    """
    return click.option(
        "--threads",
        "-t",
        type=click.INT,
        default=1,
        help="Number of threads for parallelization.",
    )


def exit_on_error(run):
    """Log solver errors and exit with code 1."""

    @wraps(run)
    def wrapper(*args, **kwargs):
        try:
            return run(*args, **kwargs)
        except SolverError as e:
            logging.error(f"{type(e).__name__}: {e}")
            sys.exit(1)

    return wrapper
