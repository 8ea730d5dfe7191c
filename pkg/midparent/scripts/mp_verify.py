"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

import logging
import os
import sys

import click  # type: ignore
from rich.console import Console  # type: ignore
from rich.table import Table  # type: ignore

from midparent.config import load_config
from midparent.const import CONTEXT_SETTINGS
from midparent.io import set_outdir, write_json
from midparent.scripts import arguments as args
from midparent.verify import run_verify


@click.command(
    name="verify",
    context_settings=CONTEXT_SETTINGS,
    help="""
Run the invariant suite with the configured discretization and eps.

Checks quadrature moments, Gaussian invariance and mass conservation of the
offspring operator, symmetry of the gamma equation, the limit recurrence
and the contraction constant. Prints a table and writes verify.json.
""",
)
@args.config_path()
@args.output_path()
@args.threads()
@args.exit_on_error
def run(config_path: str, output_path: str = ".", threads: int = 1) -> None:
    """Run verify script.

    :param config_path: TOML configuration file
    :type config_path: str
    :param output_path: output folder, defaults to "."
    :type output_path: str
    :param threads: unused, checks run in sequence, defaults to 1
    :type threads: int
    """
    cfg = load_config(config_path)
    set_outdir(output_path)

    items = run_verify(cfg)
    table = Table(title="Invariant suite")
    table.add_column("item")
    table.add_column("result")
    table.add_column("detail")
    for item in items:
        result = "[green]pass[/green]" if item.passed else "[red]fail[/red]"
        table.add_row(item.name, result, item.detail)
    Console().print(table)
    write_json(
        os.path.join(output_path, "verify.json"),
        dict(items=[vars(item) for item in items], passed=all(i.passed for i in items)),
    )

    if not all(item.passed for item in items):
        logging.error("invariant suite failed")
        sys.exit(1)
    logging.info("That's all! :smiley:")
