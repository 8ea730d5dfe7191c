"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

import click  # type: ignore

from midparent import __version__
from midparent.const import CONTEXT_SETTINGS
from midparent.scripts import mp_converge, mp_march, mp_stationary, mp_verify


@click.group(
    name="midparent",
    context_settings=CONTEXT_SETTINGS,
    help=f"""\b
Version:    {__version__}
Author:     Gabriele Girelli
Docs:       http://ggirelli.github.io/midparent
Code:       http://github.com/ggirelli/midparent

Stationary trait profiles of the infinitesimal model with selection,
in the regime of small segregational variance.
""",
)
@click.version_option(__version__)
def main():
    """This is just an entry point."""


main.add_command(mp_stationary.run)
main.add_command(mp_march.run)
main.add_command(mp_converge.run)
main.add_command(mp_verify.run)
