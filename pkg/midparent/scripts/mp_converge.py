"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

import logging
import os
import sys

import click  # type: ignore

from midparent.config import load_config
from midparent.const import CONTEXT_SETTINGS
from midparent.io import set_outdir, write_convergence, write_json
from midparent.limit import convergence_report
from midparent.runner import solve_sweep
from midparent.scripts import arguments as args


@click.command(
    name="converge",
    context_settings=CONTEXT_SETTINGS,
    help="""
Solve for every eps of [sweep].eps and compare with the eps -> 0 limit.

\b
Writes converge.csv with columns
eps, err_U0, err_dU0, err_d2U0, err_lambda, err_gamma, err_d3V_window,
w1_weighted, w2_weighted, followed by a "slope" row with log-log fits and
a "pass" row telling whether every error column is nonincreasing as eps
decreases. converge.json holds the same data. Exits with code 1 when the
pass row is false.
""",
)
@args.config_path()
@args.output_path()
@args.threads()
@args.exit_on_error
def run(config_path: str, output_path: str = ".", threads: int = 1) -> None:
    """Run converge script.

    :param config_path: TOML configuration file
    :type config_path: str
    :param output_path: output folder, defaults to "."
    :type output_path: str
    :param threads: for parallelization over eps, defaults to 1
    :type threads: int
    """
    cfg = load_config(config_path)
    set_outdir(output_path)
    model = cfg.build_model()

    solutions = solve_sweep(model, cfg, threads)
    report = convergence_report(
        solutions, model, cfg.sweep.region, cfg.sweep.window_radius, cfg.solver.series_tol
    )
    write_convergence(os.path.join(output_path, "converge.csv"), report)
    write_json(os.path.join(output_path, "converge.json"), report.as_dict())
    if not report.passed:
        logging.error("error columns are not monotone in eps")
        sys.exit(1)

    logging.info("That's all! :smiley:")
