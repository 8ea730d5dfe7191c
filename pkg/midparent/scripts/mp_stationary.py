"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

import logging
import os
import sys

import click  # type: ignore

from midparent.config import load_config
from midparent.const import CONTEXT_SETTINGS, GAUSSIAN_REACH, STATIONARY_CERTIFICATE_TOL
from midparent.density import DensityGrid
from midparent.fixed_point import picard_solve, reconstruct_F, stationarity_residual
from midparent.io import set_outdir, solution_bundle, write_density, write_json, write_profile
from midparent.scripts import arguments as args


@click.command(
    name="stationary",
    context_settings=CONTEXT_SETTINGS,
    help="""
Solve the stationary problem at the configured eps by Picard iteration.

\b
Writes to the output folder:
solution.json growth rate, linear part, iterations, residual, diagnostics
        U.csv z, value, d1, d2 of the profile U = gamma h + V
        F.csv z, value, d1, d2 of the reconstructed unit-mass density

The density window is widened when needed so that the segregation kernel
reaches at most a quarter of it.
""",
)
@args.config_path()
@args.output_path()
@args.threads()
@args.exit_on_error
def run(config_path: str, output_path: str = ".", threads: int = 1) -> None:
    """Run stationary script.

    :param config_path: TOML configuration file
    :type config_path: str
    :param output_path: output folder, defaults to "."
    :type output_path: str
    :param threads: unused, a single solve is sequential, defaults to 1
    :type threads: int
    """
    cfg = load_config(config_path)
    set_outdir(output_path)
    model = cfg.build_model()
    eps = cfg.solver.eps

    sol = picard_solve(model, eps, cfg)
    grid = cfg.discretization.density_grid
    reach = 4 * GAUSSIAN_REACH * eps
    if grid.half_width < reach:
        logging.info(f"Widening density window to {reach:.3g}")
        grid = DensityGrid(reach, grid.count)
    F = reconstruct_F(sol, grid)
    certificate = stationarity_residual(F, sol.lambda_raw, model, eps)
    logging.info(
        f"lambda={sol.lambda_eps:.10g}, gamma={sol.gamma_eps:.10g}, "
        + f"certificate={certificate:.2e}"
    )

    bundle = solution_bundle(sol)
    bundle["diagnostics"]["certificate"] = certificate
    write_json(os.path.join(output_path, "solution.json"), bundle)
    write_profile(os.path.join(output_path, "U.csv"), sol.U, sol.critical_point)
    write_density(os.path.join(output_path, "F.csv"), F)

    if certificate > STATIONARY_CERTIFICATE_TOL:
        logging.error(
            f"stationarity residual {certificate:.2e} above {STATIONARY_CERTIFICATE_TOL:g}"
        )
        sys.exit(1)
    logging.info("That's all! :smiley:")
