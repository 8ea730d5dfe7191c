"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

import logging
import os
import sys

import click  # type: ignore

from midparent.config import load_config
from midparent.const import CONTEXT_SETTINGS, MARCH_CERTIFICATE_TOL
from midparent.io import march_bundle, set_outdir, write_json, write_march_profile, write_trace
from midparent.march import equilibrium_certificate
from midparent.runner import march_all
from midparent.scripts import arguments as args


@click.command(
    name="march",
    context_settings=CONTEXT_SETTINGS,
    help="""
March the renormalized density to equilibrium, once per initial center.

\b
Initial data are Gaussians of variance eps^2 centered at [march].centers.
Writes to the output folder:
  trace_<i>.csv t, lambda_hat, L1 increment per unit time
profile_<i>.csv z, f
     march.json per-run growth rate, certificate, mean, convergence and,
                with two or more runs, pairwise L1 distances
""",
)
@args.config_path()
@args.output_path()
@args.threads()
@args.exit_on_error
def run(config_path: str, output_path: str = ".", threads: int = 1) -> None:
    """Run march script.

    :param config_path: TOML configuration file
    :type config_path: str
    :param output_path: output folder, defaults to "."
    :type output_path: str
    :param threads: for parallelization over centers, defaults to 1
    :type threads: int
    """
    cfg = load_config(config_path)
    set_outdir(output_path)
    model = cfg.build_model()
    eps = cfg.solver.eps

    runs = march_all(model, cfg, threads)
    certificates = [
        equilibrium_certificate(run.state, run.lambda_hat, model, eps) for run in runs
    ]
    for i, run in enumerate(runs):
        write_trace(os.path.join(output_path, f"trace_{i}.csv"), run.trace)
        write_march_profile(os.path.join(output_path, f"profile_{i}.csv"), run.state)
        logging.info(
            f"run {i} (center {run.center:g}): lambda_hat={run.lambda_hat:.10g}, "
            + f"mean={run.mean:.6g}, certificate={certificates[i]:.2e}"
        )
    write_json(os.path.join(output_path, "march.json"), march_bundle(runs, certificates))

    failed = [
        i
        for i, (run, c) in enumerate(zip(runs, certificates))
        if not run.converged or c > MARCH_CERTIFICATE_TOL
    ]
    if failed:
        logging.error(f"runs without a certified equilibrium: {failed}")
        sys.exit(1)
    logging.info("That's all! :smiley:")
