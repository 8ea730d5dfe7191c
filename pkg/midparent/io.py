"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: output folders, JSON bundles and CSV profiles
"""

import json
import logging
import os
from typing import Any, Dict, List, Sequence

import numpy as np  # type: ignore

from midparent.density import DensityState
from midparent.errors import ConfigurationError
from midparent.fixed_point import StationarySolution
from midparent.grid import GridFunction
from midparent.limit import ConvergenceReport
from midparent.march import MarchResult, TracePoint


def set_outdir(path: str, create: bool = True) -> str:
    """Make sure the output folder exists.

    :param path: path to output folder
    :type path: str
    :param create: create if not found, defaults to True
    :type create: bool
    :return: the path
    :rtype: str
    :raises ConfigurationError: if not found and create is False
    """
    if not os.path.isdir(path):
        if create:
            os.makedirs(path, exist_ok=True)
        else:
            raise ConfigurationError(f"folder not found: {path}")
    return path


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def write_json(path: str, data: Dict[str, Any]) -> None:
    with open(path, "w") as OH:
        json.dump(_plain(data), OH, indent=2)
    logging.info(f"Wrote '{path}'")


def solution_bundle(sol: StationarySolution) -> Dict[str, Any]:
    """Scalar summary of a stationary solve, as written to solution.json."""
    diagnostics = dict(sol.diagnostics)
    diagnostics["critical_point"] = sol.critical_point
    diagnostics["contraction_trace"] = sol.contraction_trace
    return dict(
        eps=sol.eps,
        model=sol.model.name,
        **{"lambda": sol.lambda_eps, "gamma": sol.gamma_eps},
        iterations=sol.iterations,
        residual=sol.residual,
        diagnostics=diagnostics,
    )


def write_profile(path: str, gf: GridFunction, offset: float = 0.0) -> None:
    """Write z, value, d1, d2 of a grid function, nodes shifted by offset."""
    table = np.column_stack([gf.nodes + offset, gf.values, gf.deriv1, gf.deriv2])
    _write_table(path, ["z", "value", "d1", "d2"], table)


def write_density(path: str, state: DensityState) -> None:
    """Write z, value, d1, d2 of a density, derivatives by centered differences."""
    d1 = np.gradient(state.values, state.step)
    table = np.column_stack(
        [state.nodes, state.values, d1, np.gradient(d1, state.step)]
    )
    _write_table(path, ["z", "value", "d1", "d2"], table)


def write_march_profile(path: str, state: DensityState) -> None:
    _write_table(path, ["z", "f"], np.column_stack([state.nodes, state.values]))


def write_trace(path: str, trace: Sequence[TracePoint]) -> None:
    table = np.array(trace, dtype=float).reshape(-1, 3)
    _write_table(path, ["t", "lambda_hat", "increment"], table)


def _write_table(
    path: str, header: List[str], table: np.ndarray, footer: str = ""
) -> None:
    np.savetxt(
        path,
        table,
        delimiter=",",
        header=",".join(header),
        footer=footer,
        comments="",
        fmt="%.12g",
    )
    logging.info(f"Wrote '{path}'")


def write_convergence(path: str, report: ConvergenceReport) -> None:
    """Write the convergence rows, then a slope row and a pass row.

    :param path: output CSV
    :type path: str
    :param report: convergence table
    :type report: ConvergenceReport
    """
    columns = report.columns
    table = np.array(
        [[row[c] for c in columns] for row in report.rows], dtype=float
    ).reshape(-1, len(columns))
    slopes = [f"{report.slopes.get(c, np.nan):.4g}" for c in columns[1:]]
    footer = "\n".join(
        [",".join(["slope", *slopes]), f"pass,{str(report.passed).lower()}"]
    )
    _write_table(path, columns, table, footer)


def march_bundle(
    runs: Sequence[MarchResult], certificates: Sequence[float]
) -> Dict[str, Any]:
    """Per-run summary and pairwise L1 distances, as written to march.json."""
    bundle: Dict[str, Any] = dict(
        runs=[
            dict(
                center=run.center,
                lambda_hat=run.lambda_hat,
                certificate=certificate,
                mean=run.mean,
                converged=run.converged,
                steps=run.steps,
            )
            for run, certificate in zip(runs, certificates)
        ]
    )
    if len(runs) >= 2:
        bundle["distances"] = [
            dict(first=i, second=j, l1=runs[i].state.l1_distance(runs[j].state))
            for i in range(len(runs))
            for j in range(i + 1, len(runs))
        ]
    return bundle
