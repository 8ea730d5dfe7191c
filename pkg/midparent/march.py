"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: explicit time marching of the renormalized trait density
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np  # type: ignore
from tqdm import tqdm  # type: ignore

from midparent.config import MarchConfig
from midparent.const import CLAMP_TOLERANCE
from midparent.density import DensityGrid, DensityState
from midparent.errors import ConfigurationError, StabilityError
from midparent.fixed_point import stationarity_residual
from midparent.mortality import MortalityModel
from midparent.operator import apply_B

# Fraction of the fastest decay time used as largest step
STABILITY_FACTOR = 0.2

TracePoint = Tuple[float, float, float]


def dt_max(m: MortalityModel, grid: DensityGrid) -> float:
    """Largest accepted step, 0.2 / (1 + max m) over the grid."""
    top = max(float(np.max(m(grid.nodes))), 0.0)
    return STABILITY_FACTOR / (1 + top)


def step(
    f: DensityState, m: MortalityModel, eps: float, dt: float
) -> Tuple[DensityState, float]:
    """One explicit Euler step of f' = B(f) - m f, then renormalization.

    :param f: current density
    :type f: DensityState
    :param m: mortality model, raw coordinates
    :type m: MortalityModel
    :param eps: deviation scale
    :type eps: float
    :param dt: time step
    :type dt: float
    :return: renormalized density and instantaneous growth rate
    :rtype: Tuple[DensityState, float]
    :raises ConfigurationError: if dt exceeds dt_max
    :raises StabilityError: if the step produces a negative density
    """
    limit = dt_max(m, f.grid)
    if not 0 < dt <= limit * (1 + 1e-12):
        raise ConfigurationError(
            f"time step {dt:.4g} violates the stability bound dt_max={limit:.4g}",
            "march",
        )
    raw = f.values + dt * (apply_B(f, eps).values - m(f.nodes) * f.values)
    scale = max(float(np.max(np.abs(raw))), 1e-300)
    if np.min(raw) < -CLAMP_TOLERANCE * scale:
        worst = f.nodes[np.argmin(raw)]
        raise StabilityError(
            f"negative density at z={worst:.4g}: use a smaller dt", "march"
        )
    g = f.with_values(np.maximum(raw, 0))
    lambda_hat = (g.mass - f.mass) / (dt * f.mass)
    return g.normalized(), float(lambda_hat)


@dataclass
class MarchResult:
    """Outcome of :func:`run_to_equilibrium`."""

    state: DensityState
    lambda_hat: float
    trace: List[TracePoint] = field(default_factory=list)
    converged: bool = False
    steps: int = 0
    center: Optional[float] = None

    @property
    def mean(self) -> float:
        return self.state.mean


def run_to_equilibrium(
    init: DensityState,
    m: MortalityModel,
    eps: float,
    cfg: Optional[MarchConfig] = None,
    progress: bool = False,
) -> MarchResult:
    """March until the L1 increment per unit time falls below equil_tol.

    Reaching max_steps is not fatal: the result is returned with
    converged=False and a warning is logged.

    :param init: initial density, renormalized before marching
    :type init: DensityState
    :param m: mortality model, raw coordinates
    :type m: MortalityModel
    :param eps: deviation scale
    :type eps: float
    :param cfg: march settings, defaults to MarchConfig()
    :type cfg: Optional[MarchConfig]
    :param progress: show a progress bar, defaults to False
    :type progress: bool
    :return: final state, growth rate and trace of (t, lambda_hat, increment)
    :rtype: MarchResult
    """
    cfg = MarchConfig() if cfg is None else cfg
    dt = dt_max(m, init.grid) if cfg.dt is None else cfg.dt
    f = init.normalized()
    result = MarchResult(f, float("nan"))
    logging.info(f"Marching {m} at eps={eps} with dt={dt:.4g}")
    for n in tqdm(range(1, cfg.max_steps + 1), disable=not progress, desc="Marching"):
        g, lambda_hat = step(f, m, eps, dt)
        increment = g.l1_distance(f) / dt
        f = g
        converged = increment <= cfg.equil_tol
        if n % cfg.trace_every == 0 or converged or n == cfg.max_steps:
            result.trace.append((n * dt, lambda_hat, increment))
            logging.debug(f"t={n * dt:.4g}: lambda={lambda_hat:.10g}, dL1={increment:.3e}")
        if converged:
            break
    result.state, result.lambda_hat = f, lambda_hat
    result.steps, result.converged = n, converged
    if converged:
        logging.info(f"Equilibrium after {n} steps: lambda={lambda_hat:.10g}")
    else:
        logging.warning(
            f"no equilibrium after {n} steps (last increment {increment:.3e})"
        )
    return result


def equilibrium_certificate(
    f: DensityState, lam: float, m: MortalityModel, eps: float
) -> float:
    """Stationarity residual of a marched equilibrium."""
    return stationarity_residual(f, lam, m, eps)
