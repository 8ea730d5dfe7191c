"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: small-variance limit objects and convergence towards them
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np  # type: ignore

from midparent.const import (
    DEFAULT_REGION,
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_SERIES_TOL,
    DEFAULT_WINDOW_RADIUS,
)
from midparent.errors import CompatibilityError, MortalityError
from midparent.fixed_point import StationarySolution, series_length, series_S
from midparent.grid import GridFunction, grid_nodes
from midparent.mortality import MortalityModel

ERROR_COLUMNS = (
    "err_U0",
    "err_dU0",
    "err_d2U0",
    "err_lambda",
    "err_gamma",
    "err_d3V_window",
)
DIAGNOSTIC_COLUMNS = ("w1_weighted", "w2_weighted")
# Absolute slack on the monotonicity check, for columns that vanish by symmetry
MONOTONE_SLACK = 1e-9


def lambda0(m: MortalityModel) -> float:
    """Limit growth rate 1 - m(z0)."""
    return 1 - m.m_at_minimum


def gamma0(m: MortalityModel) -> float:
    """Limit linear part m'''(z0) / 2m''(z0).

    :param m: mortality model
    :type m: MortalityModel
    :return: gamma0
    :rtype: float
    :raises MortalityError: if m''(z0) vanishes
    """
    curvature = m.mu0
    if abs(curvature) < 1e-12:
        raise MortalityError("degenerate second derivative at z0", m.critical_point)
    return m.normalized(0.0, 3) / (2 * curvature)


def _check_log_argument(m: MortalityModel, h: np.ndarray, terms: int) -> None:
    for k in range(terms + 1):
        shrunk = h * 2.0 ** -k
        bad = ~(1 + m.normalized(shrunk) > 0)
        if bad.any():
            where = m.critical_point + shrunk[np.argmax(bad)]
            raise CompatibilityError(
                f"compatibility violated at z={where:.6g} (k={k})", "V0"
            )


def v0_series(
    m: MortalityModel,
    half_width: Optional[float] = None,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    tol: float = DEFAULT_SERIES_TOL,
) -> GridFunction:
    """Limit corrector V0(h) = sum_k 2^k log(1 + m(z0 + 2^-k h) - m(z0)).

    Derivatives come from the analytic derivatives of the summand.

    :param m: mortality model
    :type m: MortalityModel
    :param half_width: window half width, defaults to the model's window
    :type half_width: Optional[float]
    :param sample_count: grid size, defaults to 513
    :type sample_count: int
    :param tol: series tolerance, defaults to 1e-12
    :type tol: float
    :return: V0 on the grid
    :rtype: GridFunction
    :raises CompatibilityError: if a log argument is not positive
    """
    half_width = m.window if half_width is None else half_width
    h = grid_nodes(half_width, sample_count)
    shifted = 1 + m.normalized(h)
    _check_log_argument(m, h, 0)
    m1, m2, m3 = (m.normalized(h, k) / shifted for k in (1, 2, 3))
    Lambda = GridFunction(
        half_width,
        np.log(shifted),
        m1,
        m2 - m1 ** 2,
        m3 - 3 * m1 * m2 + 2 * m1 ** 3,
    )
    _check_log_argument(m, h, series_length(Lambda))
    return series_S(Lambda, tol)


def u0(
    m: MortalityModel,
    half_width: Optional[float] = None,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    tol: float = DEFAULT_SERIES_TOL,
) -> GridFunction:
    """Limit profile U0 = gamma0 h + V0."""
    V = v0_series(m, half_width, sample_count, tol)
    slope = gamma0(m)
    return GridFunction(
        V.half_width,
        slope * V.nodes + V.values,
        slope + V.deriv1,
        V.deriv2,
        V.deriv3,
    )


def pu0_residual(
    m: MortalityModel,
    half_width: Optional[float] = None,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    tol: float = DEFAULT_SERIES_TOL,
) -> float:
    """Largest |exp(U0(h) - 2 U0(h/2) + U0(0)) / (1 + m(h)) - 1| on the grid.

    Only nodes whose half is also a node are used, so no interpolation enters.
    The residual is relative to 1 + m, which grows fast near the window edges.

    :param m: mortality model
    :type m: MortalityModel
    :param half_width: window half width, defaults to the model's window
    :type half_width: Optional[float]
    :param sample_count: grid size, defaults to 513
    :type sample_count: int
    :param tol: series tolerance, defaults to 1e-12
    :type tol: float
    :return: sup of the residual
    :rtype: float
    """
    U = u0(m, half_width, sample_count, tol)
    offsets = np.arange(-(U.center // 2), U.center // 2 + 1)
    full, half = U.center + 2 * offsets, U.center + offsets
    h = U.nodes[full]
    exponent = U.values[full] - 2 * U.values[half] + U.at_origin()
    residual = np.abs(np.expm1(exponent - np.log1p(m.normalized(h))))
    return float(np.max(residual))


def _fit_slope(eps: np.ndarray, errors: np.ndarray) -> float:
    keep = errors > 0
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(eps[keep]), np.log(errors[keep]), 1)[0])


@dataclass
class ConvergenceReport:
    """Errors of (lambda, gamma, U) against the limit objects, per eps.

    Rows are sorted by decreasing eps. Slopes are least-squares fits of
    log(error) against log(eps).
    """

    rows: List[Dict[str, float]] = field(default_factory=list)
    slopes: Dict[str, float] = field(default_factory=dict)

    @property
    def columns(self) -> List[str]:
        return ["eps", *ERROR_COLUMNS, *DIAGNOSTIC_COLUMNS]

    @property
    def passed(self) -> bool:
        """Whether every error column is nonincreasing as eps decreases."""
        for column in ERROR_COLUMNS:
            errors = [row[column] for row in self.rows]
            if any(b > a + MONOTONE_SLACK for a, b in zip(errors[:-1], errors[1:])):
                return False
        return True

    def as_dict(self) -> Dict[str, Any]:
        return dict(rows=self.rows, slopes=self.slopes, passed=self.passed)


def _window_error(sol: StationarySolution, m: MortalityModel, window_radius: float) -> float:
    V = sol.V
    inside = np.abs(V.nodes) <= sol.eps * window_radius
    inside[V.center] = True
    h = V.nodes[inside]
    return float(np.max(np.abs(V.deriv3[inside] - 4 / 3 * m.normalized(h, 3))))


def convergence_report(
    solutions: Sequence[StationarySolution],
    m: MortalityModel,
    region: float = DEFAULT_REGION,
    window_radius: float = DEFAULT_WINDOW_RADIUS,
    tol: float = DEFAULT_SERIES_TOL,
) -> ConvergenceReport:
    """Compare stationary solutions with the limit objects.

    :param solutions: converged solves for the same model
    :type solutions: Sequence[StationarySolution]
    :param m: mortality model
    :type m: MortalityModel
    :param region: report half width around z0, defaults to 1.0
    :type region: float
    :param window_radius: R in the |h| <= eps R third-derivative check
    :type window_radius: float
    :param tol: series tolerance for U0, defaults to 1e-12
    :type tol: float
    :return: convergence table
    :rtype: ConvergenceReport
    """
    report = ConvergenceReport()
    slope = gamma0(m)
    for sol in sorted(solutions, key=lambda s: -s.eps):
        U = sol.U
        limit = u0(m, U.half_width, U.sample_count, tol)
        inside = np.abs(U.nodes) <= region
        errors = [
            float(np.max(np.abs(U.derivative(k)[inside] - limit.derivative(k)[inside])))
            for k in range(3)
        ]
        row = dict(
            eps=sol.eps,
            err_U0=errors[0],
            err_dU0=errors[1],
            err_d2U0=errors[2],
            err_lambda=abs(sol.lambda_raw - lambda0(m)),
            err_gamma=abs(sol.gamma_eps - slope),
            err_d3V_window=_window_error(sol, m, window_radius),
            w1_weighted=float(sol.diagnostics.get("w1_weighted", float("nan"))),
            w2_weighted=float(sol.diagnostics.get("w2_weighted", float("nan"))),
        )
        logging.info(
            f"eps={sol.eps:g}: |U-U0|={errors[0]:.3e}, |l-l0|={row['err_lambda']:.3e}"
        )
        report.rows.append(row)
    eps = np.array([row["eps"] for row in report.rows])
    for column in report.columns[1:]:
        report.slopes[column] = _fit_slope(
            eps, np.array([row[column] for row in report.rows])
        )
    return report
