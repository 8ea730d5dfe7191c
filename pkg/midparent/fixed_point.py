"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: dilation series, the mapping H and its Picard iteration
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np  # type: ignore
from numpy.polynomial import polynomial  # type: ignore
from scipy.integrate import trapezoid  # type: ignore

from midparent.config import Config
from midparent.const import DEFAULT_SERIES_TOL
from midparent.density import DensityGrid, DensityState
from midparent.errors import (
    CompatibilityError,
    ConfigurationError,
    EpsilonTooLarge,
    NumericalError,
    SeriesError,
)
from midparent.gamma import check_eps, solve_gamma
from midparent.grid import GridFunction, alpha_norm, grid_nodes
from midparent.mortality import MortalityModel, validate_mortality
from midparent.operator import apply_B, eval_I, tilted_moments, weighted_w_sup
from midparent.quadrature import QuadratureRule

# Residuals below this multiple of the Picard tolerance are rounding noise
ROUNDING_FLOOR = 10.0


def kappa(alpha: float) -> float:
    """Contraction constant 2^(1+a) / (4 - 2^a) of the series operator.

    :param alpha: decay exponent in [0, 1)
    :type alpha: float
    :return: kappa(alpha), below 1 iff alpha < 2 - log2(3)
    :rtype: float
    :raises ConfigurationError: if alpha is outside [0, 1)
    """
    alpha = float(alpha)
    if not 0 <= alpha < 1:
        raise ConfigurationError(f"alpha must be in [0, 1), got {alpha}")
    return 2 ** (1 + alpha) / (4 - 2 ** alpha)


def invariant_radius(C_m: float, alpha: float) -> float:
    """Radius 2 C_m / (1 - kappa) of the ball mapped into itself by H."""
    return 2 * C_m / (1 - kappa(alpha))


def series_length(Lambda: GridFunction) -> int:
    """Last index K whose term of the dilation series is summed explicitly.

    For k > K every argument 2^-k h lies in one of the two cells around the
    origin, where the interpolant of Lambda is a single cubic and the rest of
    the series has a closed form. Each summed term scales rounding by 2^k, so
    K stays near log2 of the number of cells.

    :param Lambda: summand
    :type Lambda: GridFunction
    :return: last explicit index K
    :rtype: int
    """
    return max(int(np.ceil(np.log2(Lambda.center))) - 1, 0)


def _central_cubic(Lambda: GridFunction, low: int, side: int) -> np.ndarray:
    # Power coefficients in x of the Hermite cubic built on rows (low, low + 1)
    # over the cell between 0 and side * step.
    step, c = Lambda.step, Lambda.center
    p0, p1 = Lambda.derivative(low)[[c, c + side]]
    dp0, dp1 = side * step * Lambda.derivative(low + 1)[[c, c + side]]
    in_t = np.array(
        [p0, dp0, 3 * (p1 - p0) - 2 * dp0 - dp1, 2 * (p0 - p1) + dp0 + dp1]
    )
    return in_t * (side / step) ** np.arange(4)


def series_tail(h: np.ndarray, terms: int, Lambda: GridFunction) -> np.ndarray:
    """Closed-form sum of the terms k > K of every order.

    The terms are those of the central cubic interpolant of Lambda, so the
    tail is exact for the interpolant; Lambda(0) and Lambda'(0) must be 0.

    :param h: evaluation points
    :type h: np.ndarray
    :param terms: last explicit index K, see :func:`series_length`
    :type terms: int
    :param Lambda: summand
    :type Lambda: GridFunction
    :return: array of shape (4, len(h)), orders 0..3
    :rtype: np.ndarray
    """
    tail = np.zeros((4, h.size))
    powers = np.arange(4)
    for side, where in ((1, h >= 0), (-1, h < 0)):
        if not where.any():
            continue
        # Orders 0 and 1 weigh x^j by 2^-k(j - 1), orders 2 and 3 by 2^-k(j + 1)
        for low, shift in ((0, -1), (2, 1)):
            n = powers + shift
            safe = np.maximum(n, 1)
            weights = np.where(n > 0, 2.0 ** (-terms * safe) / (2.0 ** safe - 1), 0.0)
            scaled = _central_cubic(Lambda, low, side) * weights
            tail[low, where] = polynomial.polyval(h[where], scaled)
            derivative = polynomial.polyder(scaled)
            tail[low + 1, where] = polynomial.polyval(h[where], derivative)
    return tail


def _series_defect(Lambda: GridFunction, series: np.ndarray) -> float:
    # Largest relative |S(h) - 2 S(h/2) - Lambda(h)| over nodes whose half is a node
    offsets = np.arange(-(Lambda.center // 2), Lambda.center // 2 + 1)
    full, half = Lambda.center + 2 * offsets, Lambda.center + offsets
    target = Lambda.values[full]
    defect = np.abs(series[full] - 2 * series[half] - target)
    return float(np.max(defect / np.maximum(np.abs(target), 1.0)))


def series_S(Lambda: GridFunction, tol: float = DEFAULT_SERIES_TOL) -> GridFunction:
    """Dilation series h -> sum_k 2^k Lambda(2^-k h).

    The terms k <= K are summed explicitly and the remaining ones in closed
    form, see :func:`series_tail`. Derivatives are the term-by-term
    differentiated series. The result satisfies S(h) - 2 S(h/2) = Lambda(h)
    up to rounding, and a warning is logged when the defect exceeds tol.

    :param Lambda: summand, with Lambda(0) = 0 and Lambda'(0) = 0
    :type Lambda: GridFunction
    :param tol: accepted relative defect of the series equation, defaults to 1e-12
    :type tol: float
    :return: the series on the same grid
    :rtype: GridFunction
    :raises SeriesError: if Lambda or its slope does not vanish at 0
    """
    value, slope = Lambda.at_origin(0), Lambda.at_origin(1)
    if abs(value) > 1e-10 or abs(slope) > 1e-8:
        raise SeriesError(
            f"nonzero slope at origin: Lambda(0)={value:.3g}, Lambda'(0)={slope:.3g}"
        )
    if value != 0 or slope != 0:
        # Below the thresholds above, but the closed-form tail needs exact zeros
        offsets = (np.arange(Lambda.sample_count) - Lambda.center) * Lambda.step
        zero = np.zeros_like(offsets)
        Lambda = Lambda - GridFunction(
            Lambda.half_width,
            value + slope * offsets,
            np.full_like(offsets, slope),
            zero,
            zero,
        )
    h = Lambda.nodes
    terms = series_length(Lambda)
    total = np.zeros((4, h.size))
    for k in range(terms + 1):
        shrunk = h * 2.0 ** -k
        for order in range(4):
            total[order] += 2.0 ** (k * (1 - order)) * Lambda.eval(shrunk, order)
    total += series_tail(h, terms, Lambda)
    defect = _series_defect(Lambda, total[0])
    logging.debug(f"dilation series: K={terms}, defect={defect:.2e}")
    if defect > tol:
        logging.warning(f"dilation series defect {defect:.2e} above {tol:.0e}")
    return GridFunction(Lambda.half_width, *total)


def eval_Gamma(
    V: GridFunction,
    m: MortalityModel,
    gamma: float,
    eps: float,
    z,
    rule: Optional[QuadratureRule] = None,
) -> Tuple[Any, Any]:
    """Mortality and reproduction parts of the summand of H.

    Gamma_m = log((I(0) + m(z)) / I(0)) and Gamma_I = log(I(z) / I(0)), with m
    translated to its working minimum.

    :param V: corrector
    :type V: GridFunction
    :param m: mortality model
    :type m: MortalityModel
    :param gamma: linear part
    :type gamma: float
    :param eps: deviation scale
    :type eps: float
    :param z: offset(s) from the critical point
    :type z: Union[float, np.ndarray]
    :param rule: quadrature rule, defaults to order 24
    :type rule: Optional[QuadratureRule]
    :return: (Gamma_m, Gamma_I)
    :rtype: Tuple[Any, Any]
    :raises CompatibilityError: if I(0) + m(z) <= 0
    """
    I0 = eval_I(V, gamma, eps, 0.0, rule)
    Iz = eval_I(V, gamma, eps, z, rule)
    argument = I0 + m.normalized(z)
    bad = ~(np.atleast_1d(argument) > 0)
    if bad.any():
        where = np.atleast_1d(z)[np.argmax(bad)] + m.critical_point
        raise CompatibilityError(f"compatibility violated at z={where:.6g}", "Gamma")
    return np.log(argument / I0), np.log(Iz / I0)


@dataclass
class HStep:
    """One application of H, with the quantities computed on the way."""

    output: GridFunction
    gamma: float
    lam: float
    i_deviation: float


def _mortality_part(m: MortalityModel, h: np.ndarray, I0: float) -> np.ndarray:
    shifted = I0 + m.normalized(h)
    bad = ~(shifted > 0)
    if bad.any():
        where = m.critical_point + h[np.argmax(bad)]
        raise CompatibilityError(f"compatibility violated at z={where:.6g}", "Gamma")
    m1, m2, m3 = (m.normalized(h, k) / shifted for k in (1, 2, 3))
    return np.array(
        [
            np.log(shifted / I0),
            m1,
            m2 - m1 ** 2,
            m3 - 3 * m1 * m2 + 2 * m1 ** 3,
        ]
    )


def h_step(
    V: Optional[GridFunction],
    m: MortalityModel,
    eps: float,
    cfg: Config,
    rule: Optional[QuadratureRule] = None,
    half_width: Optional[float] = None,
    sample_count: Optional[int] = None,
) -> HStep:
    """Apply H to V and keep gamma, lambda and the deviation of I from 1.

    With eps = 0 the reproduction part vanishes (I = 1) and V is ignored; the
    output is then the limit corrector on the requested grid.
    """
    if eps == 0:
        half_width = m.window if half_width is None else half_width
        sample_count = cfg.discretization.sample_count if sample_count is None else sample_count
        h = grid_nodes(half_width, sample_count)
        gamma, lam, deviation = 0.0, 1.0, 0.0
        reproduction = np.zeros((4, h.size))
    else:
        if V is None:
            raise ConfigurationError("a corrector is required when eps > 0")
        solver = cfg.solver
        h = V.nodes
        half_width = V.half_width
        gamma = solve_gamma(
            V, m, eps, solver.alpha, rule, solver.j_tol, solver.gamma_tol, solver.eps_cap
        )
        moments = tilted_moments(V, gamma, eps, h, rule)
        lam = float(moments.I[V.center])
        report = np.abs(h) <= half_width / 2
        deviation = float(np.max(np.abs(moments.I[report] - 1)))
        log_I = np.log(moments.I / lam)
        log_I[V.center] = 0.0
        reproduction = np.array([log_I, *moments.log_derivatives])
    Lambda = GridFunction(half_width, *(_mortality_part(m, h, lam) - reproduction))
    output = series_S(Lambda, cfg.solver.series_tol)
    return HStep(output, gamma, lam, deviation)


def apply_H(
    V: Optional[GridFunction],
    m: MortalityModel,
    eps: float,
    cfg: Optional[Config] = None,
    rule: Optional[QuadratureRule] = None,
) -> GridFunction:
    """The mapping H(V)(h) = sum_k 2^k Gamma(2^-k h).

    :param V: corrector in E0
    :type V: Optional[GridFunction]
    :param m: mortality model
    :type m: MortalityModel
    :param eps: deviation scale, 0 for the limit problem
    :type eps: float
    :param cfg: configuration, defaults to Config()
    :type cfg: Optional[Config]
    :param rule: quadrature rule, defaults to the configured order
    :type rule: Optional[QuadratureRule]
    :return: H(V) on the grid of V
    :rtype: GridFunction
    """
    cfg = Config() if cfg is None else cfg
    if rule is None:
        rule = QuadratureRule(cfg.discretization.quad_order)
    return h_step(V, m, eps, cfg, rule).output


@dataclass
class StationarySolution:
    """Converged Picard solve in coordinates translated to z0."""

    eps: float
    lambda_eps: float
    gamma_eps: float
    V: GridFunction
    model: MortalityModel
    iterations: int
    residual: float
    contraction_trace: List[float] = field(default_factory=list)
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def U(self) -> GridFunction:
        """U = gamma h + V."""
        V = self.V
        return GridFunction(
            V.half_width,
            self.gamma_eps * V.nodes + V.values,
            self.gamma_eps + V.deriv1,
            V.deriv2,
            V.deriv3,
        )

    @property
    def lambda_raw(self) -> float:
        """Growth rate of the untranslated problem, lambda - m(z0)."""
        return self.lambda_eps - self.model.m_at_minimum

    @property
    def critical_point(self) -> float:
        return self.model.critical_point

    def as_dict(self) -> Dict[str, Any]:
        return dict(
            eps=self.eps,
            model=self.model.name,
            critical_point=self.critical_point,
            iterations=self.iterations,
            residual=self.residual,
            contraction_trace=self.contraction_trace,
            **self.diagnostics,
        )


def picard_solve(
    m: MortalityModel,
    eps: float,
    cfg: Optional[Config] = None,
    init: Optional[GridFunction] = None,
    rule: Optional[QuadratureRule] = None,
) -> StationarySolution:
    """Iterate V <- H(V) from the limit corrector until the residual is small.

    :param m: mortality model
    :type m: MortalityModel
    :param eps: deviation scale
    :type eps: float
    :param cfg: configuration, defaults to Config()
    :type cfg: Optional[Config]
    :param init: starting corrector, defaults to the limit corrector
    :type init: Optional[GridFunction]
    :param rule: quadrature rule, defaults to the configured order
    :type rule: Optional[QuadratureRule]
    :return: stationary solution
    :rtype: StationarySolution
    :raises EpsilonTooLarge: if the iterates leave the invariant ball or diverge
    :raises NumericalError: if max_iter is reached
    """
    cfg = Config() if cfg is None else cfg
    solver = cfg.solver
    check_eps(eps, solver.eps_cap)
    rule = QuadratureRule(cfg.discretization.quad_order) if rule is None else rule
    half_width = cfg.half_width(m)
    sample_count = cfg.discretization.sample_count
    report = validate_mortality(m, solver.alpha, half_width, sample_count)
    if not report.compatible:
        raise CompatibilityError(
            f"compatibility violated: m(z0)={report.m_at_minimum:.6g} is not below "
            f"1 + inf m = {1 + report.inf_m:.6g}",
            "mortality",
        )
    radius = invariant_radius(report.C_m, solver.alpha)

    if init is None:
        V = h_step(None, m, 0.0, cfg, rule, half_width, sample_count).output
    else:
        V = init
    trace: List[float] = []
    norm_trace: List[float] = []
    curvature_trace: List[float] = []
    logging.info(f"Picard iteration at eps={eps} for {m} (R0={radius:.4g})")
    for iteration in range(1, solver.max_iter + 1):
        norm = alpha_norm(V, solver.alpha)
        if norm > radius + solver.ball_slack:
            raise EpsilonTooLarge(
                f"epsilon above contraction threshold: |V|={norm:.4g} left the "
                f"invariant ball of radius {radius:.4g}",
                "ball",
            )
        step = h_step(V, m, eps, cfg, rule)
        residual = alpha_norm(step.output - V, solver.alpha)
        trace.append(residual)
        excess = alpha_norm(step.output, solver.alpha) - report.C_m
        norm_trace.append(excess / norm if norm > 0 else float("nan"))
        curvature_trace.append(step.output.at_origin(2))
        logging.info(f"iteration {iteration}: residual {residual:.3e}")
        if residual <= solver.picard_tol:
            ratios = [b / a for a, b in zip(trace[:-1], trace[1:]) if a > 0]
            w1, w2 = weighted_w_sup(
                V, step.gamma, eps, solver.alpha, cfg.sweep.region, rule
            )
            logging.debug(f"{V.out_of_window} out-of-window evaluations of V")
            return StationarySolution(
                eps=eps,
                lambda_eps=step.lam,
                gamma_eps=step.gamma,
                V=V,
                model=m,
                iterations=iteration,
                residual=residual,
                contraction_trace=ratios,
                diagnostics=dict(
                    lambda_raw=step.lam - m.m_at_minimum,
                    kappa=kappa(solver.alpha),
                    R0=radius,
                    C_m=report.C_m,
                    residual_trace=trace,
                    norm_trace=norm_trace,
                    i_deviation=step.i_deviation,
                    w1_weighted=w1,
                    w2_weighted=w2,
                    curvature_trace=curvature_trace,
                    out_of_window=V.out_of_window,
                ),
            )
        growing = len(trace) >= 4 and trace[-1] > trace[-2] > trace[-3] > trace[-4]
        # Fluctuations at the rounding floor are not divergence
        if growing and trace[-1] > ROUNDING_FLOOR * solver.picard_tol:
            raise EpsilonTooLarge(
                f"epsilon above contraction threshold: residual grew three times "
                f"in a row at eps={eps}",
                "contraction",
            )
        V = step.output
    raise NumericalError(
        f"no convergence after {solver.max_iter} iterations "
        f"(last residual {trace[-1]:.3e})",
        "picard",
        trace,
    )


def reconstruct_F(sol: StationarySolution, grid: DensityGrid) -> DensityState:
    """Density exp(-(z - z0)^2 / 2eps^2 - U(z - z0)), unit mass.

    :param sol: stationary solution
    :type sol: StationarySolution
    :param grid: density grid, raw trait coordinates
    :type grid: DensityGrid
    :return: stationary density
    :rtype: DensityState
    """
    h = grid.nodes - sol.critical_point
    exponent = -(h ** 2) / (2 * sol.eps ** 2) - sol.U.eval(h)
    values = np.exp(exponent - np.max(exponent))
    return DensityState(grid, values, sol.eps).normalized()


def stationarity_residual(
    F: DensityState, lam: float, m: MortalityModel, eps: float
) -> float:
    """Relative L1 residual of lambda F + m F = B(F).

    :param F: nonnegative density with positive mass
    :type F: DensityState
    :param lam: growth rate, untranslated
    :type lam: float
    :param m: mortality model, raw coordinates
    :type m: MortalityModel
    :param eps: deviation scale
    :type eps: float
    :return: |lambda F + m F - B(F)|_1 / |F|_1
    :rtype: float
    """
    offspring = apply_B(F, eps).values
    residual = (lam + m(F.nodes)) * F.values - offspring
    return float(
        trapezoid(np.abs(residual), dx=F.step) / trapezoid(np.abs(F.values), dx=F.step)
    )
