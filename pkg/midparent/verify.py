"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: deterministic invariant suite for a configuration
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np  # type: ignore

from midparent.config import Config
from midparent.density import DensityGrid, DensityState
from midparent.errors import SolverError
from midparent.fixed_point import kappa
from midparent.gamma import GammaBracket, JFunctional, is_monotone, solve_gamma
from midparent.limit import pu0_residual, v0_series
from midparent.mortality import MortalityModel
from midparent.operator import apply_B, eval_W
from midparent.quadrature import QuadratureRule, gauss_1d, gauss_q2d, gaussian_moment

MOMENT_DEGREE = 9
MOMENT_TOL = 1e-10
B_INVARIANCE_EPS = (0.05, 0.1, 0.2)
B_INVARIANCE_TOL = 1e-6
B_GRID = DensityGrid(6.0, 4096)


@dataclass(frozen=True)
class VerifyItem:
    name: str
    passed: bool
    detail: str


Check = Callable[[Config], Tuple[bool, str]]


def check_moments(cfg: Config) -> Tuple[bool, str]:
    rule = QuadratureRule(cfg.discretization.quad_order)
    worst = 0.0
    for a in range(MOMENT_DEGREE + 1):
        for b in range(MOMENT_DEGREE + 1 - a):
            exact = gaussian_moment(a, b)
            value = gauss_q2d(lambda y1, y2: y1 ** a * y2 ** b, rule)
            worst = max(worst, abs(value - exact) / max(1.0, abs(exact)))
    for a in range(MOMENT_DEGREE + 1):
        exact = 0.0 if a % 2 else float(np.prod(np.arange(a - 1, 0, -2)))
        worst = max(worst, abs(gauss_1d(lambda y: y ** a, rule) - exact) / max(1.0, exact))
    return worst <= MOMENT_TOL, f"max relative error {worst:.2e} up to degree {MOMENT_DEGREE}"


def check_gaussian_invariance(cfg: Config) -> Tuple[bool, str]:
    errors = []
    for eps in B_INVARIANCE_EPS:
        f = DensityState.gaussian(B_GRID, eps)
        errors.append(apply_B(f, eps).l1_distance(f))
    worst = max(errors)
    detail = ", ".join(f"eps={e}: {d:.1e}" for e, d in zip(B_INVARIANCE_EPS, errors))
    return worst <= B_INVARIANCE_TOL, detail


def check_mass(cfg: Config) -> Tuple[bool, str]:
    eps = cfg.solver.eps
    grid = DensityGrid(max(B_GRID.half_width, 24 * eps), B_GRID.count)
    f = DensityState.gaussian(grid, eps, -0.5 * eps, 2 * eps ** 2, 0.3)
    drift = abs(apply_B(f, eps).mass - f.mass) / f.mass
    return drift <= 1e-10, f"relative mass drift {drift:.1e}"


def check_J_symmetry(cfg: Config) -> Tuple[bool, str]:
    m = MortalityModel.from_preset(MortalityModel.PRESET.QUADRATIC)
    V = v0_series(m, m.window, cfg.discretization.sample_count, cfg.solver.series_tol)
    rule = QuadratureRule(cfg.discretization.quad_order)
    J = JFunctional(V, cfg.solver.eps, rule)
    value = abs(J(0.0))
    monotone = is_monotone(J, GammaBracket.build(V, m, cfg.solver.alpha))
    return (
        value <= 1e-10 and monotone,
        f"|J(0)|={value:.1e} for even m, monotone={monotone}",
    )


def check_gamma_reflection(cfg: Config) -> Tuple[bool, str]:
    m = MortalityModel.from_preset(MortalityModel.PRESET.CUBIC_PERTURBED)
    solver = cfg.solver
    rule = QuadratureRule(cfg.discretization.quad_order)
    gammas = []
    for model in (m, m.reflected()):
        V = v0_series(model, model.window, cfg.discretization.sample_count, solver.series_tol)
        gammas.append(
            solve_gamma(V, model, solver.eps, solver.alpha, rule, solver.j_tol, solver.gamma_tol)
        )
    gap = abs(gammas[0] + gammas[1])
    return gap <= 1e-8, f"gamma={gammas[0]:.8g}, reflected={gammas[1]:.8g}"


def check_slope_condition(cfg: Config) -> Tuple[bool, str]:
    m = MortalityModel.from_preset(MortalityModel.PRESET.CUBIC_PERTURBED)
    solver = cfg.solver
    rule = QuadratureRule(cfg.discretization.quad_order)
    V = v0_series(m, m.window, cfg.discretization.sample_count, solver.series_tol)
    gamma = solve_gamma(V, m, solver.eps, solver.alpha, rule, solver.j_tol, solver.gamma_tol)
    value = abs(eval_W(V, gamma, solver.eps, 0.0, 1, rule))
    return value <= 1e-9, f"|W1(0)|={value:.1e} at gamma={gamma:.8g}"


def check_pu0(cfg: Config) -> Tuple[bool, str]:
    tol = cfg.solver.series_tol
    residuals = {
        preset.label: pu0_residual(
            MortalityModel.from_preset(preset), None, cfg.discretization.sample_count, tol
        )
        for preset in MortalityModel.PRESET
    }
    detail = ", ".join(f"{k}: {v:.1e}" for k, v in residuals.items())
    return max(residuals.values()) <= 10 * tol, detail


def check_v0_reflection(cfg: Config) -> Tuple[bool, str]:
    m = MortalityModel.from_preset(MortalityModel.PRESET.DOUBLE_WELL)
    count, tol = cfg.discretization.sample_count, cfg.solver.series_tol
    direct = v0_series(m.reflected(), m.window, count, tol)
    mirrored = v0_series(m, m.window, count, tol).reflected()
    gap = float(np.max(np.abs(direct.values - mirrored.values)))
    return gap <= 1e-10, f"max gap {gap:.1e}"


def check_kappa(cfg: Config) -> Tuple[bool, str]:
    value = kappa(cfg.solver.alpha)
    return value < 1, f"kappa({cfg.solver.alpha})={value:.6g}"


CHECKS: List[Tuple[str, Check]] = [
    ("quadrature moments", check_moments),
    ("Gaussian invariance of B", check_gaussian_invariance),
    ("mass conservation of B", check_mass),
    ("J symmetry and monotonicity", check_J_symmetry),
    ("gamma reflection", check_gamma_reflection),
    ("slope condition W1(0)=0", check_slope_condition),
    ("PU0 residual", check_pu0),
    ("V0 reflection", check_v0_reflection),
    ("contraction constant", check_kappa),
]


def run_verify(cfg: Config) -> List[VerifyItem]:
    """Run every check; a check raising a solver error counts as failed.

    :param cfg: configuration providing eps, alpha and discretization
    :type cfg: Config
    :return: one item per check
    :rtype: List[VerifyItem]
    """
    items = []
    for name, check in CHECKS:
        try:
            passed, detail = check(cfg)
        except SolverError as e:
            passed, detail = False, str(e)
        logging.info(f"{name}: {'pass' if passed else 'FAIL'} ({detail})")
        items.append(VerifyItem(name, bool(passed), detail))
    return items
