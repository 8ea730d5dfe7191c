"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

from functools import lru_cache

import numpy as np  # type: ignore

from midparent.config import Config, DiscretizationConfig
from midparent.density import DensityGrid, DensityState
from midparent.errors import EpsilonTooLarge, SeriesError
from midparent.fixed_point import (
    StationarySolution,
    apply_H,
    eval_Gamma,
    invariant_radius,
    kappa,
    picard_solve,
    reconstruct_F,
    series_length,
    series_S,
    stationarity_residual,
)
from midparent.gamma import eval_J
from midparent.grid import GridFunction, alpha_norm, build_grid_function, grid_nodes
from midparent.limit import lambda0, v0_series
from midparent.mortality import MortalityModel, check_E0_membership
from midparent.operator import eval_I, eval_W

SMALL = Config(discretization=DiscretizationConfig(half_width=4.0, sample_count=129))
PRESETS = ("quadratic", "cubic_perturbed")


@lru_cache(maxsize=None)
def quadratic_solution(eps: float = 0.1) -> StationarySolution:
    return picard_solve(MortalityModel.from_preset("quadratic"), eps, SMALL)


@lru_cache(maxsize=None)
def default_solution(preset: str, eps: float) -> StationarySolution:
    return picard_solve(MortalityModel.from_preset(preset), eps, Config())


def monomial(power: int) -> GridFunction:
    z = grid_nodes(4.0, 129)
    derivatives = [z ** power]
    for k in range(1, 4):
        coefficient = np.prod(np.arange(power, power - k, -1))
        derivatives.append(coefficient * z ** max(power - k, 0))
    return GridFunction(4.0, *derivatives)


def test_kappa():
    assert np.isclose(kappa(0), 2 / 3)
    assert abs(kappa(0.4) - 0.98453) < 1e-5
    assert kappa(0.41) < 1 < kappa(0.42)
    assert np.isclose(invariant_radius(1.0, 0), 6)
    try:
        kappa(1.0)
    except AssertionError:
        pass
    else:
        raise AssertionError("alpha must be below 1")


def test_series_S_monomials():
    square = series_S(monomial(2))
    assert abs(square.eval(3.0) - 18) < 1e-9
    assert np.allclose(square.values, 2 * square.nodes ** 2, atol=1e-9)
    assert np.allclose(square.deriv1, 4 * square.nodes, atol=1e-9)
    assert np.allclose(square.deriv2, 4, atol=1e-9)

    cube = series_S(monomial(3))
    assert abs(cube.eval(1.0) - 4 / 3) < 1e-9
    assert np.allclose(cube.deriv3, 8, atol=1e-9)

    try:
        series_S(monomial(1))
    except SeriesError as e:
        assert "nonzero slope at origin" in str(e)
    else:
        raise AssertionError("the series diverges for a nonzero slope")


def test_series_S_log():
    Lambda = build_grid_function(lambda h: np.log1p(h ** 2 / 2), 4.0, 257)
    assert abs(series_S(Lambda).eval(1.0) - 0.8888) < 1e-3


def test_series_S_rounding():
    Lambda = build_grid_function(lambda h: np.log1p(h ** 2 / 2), 6.0, 513)
    assert series_length(Lambda) == 7
    assert series_length(monomial(2)) == 5
    S = series_S(Lambda)
    assert np.max(np.abs(S.values - S.values[::-1])) < 1e-12
    assert np.max(np.abs(S.deriv1 + S.deriv1[::-1])) < 1e-12
    assert abs(S.at_origin(1)) < 1e-14

    offsets = np.arange(-128, 129)
    full, half = 256 + 2 * offsets, 256 + offsets
    defect = S.values[full] - 2 * S.values[half] - Lambda.values[full]
    assert np.max(np.abs(defect)) < 1e-12


def test_series_S_limit_corrector_even():
    model = MortalityModel.from_preset("quadratic")
    V = v0_series(model, 6.0, 513)
    assert np.max(np.abs(V.values - V.values[::-1])) < 1e-12
    assert abs(eval_J(0.0, V, 0.1)) < 1e-9


def test_eval_Gamma():
    model = MortalityModel.from_preset("quadratic")
    V = v0_series(model, 4.0, 129)
    assert eval_Gamma(V, model, 0.0, 0.1, 0.0) == (0.0, 0.0)

    Gm, GI = eval_Gamma(V, model, 0.0, 0.05, 1.0)
    I0 = eval_I(V, 0.0, 0.05, 0.0)
    I1 = eval_I(V, 0.0, 0.05, 1.0)
    assert np.isclose(Gm - GI, np.log((I0 + 0.5) / I1))


def test_apply_H_limit():
    model = MortalityModel.from_preset("quadratic")
    V0 = v0_series(model, 6.0, 513)
    assert np.allclose(apply_H(None, model, 0.0).values, V0.values, atol=1e-12)


def test_apply_H_structure():
    model = MortalityModel.from_preset("cubic_perturbed")
    cfg = Config(discretization=DiscretizationConfig(half_width=3.0, sample_count=129))
    V = v0_series(model, 3.0, 129)
    H = apply_H(V, model, 0.1, cfg)
    assert abs(H.at_origin(0)) <= 1e-10
    assert abs(H.at_origin(1)) <= 1e-7
    assert H.at_origin(2) >= model.mu0 - 1e-8


def test_picard_solve_quadratic():
    sol = quadratic_solution()
    assert sol.residual <= 1e-10
    assert sol.iterations >= 1
    assert abs(sol.lambda_eps - 1) <= 0.1
    assert abs(sol.gamma_eps) < 1e-8
    assert sol.lambda_raw == sol.lambda_eps
    assert check_E0_membership(sol.V, sol.model)
    assert abs(sol.lambda_eps - eval_I(sol.V, sol.gamma_eps, 0.1, 0.0)) < 1e-12
    assert abs(eval_W(sol.V, sol.gamma_eps, 0.1, 0.0, 1)) < 1e-9
    assert all(ratio < 1 for ratio in sol.contraction_trace)
    assert np.allclose(sol.U.values, sol.V.values + sol.gamma_eps * sol.V.nodes)
    assert sol.diagnostics["R0"] > alpha_norm(sol.V, 0.4) - 1
    for key in ("kappa", "C_m", "norm_trace", "i_deviation", "w1_weighted"):
        assert key in sol.diagnostics


def test_picard_solve_perturbed_start():
    sol = quadratic_solution()
    bump = build_grid_function(lambda z: 0.1 * z ** 2 * np.exp(-(z ** 2)), 4.0, 129)
    again = picard_solve(sol.model, 0.1, SMALL, init=sol.V + bump)
    assert alpha_norm(again.V - sol.V, 0.4) < 1e-6


def test_picard_solve_eps_cap():
    try:
        picard_solve(MortalityModel.from_preset("quadratic"), 0.9, SMALL)
    except EpsilonTooLarge as e:
        assert "epsilon above contraction threshold" in str(e)
    else:
        raise AssertionError("eps above the cap must be rejected")


def test_reconstruct_F_gaussian():
    model = MortalityModel.from_preset("quadratic")
    z = grid_nodes(4.0, 129)
    zero = GridFunction(4.0, *np.zeros((4, z.size)))
    sol = StationarySolution(0.1, 1.0, 0.0, zero, model, 0, 0.0)
    grid = DensityGrid(3.0, 2048)
    F = reconstruct_F(sol, grid)
    assert abs(F.mass - 1) < 1e-12
    assert F.l1_distance(DensityState.gaussian(grid, 0.1).normalized()) < 1e-10


def test_stationarity_residual():
    grid = DensityGrid(3.0, 2048)
    F = DensityState.gaussian(grid, 0.1)
    flat = MortalityModel.constant(0.0)
    assert stationarity_residual(F, 1.0, flat, 0.1) < 1e-6
    assert abs(stationarity_residual(F, 1.5, flat, 0.1) - 0.5) < 1e-3


def test_reconstruct_F_stationary():
    sol = quadratic_solution()
    grid = DensityGrid(3.0, 2048)
    F = reconstruct_F(sol, grid)
    assert stationarity_residual(F, sol.lambda_raw, sol.model, 0.1) < 1e-4
    assert abs(F.mode) < 0.05


def test_picard_solve_default_grid():
    for preset in PRESETS:
        for eps in (0.1, 0.05):
            sol = default_solution(preset, eps)
            assert sol.V.sample_count == 513
            assert sol.residual <= 1e-10
            assert len(sol.contraction_trace) >= 1
            assert all(ratio < 0.95 for ratio in sol.contraction_trace)
            assert abs(sol.V.at_origin(0)) <= 1e-10
            assert abs(sol.V.at_origin(1)) <= 1e-7
            assert sol.V.at_origin(2) >= sol.model.mu0 - 1e-8
            assert abs(eval_W(sol.V, sol.gamma_eps, eps, 0.0, 1)) < 1e-9
    assert abs(default_solution("quadratic", 0.1).gamma_eps) < 1e-10


def test_reconstruct_F_default_grid():
    sol = default_solution("quadratic", 0.1)
    grid = DensityGrid(3.0, 1024)
    F = reconstruct_F(sol, grid)
    assert stationarity_residual(F, sol.lambda_raw, sol.model, 0.1) < 1e-4


def test_picard_solve_double_well():
    for minimum in MortalityModel.MINIMUM:
        model = MortalityModel.from_preset("double_well", minimum)
        sol = picard_solve(model, 0.1, Config())
        assert sol.residual <= 1e-10
        assert abs(sol.lambda_raw - lambda0(model)) < 0.05
