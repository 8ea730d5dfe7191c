"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

import numpy as np  # type: ignore

from midparent.config import Config, MarchConfig
from midparent.density import DensityGrid, DensityState
from midparent.errors import ConfigurationError
from midparent.fixed_point import picard_solve, reconstruct_F, stationarity_residual
from midparent.march import (
    dt_max,
    equilibrium_certificate,
    run_to_equilibrium,
    step,
)
from midparent.limit import lambda0
from midparent.mortality import MortalityModel

GRID = DensityGrid(3.0, 1024)


def test_dt_max():
    quadratic = MortalityModel.from_preset("quadratic")
    assert np.isclose(dt_max(quadratic, GRID), 0.2 / 5.5)
    assert dt_max(MortalityModel.constant(-0.5), GRID) == 0.2
    assert np.isclose(dt_max(MortalityModel.constant(1.0), GRID), 0.1)


def test_step_neutral():
    f = DensityState.gaussian(GRID, 0.1)
    flat = MortalityModel.constant(0.0)
    g, lambda_hat = step(f, flat, 0.1, 0.1)
    assert abs(g.mass - 1) < 1e-12
    assert g.l1_distance(f.normalized()) < 1e-6
    assert abs(lambda_hat - 1) < 1e-10

    _, lambda_hat = step(f, MortalityModel.constant(0.3), 0.1, 0.1)
    assert abs(lambda_hat - 0.7) < 1e-10


def test_step_dt_bound():
    f = DensityState.gaussian(GRID, 0.1)
    quadratic = MortalityModel.from_preset("quadratic")
    try:
        step(f, quadratic, 0.1, 2 * dt_max(quadratic, GRID))
    except ConfigurationError as e:
        assert "stability bound" in str(e)
    else:
        raise AssertionError("steps above dt_max must be rejected")


def test_step_mass():
    f = DensityState.gaussian(GRID, 0.1, center=0.4, mass=3.0)
    quadratic = MortalityModel.from_preset("quadratic")
    g, lambda_hat = step(f, quadratic, 0.1, dt_max(quadratic, GRID))
    assert abs(g.mass - 1) < 1e-12
    assert lambda_hat < 1
    assert np.all(g.values >= 0)


def test_run_to_equilibrium_budget():
    f = DensityState.gaussian(GRID, 0.1, center=0.5)
    quadratic = MortalityModel.from_preset("quadratic")
    result = run_to_equilibrium(f, quadratic, 0.1, MarchConfig(max_steps=3))
    assert not result.converged
    assert result.steps == 3
    assert len(result.trace) == 1
    assert np.isclose(result.trace[-1][0], 3 * dt_max(quadratic, GRID))


def test_run_to_equilibrium_quadratic():
    model = MortalityModel.from_preset("quadratic")
    result = run_to_equilibrium(DensityState.gaussian(GRID, 0.1), model, 0.1)
    assert result.converged
    assert result.trace[-1][2] <= MarchConfig().equil_tol
    assert abs(result.mean) < 1e-4
    assert equilibrium_certificate(result.state, result.lambda_hat, model, 0.1) < 1e-5

    cfg = Config()
    sol = picard_solve(model, 0.1, cfg)
    assert abs(result.lambda_hat - sol.lambda_raw) < 1e-3
    F = reconstruct_F(sol, GRID)
    assert result.state.l1_distance(F) < 1e-3
    assert stationarity_residual(F, sol.lambda_raw, model, 0.1) < 1e-4


def test_run_to_equilibrium_double_well():
    model = MortalityModel.from_preset("double_well")
    grid = DensityGrid(2.5, 1024)
    cfg = MarchConfig(max_steps=200000)
    left, right = (
        run_to_equilibrium(DensityState.gaussian(grid, 0.1, center=c), model, 0.1, cfg)
        for c in (-1.0, 1.0)
    )
    assert left.converged and right.converged
    assert abs(left.mean + 1.03) < 0.05
    assert abs(right.mean - 0.967) < 0.05
    assert left.state.l1_distance(right.state) >= 0.5
    assert left.lambda_hat > right.lambda_hat
    for result in (left, right):
        certificate = equilibrium_certificate(result.state, result.lambda_hat, model, 0.1)
        assert certificate < 1e-5

    for result, minimum in zip((left, right), MortalityModel.MINIMUM):
        local = MortalityModel.from_preset("double_well", minimum)
        assert abs(result.lambda_hat - lambda0(local)) < 0.05
