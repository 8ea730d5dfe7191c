"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

import numpy as np  # type: ignore

from midparent.errors import EpsilonTooLarge, InputError
from midparent.gamma import (
    GammaBracket,
    JFunctional,
    check_eps,
    d_eps,
    eval_J,
    heuristic_gamma,
    is_monotone,
    solve_gamma,
)
from midparent.grid import GridFunction, build_grid_function, grid_nodes
from midparent.limit import v0_series
from midparent.mortality import MortalityModel


def test_check_eps():
    check_eps(0.1)
    check_eps(0.5)
    try:
        check_eps(0.9)
    except EpsilonTooLarge as e:
        assert "epsilon above contraction threshold" in str(e)
        assert e.stage == "cap"
    else:
        raise AssertionError("eps above the cap must be rejected")
    try:
        check_eps(-0.1)
    except InputError:
        pass
    else:
        raise AssertionError("eps must be positive")


def test_d_eps():
    z = grid_nodes(4.0, 129)
    square = GridFunction(4.0, z ** 2, 2 * z, np.full_like(z, 2.0), np.zeros_like(z))
    y1 = np.array([0.5, -1.0, 2.0])
    y2 = np.array([1.0, 0.3, -2.0])
    eps = 0.1
    expected = -0.5 * eps ** 2 * (y1 ** 2 + y2 ** 2)
    assert np.allclose(d_eps(square, y1, y2, 0.0, eps), expected, atol=1e-13)

    zbar = 1.2
    expected = -eps * zbar * (y1 + y2) + expected
    assert np.allclose(d_eps(square, y1, y2, 2 * zbar, eps), expected, atol=1e-12)

    column = d_eps(square, y1, y2, np.array([[0.0], [2.4]]), eps, 1)
    assert column.shape == (2, 3)
    assert np.allclose(column[0], -eps * (y1 + y2))


def test_J_symmetry():
    model = MortalityModel.from_preset("quadratic")
    V = v0_series(model, 4.0, 129)
    assert abs(eval_J(0.0, V, 0.1)) < 1e-10
    J = JFunctional(V, 0.1)
    bracket = GammaBracket.build(V, model, 0.4)
    assert bracket.radius >= bracket.norm_proxy >= 1
    assert J(-bracket.radius) < 0 < J(bracket.radius)
    assert is_monotone(J, bracket)
    assert abs(solve_gamma(V, model, 0.1, 0.4)) < 1e-8


def test_solve_gamma_cubic():
    model = MortalityModel.from_preset("cubic_perturbed")
    V = v0_series(model, 3.0, 129)
    assert abs(heuristic_gamma(V) - 0.5) < 1e-8

    gamma = solve_gamma(V, model, 0.1, 0.4)
    assert abs(gamma - 0.5) < 0.2
    assert abs(eval_J(gamma, V, 0.1)) < 1e-10

    reflected = model.reflected()
    mirrored = solve_gamma(v0_series(reflected, 3.0, 129), reflected, 0.1, 0.4)
    assert abs(gamma + mirrored) < 1e-8


def test_solve_gamma_membership():
    model = MortalityModel.from_preset("quadratic")
    V = v0_series(model, 4.0, 129)
    shifted = build_grid_function(V.values + 1, 4.0, 129)
    try:
        solve_gamma(shifted, model, 0.1, 0.4)
    except InputError as e:
        assert "value at origin" in str(e)
    else:
        raise AssertionError("correctors outside E0 must be rejected")

    try:
        solve_gamma(V, model, 0.9, 0.4)
    except EpsilonTooLarge:
        pass
    else:
        raise AssertionError("eps above the cap must be rejected")


def polynomial_corrector(half_width: float = 3.0, sample_count: int = 257) -> GridFunction:
    z = grid_nodes(half_width, sample_count)
    return GridFunction(
        half_width, z ** 2 / 2 + z ** 3 / 6, z + z ** 2 / 2, 1 + z, np.ones_like(z)
    )


def test_solve_gamma_heuristic_limit():
    model = MortalityModel.from_preset("cubic_perturbed")
    V = polynomial_corrector()
    assert heuristic_gamma(V) == 0.75
    errors = np.array(
        [abs(solve_gamma(V, model, eps, 0.4) - 0.75) for eps in (0.1, 0.05, 0.025)]
    )
    assert errors[-1] <= 1e-3
    assert np.all(np.log2(errors[:-1] / errors[1:]) >= 1)


def test_J_small_eps():
    V = polynomial_corrector()
    at_zero = {eps: eval_J(0.0, V, eps) for eps in (0.05, 0.025)}
    assert abs(at_zero[0.025] + 0.375) < 0.01
    extrapolated = (4 * at_zero[0.025] - at_zero[0.05]) / 3
    assert abs(extrapolated + 0.375) < 1e-3

    J, step = JFunctional(V, 0.025), 1e-3
    slope = (J(step) - J(-step)) / (2 * step)
    assert abs(slope - 0.5) < 0.01
    assert abs(-J(0.0) / slope - heuristic_gamma(V)) < 0.02
