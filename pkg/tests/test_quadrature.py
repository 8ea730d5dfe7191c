"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

import numpy as np  # type: ignore

from midparent.errors import ConfigurationError, NumericalError
from midparent.quadrature import (
    QuadratureRule,
    gauss_1d,
    gauss_q2d,
    gaussian_moment,
    q_form,
)


def test_q_form():
    assert q_form(1.0, 1.0) == 2.0
    assert q_form(1.0, -1.0) == 1.0
    assert q_form(0.0, 2.0) == 3.0


def test_gaussian_moment():
    assert gaussian_moment(0, 0) == 1
    assert np.isclose(gaussian_moment(2, 0), 0.75)
    assert np.isclose(gaussian_moment(1, 1), -0.25)
    assert np.isclose(gaussian_moment(4, 0), 3 * 0.75 ** 2)
    assert gaussian_moment(3, 0) == 0


def test_QuadratureRule():
    rule = QuadratureRule()
    assert rule.order == 24
    assert rule.y1.size == 24 ** 2
    assert np.isclose(rule.weights2d.sum(), 1)
    assert np.isclose(rule.w.sum(), 1)
    assert np.allclose(np.sort(rule.y), -np.sort(rule.y)[::-1])

    rule.order = 8
    assert rule.y.size == 8

    try:
        QuadratureRule(0)
    except ConfigurationError:
        pass
    else:
        raise AssertionError("order must be positive")


def test_gauss_q2d_moments():
    rule = QuadratureRule(24)
    for a in range(10):
        for b in range(10 - a):
            value = gauss_q2d(lambda y1, y2: y1 ** a * y2 ** b, rule)
            exact = gaussian_moment(a, b)
            assert abs(value - exact) <= 1e-10 * max(1, abs(exact)), (a, b)

    coarse = QuadratureRule(2)
    assert abs(gauss_q2d(lambda y1, y2: y1 ** 4, coarse) - gaussian_moment(4, 0)) > 1e-3


def test_gauss_1d():
    rule = QuadratureRule()
    assert np.isclose(gauss_1d(lambda y: np.ones_like(y), rule), 1)
    assert abs(gauss_1d(lambda y: y ** 2, rule) - 1) < 1e-12
    assert abs(gauss_1d(lambda y: y ** 6, rule) - 15) < 1e-10
    assert np.isclose(gauss_1d(lambda y: np.exp(y), rule), np.exp(0.5))


def test_gauss_nonfinite():
    rule = QuadratureRule()
    try:
        gauss_1d(lambda y: np.where(y > 5, np.inf, 0.0), rule)
    except NumericalError as e:
        assert "non-finite" in str(e)
    else:
        raise AssertionError("non-finite integrands must be reported")
