"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: Gauss-Hermite rules for the exp(-Q) and exp(-y^2/2) weights
"""

import math
from functools import lru_cache
from typing import Callable

import numpy as np  # type: ignore

from midparent.const import DEFAULT_QUAD_ORDER
from midparent.errors import ConfigurationError, NumericalError


def q_form(y1, y2):
    """Quadratic form 1/2 y1 y2 + 3/4 (y1^2 + y2^2).

    :param y1: first variable
    :type y1: Union[float, np.ndarray]
    :param y2: second variable
    :type y2: Union[float, np.ndarray]
    :return: Q(y1, y2)
    :rtype: Union[float, np.ndarray]
    """
    return 0.5 * y1 * y2 + 0.75 * (y1 ** 2 + y2 ** 2)


class QuadratureRule:
    """Tensor Gauss-Hermite rule.

    The bivariate rule works in u = (y1+y2)/sqrt2, v = (y1-y2)/sqrt2, where
    Q = u^2 + v^2/2. Both rules are normalized so that their weights sum to 1,
    i.e., they integrate against the probability densities proportional to
    exp(-Q) and exp(-y^2/2).
    """

    __order: int = DEFAULT_QUAD_ORDER
    _nodes1d: np.ndarray
    _weights1d: np.ndarray

    def __init__(self, order: int = DEFAULT_QUAD_ORDER):
        """Initialize QuadratureRule.

        :param order: nodes per axis, defaults to 24
        :type order: int
        """
        super().__init__()
        self.order = order

    @property
    def order(self) -> int:
        return self.__order

    @order.setter
    def order(self, order: int) -> None:
        if int(order) < 1:
            raise ConfigurationError(f"quadrature order must be >= 1, got {order}")
        self.__order = int(order)
        self._nodes1d, self._weights1d = np.polynomial.hermite.hermgauss(self.__order)

    @property
    def nodes1d(self) -> np.ndarray:
        """Raw Gauss-Hermite nodes, for the exp(-x^2) weight."""
        return self._nodes1d

    @property
    def weights1d(self) -> np.ndarray:
        return self._weights1d

    @property
    def y(self) -> np.ndarray:
        """Nodes of the standard normal rule."""
        return np.sqrt(2) * self._nodes1d

    @property
    def w(self) -> np.ndarray:
        return self._weights1d / np.sqrt(np.pi)

    @property
    def y1(self) -> np.ndarray:
        return _tensor(self.__order)[0]

    @property
    def y2(self) -> np.ndarray:
        return _tensor(self.__order)[1]

    @property
    def weights2d(self) -> np.ndarray:
        return _tensor(self.__order)[2]

    @property
    def reach(self) -> float:
        """Largest |y1| or |y2| over the bivariate nodes."""
        return float(np.max(np.abs(self.y1)))

    def __repr__(self) -> str:
        return f"QuadratureRule(order={self.__order})"


@lru_cache(maxsize=8)
def _tensor(order: int):
    x, w = np.polynomial.hermite.hermgauss(order)
    u, v = np.meshgrid(x, np.sqrt(2) * x, indexing="ij")
    weights = np.outer(w, np.sqrt(2) * w) / (np.sqrt(2) * np.pi)
    y1 = ((u + v) / np.sqrt(2)).ravel()
    y2 = ((u - v) / np.sqrt(2)).ravel()
    for array in (y1, y2, weights):
        array.setflags(write=False)
    return y1, y2, weights.ravel()


def _check_finite(samples: np.ndarray, *nodes: np.ndarray) -> None:
    bad = ~np.isfinite(samples)
    if bad.any():
        where = ", ".join(f"{n[np.argmax(bad)]:.4g}" for n in nodes)
        raise NumericalError(f"non-finite integrand at node ({where})", "quadrature")


def gauss_q2d(
    g: Callable[[np.ndarray, np.ndarray], np.ndarray], rule: QuadratureRule
) -> float:
    """Expectation of g(y1, y2) against exp(-Q)/(sqrt2 pi).

    :param g: vectorized bivariate integrand
    :type g: Callable[[np.ndarray, np.ndarray], np.ndarray]
    :param rule: quadrature rule
    :type rule: QuadratureRule
    :return: the integral
    :rtype: float
    :raises NumericalError: if the integrand is not finite at a node
    """
    samples = np.broadcast_to(np.asarray(g(rule.y1, rule.y2), dtype=float), rule.y1.shape)
    _check_finite(samples, rule.y1, rule.y2)
    return float(rule.weights2d @ samples)


def gauss_1d(g: Callable[[np.ndarray], np.ndarray], rule: QuadratureRule) -> float:
    """Expectation of g(y) against the standard normal density.

    :param g: vectorized integrand
    :type g: Callable[[np.ndarray], np.ndarray]
    :param rule: quadrature rule
    :type rule: QuadratureRule
    :return: the integral
    :rtype: float
    :raises NumericalError: if the integrand is not finite at a node
    """
    samples = np.broadcast_to(np.asarray(g(rule.y), dtype=float), rule.y.shape)
    _check_finite(samples, rule.y)
    return float(rule.w @ samples)


def _normal_moment(power: int, variance: float) -> float:
    if power % 2:
        return 0.0
    return math.prod(range(power - 1, 0, -2)) * variance ** (power // 2)


def gaussian_moment(a: int, b: int) -> float:
    """Exact E[y1^a y2^b] for the Gaussian with covariance 1/4 [[3,-1],[-1,3]].

    :param a: power of y1
    :type a: int
    :param b: power of y2
    :type b: int
    :return: the moment
    :rtype: float
    """
    total = 0.0
    for i in range(a + 1):
        for j in range(b + 1):
            total += (
                math.comb(a, i)
                * math.comb(b, j)
                * (-1) ** (b - j)
                * _normal_moment(i + j, 0.5)
                * _normal_moment(a - i + b - j, 1.0)
            )
    return total / 2 ** ((a + b) / 2)
