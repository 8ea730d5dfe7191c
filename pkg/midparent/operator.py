"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: the infinitesimal operator and its Hopf-Cole counterpart I
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np  # type: ignore
from scipy import signal  # type: ignore
from scipy.integrate import trapezoid  # type: ignore

from midparent.const import GAUSSIAN_REACH
from midparent.density import DensityState, clamp_negative
from midparent.errors import ConfigurationError, InputError, NumericalError
from midparent.gamma import MAX_EXPONENT, check_eps, d_eps
from midparent.grid import GridFunction
from midparent.quadrature import QuadratureRule, gauss_1d


@dataclass(frozen=True)
class TiltedMoments:
    """I(z) and the brackets W1..W3 of the tilted measure, per z."""

    z: np.ndarray
    I: np.ndarray
    W1: np.ndarray
    W2: np.ndarray
    W3: np.ndarray

    @property
    def log_derivatives(self):
        """First three derivatives of log I."""
        W1, W2, W3 = self.W1, self.W2, self.W3
        return W1, W2 - W1 ** 2, W3 - 3 * W1 * W2 + 2 * W1 ** 3


def denominator(
    V: GridFunction, gamma: float, eps: float, rule: QuadratureRule
) -> float:
    """Normalized single integral in the definition of I."""
    v0 = V.at_origin()
    return gauss_1d(lambda y: np.exp(-eps * gamma * y + v0 - V.eval(eps * y)), rule)


def tilted_moments(
    V: GridFunction,
    gamma: float,
    eps: float,
    z,
    rule: Optional[QuadratureRule] = None,
    max_order: int = 3,
) -> TiltedMoments:
    """Evaluate I and W1..W3 at many trait values in one pass.

    The normalized tilted measure dG(z) is proportional to
    exp(-Q - eps gamma (y1+y2) + 2 D(V)(z)). Then
    W1 = <dG, D(V')>, W2 = <dG, D(V'')/2 + D(V')^2> and
    W3 = <dG, D(V''')/4 + D(V')^3 + 3/2 D(V') D(V'')>.

    :param V: corrector
    :type V: GridFunction
    :param gamma: linear part
    :type gamma: float
    :param eps: deviation scale
    :type eps: float
    :param z: trait values
    :type z: Union[float, np.ndarray]
    :param rule: quadrature rule, defaults to order 24
    :type rule: Optional[QuadratureRule]
    :param max_order: highest bracket to compute, defaults to 3
    :type max_order: int
    :return: I and brackets, zero-filled above max_order
    :rtype: TiltedMoments
    :raises NumericalError: on exponent overflow
    """
    check_eps(eps, np.inf)
    rule = QuadratureRule() if rule is None else rule
    z = np.atleast_1d(np.asarray(z, dtype=float))
    column = z[:, None]
    y1, y2 = rule.y1, rule.y2

    exponent = -eps * gamma * (y1 + y2) + 2 * d_eps(V, y1, y2, column, eps, 0)
    if np.max(exponent) > MAX_EXPONENT:
        worst = z[np.argmax(np.max(exponent, axis=1))]
        raise NumericalError(f"exponent overflow in I at z={worst:.4g}", "I")
    weights = rule.weights2d * np.exp(exponent)
    numerator = weights.sum(axis=1)
    if not np.all(np.isfinite(numerator)):
        raise NumericalError("non-finite numerator in I", "I")
    I = numerator / denominator(V, gamma, eps, rule)

    zeros = np.zeros_like(z)
    W1, W2, W3 = zeros, zeros, zeros
    measure = weights / numerator[:, None]
    if max_order >= 1:
        D1 = d_eps(V, y1, y2, column, eps, 1)
        W1 = np.sum(measure * D1, axis=1)
    if max_order >= 2:
        D2 = d_eps(V, y1, y2, column, eps, 2)
        W2 = np.sum(measure * (0.5 * D2 + D1 ** 2), axis=1)
    if max_order >= 3:
        D3 = d_eps(V, y1, y2, column, eps, 3)
        W3 = np.sum(measure * (0.25 * D3 + D1 ** 3 + 1.5 * D1 * D2), axis=1)
    return TiltedMoments(z, I, W1, W2, W3)


def _unwrap(values: np.ndarray, z):
    if np.ndim(z) == 0:
        return float(values[0])
    return values.reshape(np.shape(z))


def eval_I(
    V: GridFunction, gamma: float, eps: float, z, rule: Optional[QuadratureRule] = None
):
    """Ratio of the tilted double Gaussian integral to the single one.

    :param V: corrector
    :type V: GridFunction
    :param gamma: linear part
    :type gamma: float
    :param eps: deviation scale
    :type eps: float
    :param z: trait value(s)
    :type z: Union[float, np.ndarray]
    :param rule: quadrature rule, defaults to order 24
    :type rule: Optional[QuadratureRule]
    :return: I(z), strictly positive
    :rtype: Union[float, np.ndarray]
    """
    return _unwrap(tilted_moments(V, gamma, eps, z, rule, max_order=0).I, z)


def eval_W(
    V: GridFunction,
    gamma: float,
    eps: float,
    z,
    i: int,
    rule: Optional[QuadratureRule] = None,
):
    """The i-th derivative of I divided by I, from the bracket formulas.

    :param V: corrector
    :type V: GridFunction
    :param gamma: linear part
    :type gamma: float
    :param eps: deviation scale
    :type eps: float
    :param z: trait value(s)
    :type z: Union[float, np.ndarray]
    :param i: order in 1..3
    :type i: int
    :param rule: quadrature rule, defaults to order 24
    :type rule: Optional[QuadratureRule]
    :return: W_i(z)
    :rtype: Union[float, np.ndarray]
    :raises ConfigurationError: if i is not in 1..3
    """
    if i not in (1, 2, 3):
        raise ConfigurationError(f"bracket order must be in 1..3, got {i}")
    moments = tilted_moments(V, gamma, eps, z, rule, max_order=i)
    return _unwrap((moments.W1, moments.W2, moments.W3)[i - 1], z)


def weighted_w_sup(
    V: GridFunction,
    gamma: float,
    eps: float,
    alpha: float,
    region: float,
    rule: Optional[QuadratureRule] = None,
):
    """sup of (1+|z|)^alpha |W_i| over grid nodes with |z| <= region, i = 1, 2.

    :return: the two weighted sups
    :rtype: Tuple[float, float]
    """
    z = V.nodes[np.abs(V.nodes) <= region]
    moments = tilted_moments(V, gamma, eps, z, rule, max_order=2)
    weight = (1 + np.abs(z)) ** alpha
    return (
        float(np.max(weight * np.abs(moments.W1))),
        float(np.max(weight * np.abs(moments.W2))),
    )


def midpoint_density(f: DensityState) -> DensityState:
    """Law of the parental midpoint, p(w) = 2 (f*f)(2w) / mass(f).

    The self-convolution lands on the doubled grid, so dilation by two is an
    exact subsampling of every other node.

    :param f: parental density
    :type f: DensityState
    :return: midpoint density, same mass as f
    :rtype: DensityState
    :raises InputError: if f has zero mass
    """
    if not f.mass > 0:
        raise InputError("cannot mix a density with zero mass")
    convolution = signal.fftconvolve(f.values, f.values) * f.step
    midpoint = clamp_negative(2 * convolution[::2] / f.mass, f.step)
    total = trapezoid(midpoint, dx=f.step)
    if not total > 0:
        raise InputError("midpoint density vanished on the grid")
    return f.with_values(midpoint * (f.mass / total))


def gaussian_kernel(eps: float, step: float) -> np.ndarray:
    """Segregation kernel exp(-x^2/eps^2), unit discrete mass, odd length."""
    half = int(np.ceil(GAUSSIAN_REACH * eps / step))
    x = np.arange(-half, half + 1) * step
    kernel = np.exp(-(x ** 2) / eps ** 2)
    return kernel / (kernel.sum() * step)


def apply_B(f: DensityState, eps: float) -> DensityState:
    """Infinitesimal operator: Gaussian blur (variance eps^2/2) of the midpoint law.

    :param f: density
    :type f: DensityState
    :param eps: deviation scale
    :type eps: float
    :return: offspring density, same mass as f
    :rtype: DensityState
    :raises ConfigurationError: if the kernel reach exceeds a quarter window
    """
    if GAUSSIAN_REACH * eps > f.grid.half_width / 4:
        raise ConfigurationError(
            f"kernel reach {GAUSSIAN_REACH * eps:.3g} exceeds a quarter of the "
            f"density window ({f.grid.half_width / 4:.3g}): wraparound risk",
            "B",
        )
    midpoint = midpoint_density(f)
    blurred = signal.fftconvolve(
        midpoint.values, gaussian_kernel(eps, f.step), mode="same"
    )
    return f.with_values(clamp_negative(blurred * f.step, f.step))
