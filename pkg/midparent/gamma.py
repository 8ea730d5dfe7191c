"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: implicit linear part of the corrector, J(g, V) = 0
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np  # type: ignore
from scipy import optimize  # type: ignore

from midparent.const import DEFAULT_GAMMA_TOL, DEFAULT_J_TOL, EPS_CAP
from midparent.errors import EpsilonTooLarge, InputError, NumericalError
from midparent.grid import AlphaParameter, GridFunction, alpha_norm
from midparent.mortality import MortalityModel, check_E0_membership
from midparent.quadrature import QuadratureRule, gauss_q2d

# exp() overflows above ~709
MAX_EXPONENT = 700.0
# Integral of exp(-Q) (y1^2 + y2^2), unnormalized
SECOND_MOMENT = np.sqrt(2) * np.pi * 1.5


def check_eps(eps: float, cap: float = EPS_CAP) -> None:
    """Reject deviation scales outside (0, cap].

    :param eps: deviation scale
    :type eps: float
    :param cap: largest accepted value, defaults to 0.5
    :type cap: float
    :raises EpsilonTooLarge: if eps > cap
    :raises InputError: if eps <= 0
    """
    if not eps > 0:
        raise InputError(f"eps must be positive, got {eps}")
    if eps > cap:
        raise EpsilonTooLarge(
            f"epsilon above contraction threshold: eps={eps} > cap={cap}", "cap"
        )


def d_eps(V: GridFunction, y1, y2, z, eps: float, order: int = 0):
    """Finite difference V(z/2) - V(z/2 + eps y1)/2 - V(z/2 + eps y2)/2.

    Acts on the order-th derivative of V. Arguments broadcast against each
    other, so a column of z values against a row of nodes gives a matrix.

    :param V: sampled function
    :type V: GridFunction
    :param y1: first node coordinate
    :type y1: Union[float, np.ndarray]
    :param y2: second node coordinate
    :type y2: Union[float, np.ndarray]
    :param z: trait value(s)
    :type z: Union[float, np.ndarray]
    :param eps: deviation scale
    :type eps: float
    :param order: derivative order of V, defaults to 0
    :type order: int
    :return: the finite difference
    :rtype: Union[float, np.ndarray]
    """
    zbar = np.asarray(z, dtype=float) / 2
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    result = (
        V.eval(zbar, order)
        - 0.5 * V.eval(zbar + eps * y1, order)
        - 0.5 * V.eval(zbar + eps * y2, order)
    )
    if np.ndim(result) == 0:
        return float(result)
    return result


class JFunctional:
    """g -> J(g, V) for fixed V and eps.

    The finite differences of V at the quadrature nodes do not depend on g,
    so they are computed once.
    """

    def __init__(self, V: GridFunction, eps: float, rule: Optional[QuadratureRule] = None):
        self.eps = eps
        self.rule = QuadratureRule() if rule is None else rule
        self._spread = self.rule.y1 + self.rule.y2
        self._tilt = 2 * d_eps(V, self.rule.y1, self.rule.y2, 0.0, eps, 0)
        self._slope = d_eps(V, self.rule.y1, self.rule.y2, 0.0, eps, 1)

    def __call__(self, g: float) -> float:
        exponent = self._tilt - self.eps * g * self._spread
        if np.max(exponent) > MAX_EXPONENT:
            raise NumericalError(
                f"exponent overflow in J at g={g:.4g} (ill-scaled V)", "gamma"
            )
        weights = np.exp(exponent) * self._slope
        return gauss_q2d(lambda y1, y2: weights, self.rule) / self.eps ** 2


def eval_J(
    g: float, V: GridFunction, eps: float, rule: Optional[QuadratureRule] = None
) -> float:
    """Normalized integral whose root in g defines the linear part.

    :param g: candidate slope
    :type g: float
    :param V: corrector
    :type V: GridFunction
    :param eps: deviation scale
    :type eps: float
    :param rule: quadrature rule, defaults to order 24
    :type rule: Optional[QuadratureRule]
    :return: J(g, V)
    :rtype: float
    """
    check_eps(eps, np.inf)
    return JFunctional(V, eps, rule)(g)


@dataclass(frozen=True)
class GammaBracket:
    """Search interval (-R_K, R_K) for the root of J."""

    radius: float
    norm_proxy: float
    second_moment: float
    curvature: float

    @staticmethod
    def build(
        V: GridFunction, model: MortalityModel, alpha: Union[float, AlphaParameter]
    ) -> "GammaBracket":
        norm = max(alpha_norm(V, alpha), 1.0)
        curvature = model.mu0
        radius = max(norm, (norm * SECOND_MOMENT + 8) / (2 * curvature))
        return GammaBracket(radius, norm, SECOND_MOMENT, curvature)

    def samples(self, count: int = 17) -> np.ndarray:
        return np.linspace(-self.radius, self.radius, count)


def is_monotone(J: JFunctional, bracket: GammaBracket, count: int = 17) -> bool:
    """Whether J sampled on the bracket is strictly increasing."""
    values = np.array([J(g) for g in bracket.samples(count)])
    return bool(np.all(np.diff(values) > 0))


def heuristic_gamma(V: GridFunction) -> float:
    """Small-eps prediction 3/4 V'''(0) / V''(0)."""
    return 0.75 * V.at_origin(3) / V.at_origin(2)


def solve_gamma(
    V: GridFunction,
    m: MortalityModel,
    eps: float,
    alpha: Union[float, AlphaParameter],
    rule: Optional[QuadratureRule] = None,
    j_tol: float = DEFAULT_J_TOL,
    gamma_tol: float = DEFAULT_GAMMA_TOL,
    eps_cap: float = EPS_CAP,
) -> float:
    """Find the unique root of g -> J(g, V) inside the bracket.

    Bisection narrows the bracket down to gamma_tol, then Brent steps, i.e.
    secant and inverse quadratic steps safeguarded by bisection, polish the
    root without ever leaving the narrowed bracket.

    :param V: corrector, must belong to E0
    :type V: GridFunction
    :param m: mortality model
    :type m: MortalityModel
    :param eps: deviation scale
    :type eps: float
    :param alpha: decay exponent
    :type alpha: Union[float, AlphaParameter]
    :param rule: quadrature rule, defaults to order 24
    :type rule: Optional[QuadratureRule]
    :param j_tol: target |J| at the root, defaults to 1e-12
    :type j_tol: float
    :param gamma_tol: bisection width, defaults to 1e-6
    :type gamma_tol: float
    :param eps_cap: largest accepted eps, defaults to 0.5
    :type eps_cap: float
    :return: gamma
    :rtype: float
    :raises InputError: if V is not in E0
    :raises EpsilonTooLarge: if J does not change sign on the bracket
    """
    check_eps(eps, eps_cap)
    membership = check_E0_membership(V, m)
    if not membership:
        raise InputError("; ".join(membership.failures), "gamma")

    J = JFunctional(V, eps, rule)
    bracket = GammaBracket.build(V, m, alpha)
    at_low, at_high = J(-bracket.radius), J(bracket.radius)
    if not at_low < 0 < at_high:
        raise EpsilonTooLarge(
            f"epsilon too large for this V: J has no sign change on "
            f"(-{bracket.radius:.4g}, {bracket.radius:.4g})",
            "gamma",
        )
    if not is_monotone(J, bracket):
        logging.warning(f"J is not monotone on the bracket at eps={eps}")

    guess = optimize.bisect(J, -bracket.radius, bracket.radius, xtol=gamma_tol)
    low = max(guess - gamma_tol, -bracket.radius)
    high = min(guess + gamma_tol, bracket.radius)
    if not J(low) < 0 < J(high):
        low, high = -bracket.radius, bracket.radius
    gamma = optimize.brentq(J, low, high, xtol=1e-15, maxiter=200)

    residual = abs(J(gamma))
    logging.debug(f"gamma={gamma:.12g}, |J|={residual:.2e}, R_K={bracket.radius:.4g}")
    if residual > j_tol:
        logging.warning(f"root certificate |J|={residual:.2e} above {j_tol:.0e}")
    return float(gamma)
