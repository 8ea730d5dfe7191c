"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: grid-sampled functions with derivative data and E-alpha norm
"""

from functools import lru_cache
from typing import Callable, Tuple, Union

import numpy as np  # type: ignore

from midparent.errors import ConfigurationError, InputError

MIN_SAMPLE_COUNT = 33
CENTERED_STENCIL = (-2, -1, 0, 1, 2)
ONE_SIDED_SIZE = 6

Evaluator = Callable[[np.ndarray], np.ndarray]


class AlphaParameter:
    """Decay exponent of the weighted E-alpha norm.

    Variables:
            MAX_ALPHA {float} -- largest accepted exponent
    """

    MAX_ALPHA = 0.4
    __alpha: float = MAX_ALPHA

    def __init__(self, alpha: float = MAX_ALPHA):
        """Initialize AlphaParameter.

        :param alpha: exponent, defaults to 2/5
        :type alpha: float
        """
        super().__init__()
        self.alpha = alpha

    @property
    def alpha(self) -> float:
        return self.__alpha

    @alpha.setter
    def alpha(self, alpha: float) -> None:
        alpha = float(alpha)
        if not 0 < alpha <= self.MAX_ALPHA + 1e-15:
            raise ConfigurationError(
                f"alpha must be in (0, {self.MAX_ALPHA}], got {alpha}", "alpha"
            )
        self.__alpha = alpha

    def __float__(self) -> float:
        return self.alpha

    def __repr__(self) -> str:
        return f"AlphaParameter({self.alpha})"


def as_alpha(alpha: Union[float, AlphaParameter]) -> float:
    """Unwrap an alpha parameter into a float.

    :param alpha: exponent or wrapped exponent
    :type alpha: Union[float, AlphaParameter]
    :return: the exponent
    :rtype: float
    """
    if isinstance(alpha, AlphaParameter):
        return alpha.alpha
    return float(alpha)


@lru_cache(maxsize=None)
def fd_weights(offsets: Tuple[int, ...], order: int) -> np.ndarray:
    """Finite difference weights for a derivative on a unit-spaced stencil.

    Weights are obtained by matching Taylor coefficients, hence are exact for
    polynomials of degree lower than the stencil size.

    :param offsets: stencil offsets, in grid steps
    :type offsets: Tuple[int, ...]
    :param order: derivative order
    :type order: int
    :return: one weight per offset
    :rtype: np.ndarray
    """
    size = len(offsets)
    powers = np.arange(size)
    factorials = np.array([float(np.prod(np.arange(1, p + 1))) for p in powers])
    vandermonde = np.power.outer(np.array(offsets, dtype=float), powers).T
    rhs = np.zeros(size)
    rhs[order] = factorials[order]
    return np.linalg.solve(vandermonde, rhs)


def _boundary_offsets(index: int, count: int) -> Tuple[int, ...]:
    if index < 2:
        return tuple(range(-index, ONE_SIDED_SIZE - index))
    right = count - 1 - index
    return tuple(range(-(ONE_SIDED_SIZE - 1 - right), right + 1))


def finite_differences(values: np.ndarray, step: float) -> np.ndarray:
    """First three derivatives of uniformly sampled values.

    Interior nodes use the centered 5-point stencil, the two outermost nodes on
    each side use 6-point one-sided stencils.

    :param values: samples
    :type values: np.ndarray
    :param step: grid spacing
    :type step: float
    :return: array of shape (3, N) with first, second and third derivatives
    :rtype: np.ndarray
    """
    count = values.size
    derivatives = np.zeros((3, count))
    for order in (1, 2, 3):
        weights = fd_weights(CENTERED_STENCIL, order)
        interior = np.zeros(count - 4)
        for offset, weight in zip(CENTERED_STENCIL, weights):
            interior += weight * values[2 + offset : count - 2 + offset]
        derivatives[order - 1, 2 : count - 2] = interior
        for index in (0, 1, count - 2, count - 1):
            offsets = _boundary_offsets(index, count)
            stencil = values[index + np.array(offsets)]
            derivatives[order - 1, index] = fd_weights(offsets, order) @ stencil
        derivatives[order - 1] /= step ** order
    return derivatives


def _hermite(t, p0, dp0, p1, dp1):
    return p0 + t * (
        dp0 + t * (-2 * dp0 - dp1 - 3 * p0 + 3 * p1 + t * (dp0 + dp1 + 2 * p0 - 2 * p1))
    )


def _hermite_dt(t, p0, dp0, p1, dp1):
    return dp0 + t * (
        -4 * dp0 - 2 * dp1 - 6 * p0 + 6 * p1 + t * (3 * dp0 + 3 * dp1 + 6 * p0 - 6 * p1)
    )


class GridFunction:
    """A smooth function sampled on [-L, L] with derivatives up to order 3.

    Instances are immutable, apart from the out-of-window evaluation counter
    which is kept for diagnostics only.
    """

    _half_width: float
    _data: np.ndarray
    _nodes: np.ndarray
    _out_of_window: int = 0

    def __init__(
        self,
        half_width: float,
        values: np.ndarray,
        deriv1: np.ndarray,
        deriv2: np.ndarray,
        deriv3: np.ndarray,
    ):
        """Initialize GridFunction.

        :param half_width: window half width L
        :type half_width: float
        :param values: function samples
        :type values: np.ndarray
        :param deriv1: first derivative samples
        :type deriv1: np.ndarray
        :param deriv2: second derivative samples
        :type deriv2: np.ndarray
        :param deriv3: third derivative samples
        :type deriv3: np.ndarray
        :raises InputError: if the arrays do not share the same length
        """
        super().__init__()
        check_grid(half_width, len(values))
        data = np.array([values, deriv1, deriv2, deriv3], dtype=float)
        if data.ndim != 2:
            raise InputError("derivative arrays must have the same length")
        data.setflags(write=False)
        self._half_width = float(half_width)
        self._data = data
        self._nodes = np.linspace(-half_width, half_width, data.shape[1])
        self._nodes.setflags(write=False)
        self._out_of_window = 0

    @property
    def half_width(self) -> float:
        return self._half_width

    @property
    def sample_count(self) -> int:
        return self._data.shape[1]

    @property
    def step(self) -> float:
        return 2 * self._half_width / (self.sample_count - 1)

    @property
    def center(self) -> int:
        return self.sample_count // 2

    @property
    def nodes(self) -> np.ndarray:
        return self._nodes

    @property
    def values(self) -> np.ndarray:
        return self._data[0]

    @property
    def deriv1(self) -> np.ndarray:
        return self._data[1]

    @property
    def deriv2(self) -> np.ndarray:
        return self._data[2]

    @property
    def deriv3(self) -> np.ndarray:
        return self._data[3]

    @property
    def out_of_window(self) -> int:
        """Number of evaluations outside [-L, L] so far."""
        return self._out_of_window

    def derivative(self, order: int) -> np.ndarray:
        """Stored samples of a derivative, order 0 being the values."""
        return self._data[order]

    def at_origin(self, order: int = 0) -> float:
        return float(self._data[order, self.center])

    def eval(self, z: Union[float, np.ndarray], order: int = 0):
        """Evaluate the function or one of its derivatives.

        Inside the window, orders 0-1 come from the cubic Hermite interpolant
        of (values, deriv1) and orders 2-3 from that of (deriv2, deriv3).
        Outside, the stored endpoint derivatives are continued by a Taylor
        polynomial of degree at most 2.

        :param z: evaluation points, any shape
        :type z: Union[float, np.ndarray]
        :param order: derivative order, defaults to 0
        :type order: int
        :return: evaluations, same shape as z
        :rtype: Union[float, np.ndarray]
        :raises ConfigurationError: if order is not in 0..3
        """
        if order not in (0, 1, 2, 3):
            raise ConfigurationError(f"derivative order must be in 0..3, got {order}")
        points = np.asarray(z, dtype=float)
        flat = points.ravel()
        out = np.empty_like(flat)
        inside = np.abs(flat) <= self._half_width
        if inside.all():
            out = self._interpolate(flat, order)
        else:
            out[inside] = self._interpolate(flat[inside], order)
            outside = ~inside
            self._out_of_window += int(outside.sum())
            out[outside] = self._continue(flat[outside], order)
        if points.ndim == 0:
            return float(out[0])
        return out.reshape(points.shape)

    def _interpolate(self, z: np.ndarray, order: int) -> np.ndarray:
        # Positions are measured from the nearest node, counted from the
        # center, so that rounding near a node is relative to that node.
        step, center = self.step, self.center
        scaled = z / step
        nearest = np.clip(np.rint(scaled), -center, center)
        offset = scaled - nearest
        sign = np.where(offset < 0, -1.0, 1.0)
        near = (nearest + center).astype(int)
        far = np.clip(near + sign.astype(int), 0, self.sample_count - 1)
        t = np.abs(offset)
        low = 0 if order < 2 else 2
        p, dp = self._data[low], self._data[low + 1] * step
        p0, p1 = p[near], p[far]
        dp0, dp1 = sign * dp[near], sign * dp[far]
        if order % 2 == 0:
            result = _hermite(t, p0, dp0, p1, dp1)
        else:
            result = sign * _hermite_dt(t, p0, dp0, p1, dp1) / step
        on_node = t < 1e-12
        if on_node.any():
            result[on_node] = self._data[order, near[on_node]]
        return result

    def _continue(self, z: np.ndarray, order: int) -> np.ndarray:
        end = np.where(z > 0, self.sample_count - 1, 0)
        delta = z - np.where(z > 0, self._half_width, -self._half_width)
        result = np.zeros_like(z)
        for power, factor in zip(range(3), (1.0, 1.0, 0.5)):
            if order + power > 3:
                break
            result += factor * self._data[order + power, end] * delta ** power
        return result

    def alpha_norm(self, alpha: Union[float, AlphaParameter]) -> float:
        """Discrete weighted norm, see :func:`alpha_norm`."""
        return alpha_norm(self, alpha)

    def shifted_by(self, other: "GridFunction", sign: float = 1.0) -> "GridFunction":
        """Pointwise sum (sign=1) or difference (sign=-1) with another function.

        :param other: function on the same grid
        :type other: GridFunction
        :param sign: coefficient of other, defaults to 1.0
        :type sign: float
        :return: combined function
        :rtype: GridFunction
        :raises ConfigurationError: if grids differ
        """
        if not self.same_grid(other):
            raise ConfigurationError("grid functions live on different grids")
        data = self._data + sign * other._data
        return GridFunction(self._half_width, *data)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return self.shifted_by(other, -1.0)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return self.shifted_by(other, 1.0)

    def __mul__(self, factor: float) -> "GridFunction":
        return GridFunction(self._half_width, *(self._data * float(factor)))

    __rmul__ = __mul__

    def same_grid(self, other: "GridFunction") -> bool:
        return (
            self.sample_count == other.sample_count
            and abs(self._half_width - other._half_width) < 1e-12 * self._half_width
        )

    def reflected(self) -> "GridFunction":
        """The function z -> u(-z) on the same grid."""
        signs = np.array([1.0, -1.0, 1.0, -1.0])[:, None]
        return GridFunction(self._half_width, *(signs * self._data[:, ::-1]))

    def __repr__(self) -> str:
        return f"GridFunction(L={self._half_width}, N={self.sample_count})"


def check_grid(half_width: float, sample_count: int) -> None:
    """Validate window half width and sample count.

    :param half_width: window half width
    :type half_width: float
    :param sample_count: number of grid nodes
    :type sample_count: int
    :raises ConfigurationError: if the count is even or too small, or L <= 0
    """
    if not half_width > 0:
        raise ConfigurationError(f"half width must be positive, got {half_width}")
    if sample_count < MIN_SAMPLE_COUNT or sample_count % 2 == 0:
        raise ConfigurationError(
            f"sample count must be odd and >= {MIN_SAMPLE_COUNT}, got {sample_count}"
        )


def grid_nodes(half_width: float, sample_count: int) -> np.ndarray:
    check_grid(half_width, sample_count)
    return np.linspace(-half_width, half_width, sample_count)


def build_grid_function(
    f: Union[Evaluator, np.ndarray], half_width: float, sample_count: int
) -> GridFunction:
    """Sample a function on the grid and fill derivatives by finite differences.

    :param f: vectorized evaluator or array of samples
    :type f: Union[Evaluator, np.ndarray]
    :param half_width: window half width L
    :type half_width: float
    :param sample_count: odd number of nodes N >= 33
    :type sample_count: int
    :return: sampled function
    :rtype: GridFunction
    :raises ConfigurationError: if the grid is invalid or array size mismatches
    :raises InputError: if any sample is not finite
    """
    z = grid_nodes(half_width, sample_count)
    if callable(f):
        values = np.asarray(f(z), dtype=float)
        if values.shape != z.shape:
            values = np.asarray(np.vectorize(f)(z), dtype=float)
    else:
        values = np.asarray(f, dtype=float)
        if values.shape != z.shape:
            raise ConfigurationError(
                f"expected {sample_count} samples, got {values.size}"
            )
    if not np.all(np.isfinite(values)):
        bad = z[~np.isfinite(values)][0]
        raise InputError(f"non-finite sample at z={bad:.6g}")
    step = 2 * half_width / (sample_count - 1)
    return GridFunction(half_width, values, *finite_differences(values, step))


def alpha_norm(gf: GridFunction, alpha: Union[float, AlphaParameter]) -> float:
    """Grid approximation of the weighted norm.

    max over nodes of |u'|, (1+|z|)^a |u''| and (1+|z|)^a |u'''|.

    :param gf: sampled function
    :type gf: GridFunction
    :param alpha: decay exponent
    :type alpha: Union[float, AlphaParameter]
    :return: norm value
    :rtype: float
    """
    weight = (1 + np.abs(gf.nodes)) ** as_alpha(alpha)
    return float(
        max(
            np.max(np.abs(gf.deriv1)),
            np.max(weight * np.abs(gf.deriv2)),
            np.max(weight * np.abs(gf.deriv3)),
        )
    )
