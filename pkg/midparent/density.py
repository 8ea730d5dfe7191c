"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: nonnegative trait densities on a uniform grid
"""

import logging
from dataclasses import dataclass

import numpy as np  # type: ignore
from scipy.integrate import trapezoid  # type: ignore

from midparent.const import CLAMP_TOLERANCE
from midparent.errors import ConfigurationError, InputError


@dataclass(frozen=True)
class DensityGrid:
    """Uniform grid of N_z (a power of two) nodes on [-L_z, L_z]."""

    half_width: float
    count: int

    def __post_init__(self):
        if not self.half_width > 0:
            raise ConfigurationError(
                f"density half width must be positive, got {self.half_width}"
            )
        if self.count < 2 or self.count & (self.count - 1):
            raise ConfigurationError(
                f"density sample count must be a power of two, got {self.count}"
            )

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.count)

    @property
    def step(self) -> float:
        return 2 * self.half_width / (self.count - 1)


def clamp_negative(values: np.ndarray, step: float) -> np.ndarray:
    """Set negative values to zero.

    :param values: density samples
    :type values: np.ndarray
    :param step: grid spacing
    :type step: float
    :return: clamped copy
    :rtype: np.ndarray
    """
    negative = values < 0
    if not negative.any():
        return values
    clamped = values.copy()
    clamped[negative] = 0
    logging.debug(f"clamped mass {-values[negative].sum() * step:.3e}")
    return clamped


class DensityState:
    """Density samples with mass bookkeeping."""

    grid: DensityGrid
    eps: float
    _values: np.ndarray
    _mass: float

    def __init__(self, grid: DensityGrid, values: np.ndarray, eps: float):
        """Initialize DensityState.

        :param grid: density grid
        :type grid: DensityGrid
        :param values: nonnegative samples
        :type values: np.ndarray
        :param eps: deviation scale of the model
        :type eps: float
        :raises InputError: if values are negative, non-finite or misshaped
        """
        super().__init__()
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.count,):
            raise InputError(f"expected {grid.count} density samples")
        if not np.all(np.isfinite(values)):
            raise InputError("non-finite density sample")
        if np.min(values) < -CLAMP_TOLERANCE * max(np.max(np.abs(values)), 1e-300):
            raise InputError("negative density sample")
        values = np.maximum(values, 0)
        values.setflags(write=False)
        self.grid = grid
        self.eps = eps
        self._values = values
        self._mass = float(trapezoid(values, dx=grid.step))

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def step(self) -> float:
        return self.grid.step

    @property
    def mass(self) -> float:
        return self._mass

    @property
    def mean(self) -> float:
        self._require_mass()
        return float(trapezoid(self.nodes * self._values, dx=self.step) / self._mass)

    @property
    def mode(self) -> float:
        return float(self.nodes[np.argmax(self._values)])

    def _require_mass(self) -> None:
        if not self._mass > 0:
            raise InputError("density has zero mass")

    def with_values(self, values: np.ndarray) -> "DensityState":
        return DensityState(self.grid, values, self.eps)

    def normalized(self) -> "DensityState":
        """Same profile with unit mass."""
        self._require_mass()
        return self.with_values(self._values / self._mass)

    def l1_distance(self, other: "DensityState") -> float:
        if other.grid != self.grid:
            raise ConfigurationError("densities live on different grids")
        return float(trapezoid(np.abs(self._values - other.values), dx=self.step))

    @staticmethod
    def gaussian(
        grid: DensityGrid,
        eps: float,
        center: float = 0.0,
        variance: float = None,
        mass: float = 1.0,
    ) -> "DensityState":
        """Gaussian profile, variance eps^2 unless given.

        :param grid: density grid
        :type grid: DensityGrid
        :param eps: deviation scale
        :type eps: float
        :param center: mean, defaults to 0.0
        :type center: float
        :param variance: variance, defaults to eps^2
        :type variance: float
        :param mass: total mass, defaults to 1.0
        :type mass: float
        :return: sampled Gaussian
        :rtype: DensityState
        """
        variance = eps ** 2 if variance is None else variance
        z = grid.nodes
        values = np.exp(-((z - center) ** 2) / (2 * variance))
        values *= mass / np.sqrt(2 * np.pi * variance)
        return DensityState(grid, values, eps)

    def __repr__(self) -> str:
        return f"DensityState(N={self.grid.count}, mass={self._mass:.6g})"
