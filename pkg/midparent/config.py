"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: declarative run configuration, read from TOML
"""

import logging
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, Optional, Tuple

from midparent import const
from midparent.density import DensityGrid
from midparent.errors import ConfigurationError
from midparent.mortality import MortalityModel

try:
    import tomllib  # type: ignore
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib  # type: ignore


@dataclass(frozen=True)
class ModelConfig:
    preset: Optional[str] = None
    coefficients: Optional[Tuple[float, ...]] = None
    critical_point: Optional[float] = None
    minimum: Optional[str] = None

    def build(self, window: Optional[float] = None) -> MortalityModel:
        """Instantiate the mortality model.

        :param window: working half width, defaults to the preset's
        :type window: Optional[float]
        :return: mortality model
        :rtype: MortalityModel
        :raises ConfigurationError: if neither preset nor coefficients is set
        """
        minimum = None
        if self.minimum is not None:
            try:
                minimum = MortalityModel.MINIMUM[self.minimum.upper()]
            except KeyError:
                raise ConfigurationError(
                    f"model.minimum must be left or right, got {self.minimum}"
                )
        if self.preset is not None:
            model = MortalityModel.from_preset(self.preset, minimum, window)
            if self.critical_point is not None:
                raise ConfigurationError(
                    "model.critical_point cannot be combined with model.preset"
                )
            return model
        if self.coefficients is not None:
            return MortalityModel.from_polynomial(
                self.coefficients,
                self.critical_point,
                minimum,
                MortalityModel.DEFAULT_WINDOW if window is None else window,
            )
        raise ConfigurationError("missing key: model.preset (or model.coefficients)")


@dataclass(frozen=True)
class DiscretizationConfig:
    half_width: Optional[float] = None
    sample_count: int = const.DEFAULT_SAMPLE_COUNT
    quad_order: int = const.DEFAULT_QUAD_ORDER
    density_half_width: float = const.DEFAULT_DENSITY_HALF_WIDTH
    density_count: int = const.DEFAULT_DENSITY_COUNT

    @property
    def density_grid(self) -> DensityGrid:
        return DensityGrid(self.density_half_width, self.density_count)


@dataclass(frozen=True)
class SolverConfig:
    eps: float = 0.1
    alpha: float = const.DEFAULT_ALPHA
    picard_tol: float = const.DEFAULT_PICARD_TOL
    max_iter: int = const.DEFAULT_MAX_ITER
    series_tol: float = const.DEFAULT_SERIES_TOL
    j_tol: float = const.DEFAULT_J_TOL
    gamma_tol: float = const.DEFAULT_GAMMA_TOL
    eps_cap: float = const.EPS_CAP
    ball_slack: float = const.DEFAULT_BALL_SLACK


@dataclass(frozen=True)
class MarchConfig:
    dt: Optional[float] = None
    equil_tol: float = const.DEFAULT_EQUIL_TOL
    max_steps: int = const.DEFAULT_MAX_STEPS
    trace_every: int = const.DEFAULT_TRACE_EVERY
    centers: Tuple[float, ...] = (0.0,)


@dataclass(frozen=True)
class SweepConfig:
    eps: Tuple[float, ...] = const.DEFAULT_SWEEP
    region: float = const.DEFAULT_REGION
    window_radius: float = const.DEFAULT_WINDOW_RADIUS


@dataclass(frozen=True)
class Config:
    """Full run configuration, one attribute per file section."""

    model: ModelConfig = field(default_factory=ModelConfig)
    discretization: DiscretizationConfig = field(default_factory=DiscretizationConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    march: MarchConfig = field(default_factory=MarchConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)

    def build_model(self) -> MortalityModel:
        return self.model.build(self.discretization.half_width)

    def half_width(self, model: MortalityModel) -> float:
        """Window half width: configured, else the model's working window."""
        if self.discretization.half_width is not None:
            return self.discretization.half_width
        return model.window

    def with_eps(self, eps: float) -> "Config":
        return replace(self, solver=replace(self.solver, eps=float(eps)))


SECTIONS = {
    "model": ModelConfig,
    "discretization": DiscretizationConfig,
    "solver": SolverConfig,
    "march": MarchConfig,
    "sweep": SweepConfig,
}


def _coerce(section: str, cls: Any, raw: Dict[str, Any]) -> Any:
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(raw) - set(known))
    if unknown:
        raise ConfigurationError(
            f"unknown key(s): {', '.join(f'{section}.{k}' for k in unknown)}"
        )
    values = {}
    for key, value in raw.items():
        if isinstance(value, list):
            value = tuple(float(v) for v in value)
        elif isinstance(value, int) and not isinstance(value, bool):
            if known[key].type in (float, "float", Optional[float], "Optional[float]"):
                value = float(value)
        values[key] = value
    try:
        return cls(**values)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"invalid [{section}] section: {e}")


def parse_config(raw: Dict[str, Any]) -> Config:
    """Build a Config from a parsed TOML mapping.

    :param raw: mapping of section name to key-value pairs
    :type raw: Dict[str, Any]
    :return: configuration
    :rtype: Config
    :raises ConfigurationError: on unknown sections or keys, or missing model
    """
    unknown = sorted(set(raw) - set(SECTIONS))
    if unknown:
        raise ConfigurationError(f"unknown section(s): {', '.join(unknown)}")
    if "model" not in raw:
        raise ConfigurationError("missing key: model.preset (no [model] section)")
    sections = {
        name: _coerce(name, cls, raw.get(name, {})) for name, cls in SECTIONS.items()
    }
    config = Config(**sections)
    if config.model.preset is None and config.model.coefficients is None:
        raise ConfigurationError("missing key: model.preset (or model.coefficients)")
    return config


def load_config(path: str) -> Config:
    """Read a TOML configuration file.

    :param path: to the configuration file
    :type path: str
    :return: configuration
    :rtype: Config
    :raises ConfigurationError: if the file is missing or malformed
    """
    if not os.path.isfile(path):
        raise ConfigurationError(f"config file not found: {path}")
    with open(path, "rb") as IH:
        try:
            raw = tomllib.load(IH)
        except tomllib.TOMLDecodeError as e:
            raise ConfigurationError(f"malformed config {path}: {e}")
    logging.info(f"Read configuration from '{path}'")
    return parse_config(raw)
