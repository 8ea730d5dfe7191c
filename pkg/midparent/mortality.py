"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: mortality (selection) models and their validation
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np  # type: ignore
from scipy import optimize  # type: ignore

from midparent.errors import ConfigurationError, MortalityError
from midparent.grid import AlphaParameter, GridFunction, as_alpha

Evaluator = Callable[[np.ndarray], np.ndarray]


class MortalityModel:
    """Selection function m with analytic derivatives up to order 3.

    Solvers work in translated coordinates h = z - z0, with the model
    normalized so that m(z0) is subtracted; see :meth:`normalized`.

    Variables:
            PRESET {Enum} -- named polynomial models
            MINIMUM {Enum} -- which local minimum to work at
    """

    class PRESET(Enum):
        """Named presets: polynomial coefficients (ascending) and window."""

        QUADRATIC = ((0.0, 0.0, 0.5), 6.0)
        CUBIC_PERTURBED = ((0.0, 0.0, 0.5, 1 / 6), 3.0)
        DOUBLE_WELL = ((1.0, 0.25, -2.0, 0.0, 1.0), 2.5)

        @property
        def coefficients(self) -> Tuple[float, ...]:
            return self.value[0]

        @property
        def window(self) -> float:
            return self.value[1]

        @property
        def label(self) -> str:
            return self.name.lower()

    class MINIMUM(Enum):
        LEFT = "left"
        RIGHT = "right"

    DEFAULT_WINDOW = 4.0

    _evaluators: Tuple[Evaluator, Evaluator, Evaluator, Evaluator]
    _critical_point: float
    _window: float
    name: str
    coefficients: Optional[Tuple[float, ...]] = None

    def __init__(
        self,
        m: Evaluator,
        Dm: Evaluator,
        D2m: Evaluator,
        D3m: Evaluator,
        critical_point: float = 0.0,
        window: float = DEFAULT_WINDOW,
        name: str = "custom",
    ):
        """Initialize MortalityModel.

        :param m: mortality evaluator
        :type m: Evaluator
        :param Dm: first derivative evaluator
        :type Dm: Evaluator
        :param D2m: second derivative evaluator
        :type D2m: Evaluator
        :param D3m: third derivative evaluator
        :type D3m: Evaluator
        :param critical_point: working local minimum z0, defaults to 0.0
        :type critical_point: float
        :param window: working half width around z0, defaults to 4.0
        :type window: float
        :param name: label used in outputs, defaults to "custom"
        :type name: str
        """
        super().__init__()
        self._evaluators = (m, Dm, D2m, D3m)
        self._critical_point = float(critical_point)
        self.window = window
        self.name = name

    @property
    def critical_point(self) -> float:
        return self._critical_point

    @property
    def window(self) -> float:
        return self._window

    @window.setter
    def window(self, window: float) -> None:
        if not window > 0:
            raise ConfigurationError(f"window must be positive, got {window}")
        self._window = float(window)

    @property
    def m(self) -> Evaluator:
        return self._evaluators[0]

    @property
    def Dm(self) -> Evaluator:
        return self._evaluators[1]

    @property
    def D2m(self) -> Evaluator:
        return self._evaluators[2]

    @property
    def D3m(self) -> Evaluator:
        return self._evaluators[3]

    @property
    def m_at_minimum(self) -> float:
        return float(self.m(np.array(self._critical_point)))

    @property
    def mu0(self) -> float:
        """Second derivative at the working critical point."""
        return float(self.D2m(np.array(self._critical_point)))

    @property
    def inf_m(self) -> float:
        """Minimum of m over the working window, on a dense sample."""
        z = self._critical_point + np.linspace(-self._window, self._window, 4097)
        return float(np.min(self.m(z)))

    def __call__(self, z, order: int = 0):
        """Evaluate m or one of its derivatives in raw coordinates."""
        return self._evaluators[order](np.asarray(z, dtype=float))

    def normalized(self, h, order: int = 0):
        """Evaluate the translated model m(z0 + h) - m(z0), or its derivatives.

        :param h: offsets from the critical point
        :type h: Union[float, np.ndarray]
        :param order: derivative order in 0..3, defaults to 0
        :type order: int
        :return: evaluations
        :rtype: Union[float, np.ndarray]
        """
        h = np.asarray(h, dtype=float)
        values = self._evaluators[order](self._critical_point + h)
        if order == 0:
            values = values - self.m_at_minimum
        if h.ndim == 0:
            return float(values)
        return np.broadcast_to(values, h.shape).astype(float)

    def reflected(self) -> "MortalityModel":
        """The model z -> m(-z), working at -z0."""
        m, Dm, D2m, D3m = self._evaluators
        model = MortalityModel(
            lambda z: m(-z),
            lambda z: -Dm(-z),
            lambda z: D2m(-z),
            lambda z: -D3m(-z),
            -self._critical_point,
            self._window,
            f"{self.name}-reflected",
        )
        if self.coefficients is not None:
            model.coefficients = tuple(
                c * (-1) ** k for k, c in enumerate(self.coefficients)
            )
        return model

    def scaled(self, factor: float) -> "MortalityModel":
        """The model c * m, same critical point."""
        evaluators = [
            (lambda e: (lambda z: factor * e(z)))(e) for e in self._evaluators
        ]
        return MortalityModel(
            *evaluators, self._critical_point, self._window, f"{factor:g}*{self.name}"
        )

    @staticmethod
    def from_polynomial(
        coefficients: Sequence[float],
        critical_point: Optional[float] = None,
        minimum: Optional["MortalityModel.MINIMUM"] = None,
        window: float = DEFAULT_WINDOW,
        name: str = "polynomial",
    ) -> "MortalityModel":
        """Build a model from ascending polynomial coefficients.

        When no critical point is given, the local minima are the real roots of
        m' with m'' > 0. The left-most or right-most is chosen when minimum is
        set, otherwise the lowest one. The root is refined by Newton steps.

        :param coefficients: ascending coefficients
        :type coefficients: Sequence[float]
        :param critical_point: working minimum, defaults to None
        :type critical_point: Optional[float]
        :param minimum: which minimum to pick, defaults to None
        :type minimum: Optional[MortalityModel.MINIMUM]
        :param window: working half width, defaults to 4.0
        :type window: float
        :param name: model label, defaults to "polynomial"
        :type name: str
        :return: polynomial model
        :rtype: MortalityModel
        :raises MortalityError: if no local minimum exists
        """
        if len(coefficients) == 0:
            raise ConfigurationError("empty coefficient list", "model")
        p = np.polynomial.Polynomial([float(c) for c in coefficients])
        derivatives = [p] + [p.deriv(k) for k in (1, 2, 3)]
        if critical_point is None:
            critical_point = _find_minimum(derivatives, minimum)
        model = MortalityModel(*derivatives, critical_point, window, name)
        model.coefficients = tuple(float(c) for c in coefficients)
        return model

    @staticmethod
    def from_preset(
        preset: Union[str, "MortalityModel.PRESET"],
        minimum: Optional["MortalityModel.MINIMUM"] = None,
        window: Optional[float] = None,
    ) -> "MortalityModel":
        """Build one of the named presets.

        :param preset: preset or its lowercase name
        :type preset: Union[str, MortalityModel.PRESET]
        :param minimum: working minimum for multi-well presets, defaults to None
        :type minimum: Optional[MortalityModel.MINIMUM]
        :param window: working half width, defaults to the preset's
        :type window: Optional[float]
        :return: preset model
        :rtype: MortalityModel
        :raises ConfigurationError: if the preset is unknown
        """
        if isinstance(preset, str):
            try:
                preset = MortalityModel.PRESET[preset.upper()]
            except KeyError:
                raise ConfigurationError(f"unknown model preset: {preset}", "model")
        if preset is MortalityModel.PRESET.DOUBLE_WELL and minimum is None:
            minimum = MortalityModel.MINIMUM.LEFT
        critical_point = 0.0 if minimum is None else None
        return MortalityModel.from_polynomial(
            preset.coefficients,
            critical_point,
            minimum,
            preset.window if window is None else window,
            preset.label,
        )

    @staticmethod
    def constant(level: float) -> "MortalityModel":
        """Trait-independent mortality, for time marching only."""
        return MortalityModel.from_polynomial([level], 0.0, name=f"constant-{level:g}")

    def __repr__(self) -> str:
        return f"MortalityModel({self.name}, z0={self._critical_point:.6g})"


def _find_minimum(
    derivatives: List[np.polynomial.Polynomial],
    minimum: Optional[MortalityModel.MINIMUM],
) -> float:
    p, dp, d2p, _ = derivatives
    roots = dp.roots()
    roots = np.real(roots[np.abs(np.imag(roots)) < 1e-9])
    roots = np.sort(roots[d2p(roots) > 0])
    if roots.size == 0:
        raise MortalityError("polynomial has no non-degenerate local minimum")
    if minimum is MortalityModel.MINIMUM.LEFT:
        guess = roots[0]
    elif minimum is MortalityModel.MINIMUM.RIGHT:
        guess = roots[-1]
    else:
        guess = roots[np.argmin(p(roots))]
    return float(optimize.newton(dp, guess, fprime=d2p, tol=1e-15, maxiter=50))


@dataclass(frozen=True)
class MortalityReport:
    """Outcome of :func:`validate_mortality`."""

    C_m: float
    mu0: float
    inf_m: float
    m_at_minimum: float
    compatible: bool
    window: float


@dataclass
class E0Report:
    """Outcome of :func:`check_E0_membership`; truthy iff all clauses hold."""

    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return len(self.failures) == 0

    def __bool__(self) -> bool:
        return self.passed


def validate_mortality(
    model: MortalityModel,
    alpha: Union[float, AlphaParameter],
    window: Optional[float] = None,
    sample_count: int = 513,
) -> MortalityReport:
    """Check the model invariants on a dense sample of the working window.

    The sample has 4N points on [z0 - window, z0 + window]. The translated
    model must vanish with zero slope at z0, have positive curvature there,
    keep 1 + m > 0 and have finite weighted ratios.

    :param model: mortality model
    :type model: MortalityModel
    :param alpha: decay exponent of the weights
    :type alpha: Union[float, AlphaParameter]
    :param window: half width, defaults to the model's window
    :type window: Optional[float]
    :param sample_count: grid size N, defaults to 513
    :type sample_count: int
    :return: measured constants, including C_m
    :rtype: MortalityReport
    :raises MortalityError: on the first violated invariant
    """
    window = model.window if window is None else float(window)
    z0 = model.critical_point
    slope = model.normalized(0.0, 1)
    curvature = model.normalized(0.0, 2)
    if abs(slope) > 1e-8 * max(1.0, abs(curvature)):
        raise MortalityError(f"nonzero slope {slope:.3g} at critical point", z0)
    if not curvature > 0:
        raise MortalityError(f"degenerate minimum (m''={curvature:.3g})", z0)

    h = np.linspace(-window, window, 4 * sample_count)
    shifted = 1 + model.normalized(h)
    bad = ~(shifted > 0)
    if bad.any():
        offending = z0 + h[np.argmax(bad)]
        raise MortalityError(
            f"1 + m(z) - m(z0) <= 0 at z={offending:.6g}: compatibility violated",
            offending,
        )

    weight = (1 + np.abs(h)) ** as_alpha(alpha)
    ratios = np.array(
        [weight * np.abs(model.normalized(h, k)) / shifted for k in (1, 2, 3)]
    )
    if not np.all(np.isfinite(ratios)):
        offending = z0 + h[np.argmax(~np.all(np.isfinite(ratios), axis=0))]
        raise MortalityError(f"unbounded weighted ratio at z={offending:.6g}", offending)

    report = MortalityReport(
        C_m=float(ratios.max()),
        mu0=curvature,
        inf_m=float(np.min(model(z0 + h))),
        m_at_minimum=model.m_at_minimum,
        compatible=bool(model.m_at_minimum < 1 + np.min(model(z0 + h))),
        window=window,
    )
    logging.debug(f"validated {model}: C_m={report.C_m:.4g}, mu0={report.mu0:.4g}")
    return report


def check_E0_membership(gf: GridFunction, model: MortalityModel) -> E0Report:
    """Check that a sampled corrector satisfies the E0 constraints.

    :param gf: sampled corrector, in translated coordinates
    :type gf: GridFunction
    :param model: mortality model
    :type model: MortalityModel
    :return: report listing each failed clause
    :rtype: E0Report
    """
    report = E0Report()
    value, slope, curvature = (gf.at_origin(k) for k in (0, 1, 2))
    if abs(value) > 1e-10:
        report.failures.append(f"value at origin is {value:.3g}, not 0")
    if abs(slope) > 1e-8:
        report.failures.append(f"slope at origin is {slope:.3g}, not 0")
    if curvature < model.mu0 - 1e-8:
        report.failures.append(
            f"curvature at origin {curvature:.6g} below m''(z0)={model.mu0:.6g}"
        )
    return report
