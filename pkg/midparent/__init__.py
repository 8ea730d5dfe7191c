"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

from importlib.metadata import version

from midparent import (
    config,
    const,
    density,
    errors,
    fixed_point,
    gamma,
    grid,
    io,
    limit,
    march,
    mortality,
    operator,
    quadrature,
    runner,
    verify,
)

try:
    __version__ = version(__name__)
except Exception as e:
    raise e

__all__ = [
    "__version__",
    "config",
    "const",
    "density",
    "errors",
    "fixed_point",
    "gamma",
    "grid",
    "io",
    "limit",
    "march",
    "mortality",
    "operator",
    "quadrature",
    "runner",
    "verify",
]
