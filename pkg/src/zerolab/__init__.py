"""Zero statistics of Gaussian random sections over complex projective space."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("zerolab")
except PackageNotFoundError:
    __version__ = "unknown"

from ._chart import ChartPoint
from ._exceptions import (
    CensoredEstimateWarning,
    ConfigError,
    ConvergenceError,
    QuadratureError,
    QuadratureWarning,
    RootSolverWarning,
    ZerolabError,
    ZerolabWarning,
)
from .ensemble import EnsembleSpec, PolySection, sample_section
from .zeros import DomainSpec, RootSet, find_roots

__all__ = [
    "CensoredEstimateWarning",
    "ChartPoint",
    "ConfigError",
    "ConvergenceError",
    "DomainSpec",
    "EnsembleSpec",
    "PolySection",
    "QuadratureError",
    "QuadratureWarning",
    "RootSet",
    "RootSolverWarning",
    "ZerolabError",
    "ZerolabWarning",
    "__version__",
    "find_roots",
    "sample_section",
]
