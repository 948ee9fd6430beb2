"""Exception and warning types raised by zerolab."""

from __future__ import annotations

__all__ = [
    "CensoredEstimateWarning",
    "ConfigError",
    "ConvergenceError",
    "QuadratureError",
    "QuadratureWarning",
    "RootSolverWarning",
    "ZerolabError",
    "ZerolabWarning",
]


class ZerolabError(Exception):
    """Base class for all errors raised by zerolab."""


class ConfigError(ZerolabError, ValueError):
    """A configuration value failed validation.

    Parameters
    ----------
    path : str
        Dotted path of the offending field, e.g. ``"experiments[0].trials"``.
    message : str
        What is wrong with the value.
    """

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class ConvergenceError(ZerolabError, ArithmeticError):
    """An iterative numerical method did not converge."""


class QuadratureError(ConvergenceError):
    """Successive quadrature refinements disagree by more than the tolerance."""


class ZerolabWarning(UserWarning):
    """Base class for zerolab warnings."""


class RootSolverWarning(ZerolabWarning):
    """The root solver had to retry or fall back to the companion matrix."""


class QuadratureWarning(ZerolabWarning):
    """A quadrature needed special treatment (e.g. a root on the contour)."""


class CensoredEstimateWarning(ZerolabWarning):
    """A tail probability estimate observed too few events to be reliable."""
