"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole of a meromorphic function."""


class QuadratureError(ArithmeticError):
    """Adaptive integration failed to reach the requested tolerance.

    The best available estimate is kept on ``result`` so callers can decide
    whether it is still usable.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class IntegrandError(ArithmeticError):
    """The integrand returned a non-finite value."""

    def __init__(self, message: str, abscissa: float):
        super().__init__(f"{message} (at t = {abscissa!r})")
        self.abscissa = abscissa
