"""Heat kernel of the Laplacian with a point interaction at the origin.

The kernel of ``exp(-t A_eps)`` is the free Gaussian kernel plus a
correction proportional to ``2t / (|x||y|)``. The correction contains a
one-dimensional integral over an auxiliary variable ``w``; it is evaluated in
closed form via ``erfcx`` by completing the square, so nothing here calls the
quadrature module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .special import SQRT_PI, erfcx, erfcx_complement

__all__ = [
    "ModelParams",
    "RadialGeometry",
    "cutoff_factor",
    "free_kernel",
    "inner_w_integral",
    "kernel",
    "diagonal_relative",
]


@dataclass(frozen=True)
class ModelParams:
    """Coupling length ``lam``, renormalization mass ``kappa``, infrared mass ``eps``.

    ``lam = 0`` is the free theory.
    """

    lam: float
    kappa: float = 1.0
    eps: float = 0.0

    def __post_init__(self):
        for name in ("lam", "kappa", "eps"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.lam < 0:
            raise DomainError("lam must be >= 0 for a non-negative operator")
        if not self.kappa > 0:
            raise DomainError("kappa must be > 0")
        if self.eps < 0:
            raise DomainError("eps must be >= 0")

    def with_(self, **changes) -> "ModelParams":
        values = {"lam": self.lam, "kappa": self.kappa, "eps": self.eps}
        values.update(changes)
        return ModelParams(**values)


@dataclass(frozen=True)
class RadialGeometry:
    """Radii ``|x|``, ``|y|`` and separation ``|x - y|`` of a pair of points."""

    r_x: float
    r_y: float
    separation: float = 0.0

    def __post_init__(self):
        if not (self.r_x > 0 and self.r_y > 0):
            raise DomainError("both radii must be positive")
        if self.separation < 0:
            raise DomainError("separation must be non-negative")
        slack = 1e-12 * (self.r_x + self.r_y)
        if not (abs(self.r_x - self.r_y) - slack <= self.separation <= self.r_x + self.r_y + slack):
            raise DomainError("radii and separation violate the triangle inequality")

    @classmethod
    def diagonal(cls, r: float) -> "RadialGeometry":
        return cls(r, r, 0.0)

    def swapped(self) -> "RadialGeometry":
        return RadialGeometry(self.r_y, self.r_x, self.separation)


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise DomainError("heat-kernel time t must be > 0")
    return t


def _scalar(v):
    return float(v) if np.ndim(v) == 0 else v


def cutoff_factor(eps: float, t):
    """``exp(-eps^2 t)``; every kernel applies the infrared mass through this one call."""
    return np.exp(-(eps * eps) * np.asarray(t, dtype=float))


def _free_at_zero_mass(geom: RadialGeometry, t):
    return (4.0 * math.pi * t) ** -1.5 * np.exp(-geom.separation**2 / (4.0 * t))


def free_kernel(geom: RadialGeometry, t, p: ModelParams):
    """``exp(-eps^2 t) (4 pi t)^(-3/2) exp(-|x-y|^2 / 4t)``."""
    t = _check_t(t)
    return _scalar(cutoff_factor(p.eps, t) * _free_at_zero_mass(geom, t))


def inner_w_integral(a, t, lam: float, scaled: bool = False):
    """``(1/lam) * int_0^inf exp(-(w/lam + (w + a)^2 / 4t)) dw`` in closed form.

    Completing the square gives
    ``(sqrt(pi t)/lam) * exp(-a^2/4t) * erfcx(a / (2 sqrt t) + sqrt(t) / lam)``;
    the would-be ``exp(t/lam^2 + a/lam)`` growth is absorbed by ``erfcx``.
    ``scaled=True`` omits the ``exp(-a^2/4t)`` factor.
    """
    if not lam > 0:
        raise DomainError("inner_w_integral needs lam > 0; use the free kernel at lam = 0")
    t = _check_t(t)
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise DomainError("a = |x| + |y| must be non-negative")
    st = np.sqrt(t)
    value = SQRT_PI * st / lam * erfcx(a / (2.0 * st) + st / lam)
    return _scalar(value if scaled else np.exp(-a * a / (4.0 * t)) * value)


def _correction_bracket(a, t, lam):
    """``exp(-a^2/4t) - inner_w_integral(a, t, lam)`` with the Gaussian factored once."""
    st = np.sqrt(t)
    shift = a / (2.0 * st)
    with np.errstate(over="ignore"):  # subnormal lam: z = inf and the bracket is 0
        z = shift + st / lam
    # 1 - sqrt(pi) (z - shift) erfcx(z), rearranged so nothing cancels
    return np.exp(-a * a / (4.0 * t)) * (erfcx_complement(z) + SQRT_PI * shift * erfcx(z))


def _kernel_at_zero_mass(geom: RadialGeometry, t, lam: float):
    free = _free_at_zero_mass(geom, t)
    if lam == 0:
        return free
    prod = geom.r_x * geom.r_y
    a = geom.r_x + geom.r_y
    return free + (4.0 * math.pi * t) ** -1.5 * (2.0 * t / prod) * _correction_bracket(a, t, lam)


def kernel(geom: RadialGeometry, t, p: ModelParams):
    """Full point-interaction heat kernel ``exp(-t A_eps)(x, y)``.

    At ``lam = 0`` the correction term is dropped entirely (not approached
    as a limit), so the result is bit-identical to ``free_kernel``.
    """
    t = _check_t(t)
    if p.lam == 0:
        return free_kernel(geom, t, p)
    return _scalar(cutoff_factor(p.eps, t) * _kernel_at_zero_mass(geom, t, p.lam))


def diagonal_relative(r: float, t, p: ModelParams):
    """Kernel minus its free part on the diagonal ``x = y``, ``|x| = r``."""
    if not r > 0:
        raise DomainError("r must be positive")
    if not p.lam > 0:
        raise DomainError("diagonal_relative needs lam > 0")
    t = _check_t(t)
    bracket = _correction_bracket(2.0 * r, t, p.lam)
    return _scalar(cutoff_factor(p.eps, t) * (4.0 * math.pi * t) ** -1.5 * (2.0 * t / (r * r)) * bracket)
