"""Residue and regular part of a function with a simple pole.

For ``f(u) = a/u + b + c u + d u^2 + ...`` the symmetric combinations

    (f(h) + f(-h)) / 2   = b + d h^2 + ...
    h (f(h) - f(-h)) / 2 = a + c h^2 + ...

remove the pole exactly and leave only even powers of ``h``, so repeated
halving of ``h`` plus Richardson extrapolation in ``h^2`` recovers ``a``
and ``b`` to high order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError

__all__ = ["Regulator", "LaurentEstimate", "regular_part", "richardson_even"]


@dataclass(frozen=True)
class Regulator:
    """Stencil for extracting Laurent coefficients at the origin.

    The offsets used are ``+-h, +-h/2, ..., +-h/2**(levels-1)`` around the
    pole location ``u`` (default 0). ``h`` must not exceed 0.1 so every
    stencil point at ``u = 0`` stays well inside ``u > -1``.
    """

    stencil_h: float = 1e-2
    richardson_levels: int = 3
    u: float = 0.0

    def __post_init__(self):
        if not 0 < self.stencil_h <= 0.1:
            raise DomainError("stencil_h must lie in (0, 0.1]")
        if self.richardson_levels < 1:
            raise DomainError("richardson_levels must be >= 1")

    def offsets(self) -> list[float]:
        return [self.stencil_h / 2**k for k in range(self.richardson_levels)]


@dataclass(frozen=True)
class LaurentEstimate:
    residue: float
    regular_part: float
    residue_error: float
    regular_error: float
    converged: bool = True


def richardson_even(values: list[float]) -> tuple[float, float, bool]:
    """Extrapolate ``values[k] ~ v + c1 (h/2^k)^2 + c2 (h/2^k)^4 + ...`` to ``h -> 0``.

    Returns ``(estimate, error, converged)``. The error is the size of the
    last correction; ``converged`` is False when the corrections stop
    shrinking.
    """
    row = list(values)
    if len(row) == 1:
        return row[0], float("inf"), False
    increments = []
    for level in range(1, len(values)):
        factor = 4.0**level
        new = [(factor * row[i + 1] - row[i]) / (factor - 1.0) for i in range(len(row) - 1)]
        increments.append(abs(new[-1] - row[-1]))
        row = new
    converged = all(b <= a or b == 0 for a, b in zip(increments, increments[1:]))
    return row[0], increments[-1], converged


def regular_part(f, reg: Regulator | None = None) -> LaurentEstimate:
    """Estimate the residue and regular part of ``f`` at its pole ``reg.u``.

    Exceptions raised by ``f`` at a stencil point propagate unchanged.
    """
    reg = reg or Regulator()
    means, residues = [], []
    for h in reg.offsets():
        fp = float(f(reg.u + h))
        fm = float(f(reg.u - h))
        means.append(0.5 * (fp + fm))
        residues.append(0.5 * h * (fp - fm))
    b, b_err, b_ok = richardson_even(means)
    a, a_err, a_ok = richardson_even(residues)
    return LaurentEstimate(a, b, a_err, b_err, b_ok and a_ok)
