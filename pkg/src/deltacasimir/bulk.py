"""Relative bulk Casimir energy of the point interaction.

Two representations of the zeta-regularized energy ``dE(u, eps)`` are
provided. ``delta_e_defining`` is valid for ``u > 1`` and integrates the
diagonal of the heat kernel directly. ``delta_e_continued`` is the analytic
continuation to ``u > -1`` with a simple pole at ``u = 0``, written in terms
of the second derivative of ``exp(-(eps lam)^2 tau^2) erfcx(tau)``.

In the defining representation the ``r`` and ``w`` integrals collapse
analytically:

    int_0^inf dr [exp(-r^2/t) - (1/lam) int_0^inf dw exp(-w/lam - (w+2r)^2/4t)]
        = (sqrt(pi t) / 2) * erfcx(sqrt(t) / lam)

so only the ``t`` integral is done numerically. The intermediate form, with
the ``w`` integral still open, is kept in ``r_integral_w_form`` as a check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PoleError
from .heat_kernel import ModelParams
from .laurent import LaurentEstimate, Regulator, regular_part
from .quadrature import QuadratureSpec, integrate_semi_infinite
from .special import EULER_GAMMA, SQRT_PI, erfc, erfcx, g_derivatives, gamma_fn

__all__ = [
    "SZParams",
    "EnergyRecord",
    "RenormalizedEnergy",
    "PipelineResult",
    "r_integral",
    "r_integral_w_form",
    "delta_e_defining",
    "delta_e_continued",
    "bulk_record",
    "residue_at_zero",
    "renormalized_closed_form",
    "delta_e_renormalized",
    "cutoff_shift",
    "renormalization_pipeline",
    "vacuum_energy_sz",
]

PIPELINE_QUAD = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-13)


@dataclass(frozen=True)
class SZParams:
    """Coupling ``alpha`` and renormalization length ``ell`` of the partition-function result."""

    alpha: float
    ell: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.ell > 0):
            raise DomainError("alpha and ell must be positive")

    @classmethod
    def from_model(cls, p: ModelParams) -> "SZParams":
        """``alpha = 1/(4 pi lam)`` and ``ell = e / kappa``."""
        if not p.lam > 0:
            raise DomainError("lam must be positive")
        return cls(1.0 / (4.0 * math.pi * p.lam), math.e / p.kappa)


@dataclass(frozen=True)
class EnergyRecord:
    params: ModelParams
    u: float
    representation: str
    value: float
    error_estimate: float


@dataclass(frozen=True)
class RenormalizedEnergy:
    """Closed form ``log(kappa lam)/(2 pi lam)`` together with its numerical check."""

    value: float
    numeric: float
    numeric_error: float

    @property
    def difference(self) -> float:
        return self.numeric - self.value


@dataclass(frozen=True)
class PipelineResult:
    value: float
    error_estimate: float
    eps: tuple[float, ...]
    regular_parts: tuple[LaurentEstimate, ...]
    direct_eps0: float
    converged: bool
    model: str
    coefficients: tuple[float, ...] = field(default=())

    @property
    def order_gap(self) -> float:
        """Extrapolated limit minus the direct ``eps = 0`` regular part."""
        return self.value - self.direct_eps0


def _require_coupling(p: ModelParams):
    if not p.lam > 0:
        raise DomainError("the relative bulk energy needs lam > 0")


def r_integral(t, lam: float):
    """Radial integral of the relative diagonal kernel bracket, closed form."""
    t = np.asarray(t, dtype=float)
    return 0.5 * SQRT_PI * np.sqrt(t) * erfcx(np.sqrt(t) / lam)


def r_integral_w_form(t: float, lam: float, quad: QuadratureSpec | None = None) -> float:
    """Same quantity with the ``r`` integral done and the ``w`` integral numerical.

    Uses ``int_0^inf exp(-(w+2r)^2/4t) dr = (sqrt(pi t)/2) erfc(w / 2 sqrt t)``.
    """
    quad = (quad or QuadratureSpec(rel_tol=1e-13)).with_(split_point=min(lam, math.sqrt(t)))
    res = integrate_semi_infinite(lambda w: np.exp(-w / lam) * erfc(w / (2.0 * math.sqrt(t))) / lam, quad)
    return 0.5 * math.sqrt(math.pi * t) * (1.0 - res.value)


def _defining(u: float, p: ModelParams, quad: QuadratureSpec | None, inner: str):
    if not u > 1:
        raise DomainError("the defining representation needs u > 1")
    if not p.eps > 0:
        raise DomainError("the defining representation needs eps > 0")
    _require_coupling(p)
    lam, eps = p.lam, p.eps
    scale = min(lam * lam, 1.0 / (eps * eps))
    quad = (quad or QuadratureSpec()).with_(
        endpoint_exponent_hint=(u - 1.0) / 2.0,
        split_point=scale,
        breakpoints=(lam * lam, 1.0 / (eps * eps)),
    )
    if inner == "closed":
        radial = lambda t: r_integral(t, lam)  # noqa: E731
    elif inner == "quadrature":
        radial = np.vectorize(lambda t: r_integral_w_form(t, lam))
    else:
        raise DomainError(f"unknown inner method {inner!r}")

    def integrand(t):
        return t ** (u / 2.0 - 2.0) * np.exp(-eps * eps * t) * radial(t)

    res = integrate_semi_infinite(integrand, quad)
    pref = p.kappa**u / (math.sqrt(4.0 * math.pi) * gamma_fn((u - 1.0) / 2.0))
    return pref * res.value, abs(pref) * res.error_estimate


def delta_e_defining(u: float, p: ModelParams, quad: QuadratureSpec | None = None, inner: str = "closed") -> float:
    """Relative bulk energy from its defining integral, ``u > 1``, ``eps > 0``.

    ``inner="quadrature"`` keeps the ``w`` integral numerical (slow; for checks).
    """
    return _defining(float(u), p, quad, inner)[0]


def _continued(u: float, p: ModelParams, quad: QuadratureSpec | None):
    if u == 0:
        raise PoleError("dE(u) has a simple pole at u = 0")
    if not u > -1:
        raise DomainError("the continuation is only valid for u > -1")
    _require_coupling(p)
    beta = p.eps * p.lam
    knee = 1.0 if beta <= 1.0 else 1.0 / beta
    quad = (quad or QuadratureSpec()).with_(
        endpoint_exponent_hint=u + 1.0,
        split_point=knee,
        breakpoints=(1.0, 1.0 / beta) if beta > 0 else (),
    )

    def integrand(tau):
        return tau**u * g_derivatives(tau, beta)[2]

    res = integrate_semi_infinite(integrand, quad)
    pref = (p.lam * p.kappa) ** u / (4.0 * p.lam * u * gamma_fn((u + 1.0) / 2.0))
    return pref * res.value, abs(pref) * res.error_estimate


def delta_e_continued(u: float, p: ModelParams, quad: QuadratureSpec | None = None) -> float:
    """Analytically continued relative bulk energy, ``u > -1``, ``u != 0``.

    Works for ``eps = 0`` as long as ``u < 2`` (the integrand then decays
    like ``tau**(u-3)``).
    """
    return _continued(float(u), p, quad)[0]


def bulk_record(u: float, p: ModelParams, representation: str = "continued",
                quad: QuadratureSpec | None = None) -> EnergyRecord:
    """One energy evaluation as a record.

    ``representation="renormalized"`` ignores ``u`` and the cutoff and stores
    the renormalized energy at ``u = 0``; its error is the larger of the
    quadrature error and the gap to the closed form.
    """
    if representation == "renormalized":
        r = delta_e_renormalized(p.with_(eps=0.0), quad)
        return EnergyRecord(p, 0.0, representation, r.value, max(abs(r.difference), r.numeric_error))
    if representation == "continued":
        value, err = _continued(float(u), p, quad)
    elif representation == "defining":
        value, err = _defining(float(u), p, quad, "closed")
    else:
        raise DomainError(f"unknown representation {representation!r}")
    return EnergyRecord(p, float(u), representation, value, err)


def residue_at_zero(p: ModelParams) -> float:
    """Residue of ``dE(u)`` at ``u = 0``: ``1 / (2 pi lam)`` for every ``eps``.

    The tau integral of ``h''`` equals ``-h'(0) = 2/sqrt(pi)`` whatever the
    damping, and the prefactor at ``u = 0`` is ``1 / (4 lam sqrt(pi))``.
    """
    _require_coupling(p)
    return 1.0 / (2.0 * math.pi * p.lam)


def renormalized_closed_form(lam: float, kappa: float) -> float:
    return math.log(kappa * lam) / (2.0 * math.pi * lam)


def delta_e_renormalized(p: ModelParams, quad: QuadratureSpec | None = None) -> RenormalizedEnergy:
    """Renormalized relative bulk energy.

    ``value`` is the closed form. ``numeric`` is the integral
    ``(1/lam) int (gamma + 2 log(2 kappa lam tau)) / (8 sqrt(pi)) g''(tau) dtau``
    evaluated by quadrature; the two should agree to quadrature accuracy.
    """
    _require_coupling(p)
    lam, kappa = p.lam, p.kappa
    quad = (quad or PIPELINE_QUAD).with_(endpoint_exponent_hint=1.0, split_point=1.0)
    shift = EULER_GAMMA + 2.0 * math.log(2.0 * kappa * lam)

    def integrand(tau):
        return (shift + 2.0 * np.log(tau)) * g_derivatives(tau, 0.0)[2]

    res = integrate_semi_infinite(integrand, quad)
    scale = 1.0 / (8.0 * SQRT_PI * lam)
    return RenormalizedEnergy(renormalized_closed_form(lam, kappa), scale * res.value, scale * res.error_estimate)


def _harmonic(n: int) -> float:
    return math.fsum(1.0 / k for k in range(1, n + 1))


def _shift_terms(beta: float, k_min: int, k_max: int) -> float:
    if beta == 0 or k_max < k_min:
        return 0.0
    log_b = math.log(beta)
    total = []
    c = 1.0 / (2.0 * SQRT_PI)  # c_1; c_(k+1) = c_k (2k - 1) / (2k + 2)
    for k in range(1, k_max + 1):
        if k >= k_min:
            digammas = _harmonic(k) + _harmonic(k - 1) - 2.0 * _harmonic(2 * k - 2)
            total.append(c * beta ** (2 * k) * (digammas + 2.0 * math.log(2.0) - 2.0 * log_b))
        c *= (2 * k - 1) / (2 * k + 2)
    return math.fsum(total)


def _shift_quadrature(beta: float) -> float:
    """``D(beta)`` by direct quadrature; used where the series converges slowly."""
    quad = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-300, endpoint_exponent_hint=1.0,
                          breakpoints=(1.0 / beta,))
    res = integrate_semi_infinite(lambda tau: -np.expm1(-((beta * tau) ** 2)) * erfcx(tau) / tau**2, quad)
    return res.value


def cutoff_shift(eps: float, lam: float, k_min: int = 1, k_max: int = 30) -> float:
    """Exact change of the regular part at ``u = 0`` caused by the infrared mass.

    ``RP(eps) - RP(0) = D(eps lam) / (4 lam sqrt(pi))`` with
    ``D(b) = int_0^inf (1 - exp(-b^2 tau^2)) erfcx(tau) / tau^2 dtau``.
    Closing the Mellin-Barnes contour of ``D`` on the double poles at
    ``z = -2k`` gives the series (convergent for ``b < 1``)

        D(b) = sum_k c_k b^(2k) [H_k + H_(k-1) - 2 H_(2k-2) + 2 log 2 - 2 log b],
        c_k  = (2k-2)! / (2^(2k-1) sqrt(pi) k! (k-1)!).

    ``k_min`` > 1 returns only the terms from ``k_min`` on. The series is
    summed up to ``k_max`` for ``b <= 0.5``; above that ``D`` is integrated
    directly and the terms below ``k_min`` are subtracted.
    """
    if not (eps >= 0 and lam > 0 and math.isfinite(eps * lam)):
        raise DomainError("cutoff_shift needs eps >= 0 and lam > 0")
    if k_min < 1:
        raise DomainError("k_min must be >= 1")
    beta = eps * lam
    if beta <= 0.5:
        d = _shift_terms(beta, k_min, k_max)
    else:
        d = _shift_quadrature(beta) - _shift_terms(beta, 1, k_min - 1)
    return d / (4.0 * lam * SQRT_PI)


def _basis(eps: float, model: str) -> list[float]:
    e2 = eps * eps
    if model == "poly":
        return [1.0, e2, e2 * e2]
    return [1.0, e2, e2 * math.log(eps) if eps > 0 else 0.0]


def renormalization_pipeline(
    p: ModelParams,
    eps_sequence=(0.1, 0.05, 0.025),
    reg: Regulator | None = None,
    quad: QuadratureSpec | None = None,
    model: str = "log",
) -> PipelineResult:
    """Regular part at ``u = 0`` for each cutoff, then the limit ``eps -> 0``.

    The regular part depends on the cutoff as ``eps^2 log eps``, ``eps^2``,
    then ``eps^4 log eps``, ... With ``model="log"`` the known ``eps^4``-and-
    higher terms (``cutoff_shift`` with ``k_min=2``) are subtracted and
    ``{1, eps^2, eps^2 log eps}`` is fitted through the last three points.
    ``model="poly"`` fits ``{1, eps^2, eps^4}`` instead, which leaves an
    ``eps^2 log eps`` bias.

    The regular part at ``eps = 0`` is computed directly as well, so callers
    can compare both orders of limits via ``order_gap``.
    """
    _require_coupling(p)
    if model not in ("log", "poly"):
        raise DomainError(f"unknown extrapolation model {model!r}")
    eps = [float(e) for e in eps_sequence]
    if not eps or any(e < 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise DomainError("eps_sequence must be strictly decreasing and non-negative")
    reg = reg or Regulator()
    quad = quad or PIPELINE_QUAD

    def rp_at(e: float) -> LaurentEstimate:
        q = p.with_(eps=e)
        return regular_part(lambda u: delta_e_continued(u, q, quad), reg)

    estimates = tuple(rp_at(e) for e in eps)
    direct = estimates[-1] if eps[-1] == 0 else rp_at(0.0)

    used = list(zip(eps, estimates))[-3:]
    n = len(used)
    ys, rows = [], []
    for e, est in used:
        y = est.regular_part
        if model == "log":
            y -= cutoff_shift(e, p.lam, k_min=2)
        ys.append(y)
        rows.append(_basis(e, model)[:n])
    coef = np.linalg.solve(np.array(rows), np.array(ys))
    weights = np.linalg.inv(np.array(rows))[0]
    value = float(coef[0])
    error = float(np.sum(np.abs(weights) * np.array([est.regular_error for _, est in used])))

    spread = abs(ys[0] - ys[-1])
    converged = all(est.converged for est in estimates) and abs(value - ys[-1]) <= 10.0 * spread + 1e-14
    return PipelineResult(
        value=value,
        error_estimate=error,
        eps=tuple(eps),
        regular_parts=estimates,
        direct_eps0=direct.regular_part,
        converged=converged,
        model=model,
        coefficients=tuple(float(c) for c in coef),
    )


def vacuum_energy_sz(sz: SZParams) -> float:
    """Vacuum energy ``2 alpha (1 - log(4 pi alpha ell))`` from the partition function."""
    return 2.0 * sz.alpha * (1.0 - math.log(4.0 * math.pi * sz.alpha * sz.ell))
