"""Zeta-regularized Casimir energy of a massless scalar field with a point interaction."""

__version__ = "0.1.0"

from .boundary import (
    AnomalyReport,
    BoundaryParams,
    anomaly_report,
    b_sphere,
    inner_limit,
    inner_limit_continued,
    outer_limit_check,
)
from .bulk import (
    EnergyRecord,
    SZParams,
    cutoff_shift,
    delta_e_continued,
    delta_e_defining,
    delta_e_renormalized,
    renormalization_pipeline,
    renormalized_closed_form,
    residue_at_zero,
    vacuum_energy_sz,
)
from .errors import DomainError, IntegrandError, PoleError, QuadratureError
from .heat_kernel import ModelParams, RadialGeometry, diagonal_relative, free_kernel, inner_w_integral, kernel
from .laurent import LaurentEstimate, Regulator, regular_part
from .quadrature import QuadratureResult, QuadratureSpec, integrate_finite, integrate_semi_infinite
from .special import EULER_GAMMA, erfc, erfcx, g_derivatives, gamma_fn, log_gamma

__all__ = [
    "AnomalyReport", "BoundaryParams", "DomainError", "EULER_GAMMA", "EnergyRecord", "IntegrandError",
    "LaurentEstimate", "ModelParams", "PoleError", "QuadratureError", "QuadratureResult", "QuadratureSpec",
    "RadialGeometry", "Regulator", "SZParams", "anomaly_report", "b_sphere", "cutoff_shift",
    "delta_e_continued", "delta_e_defining", "delta_e_renormalized", "diagonal_relative", "erfc", "erfcx",
    "free_kernel", "g_derivatives", "gamma_fn", "inner_limit", "inner_limit_continued", "inner_w_integral",
    "integrate_finite", "integrate_semi_infinite", "kernel", "log_gamma", "outer_limit_check",
    "regular_part", "renormalization_pipeline", "renormalized_closed_form", "residue_at_zero",
    "vacuum_energy_sz",
]
