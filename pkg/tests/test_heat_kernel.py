import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from deltacasimir.errors import DomainError
from deltacasimir.heat_kernel import (
    cutoff_factor,
    ModelParams,
    RadialGeometry,
    diagonal_relative,
    free_kernel,
    inner_w_integral,
    kernel,
)
from deltacasimir.special import erfcx
from deltacasimir.verify import inner_w_integral_quadrature


def w_integral_mp(a, t, lam):
    a, t, lam = mpmath.mpf(a), mpmath.mpf(t), mpmath.mpf(lam)
    f = lambda w: mpmath.exp(-(w / lam + (w + a) ** 2 / (4 * t))) / lam
    return mpmath.quad(f, [0, lam, mpmath.sqrt(t), mpmath.inf])


# --- parameter types ----------------------------------------------------------

def test_model_params_validation():
    with pytest.raises(DomainError):
        ModelParams(-1.0)
    with pytest.raises(DomainError):
        ModelParams(1.0, kappa=0.0)
    with pytest.raises(DomainError):
        ModelParams(1.0, eps=-0.1)
    with pytest.raises(DomainError):
        ModelParams(math.nan)
    assert ModelParams(1.0).with_(eps=2.0) == ModelParams(1.0, 1.0, 2.0)


def test_geometry_validation():
    with pytest.raises(DomainError):
        RadialGeometry(0.0, 1.0)
    with pytest.raises(DomainError):
        RadialGeometry(1.0, 1.0, 3.0)
    with pytest.raises(DomainError):
        RadialGeometry(1.0, 3.0, 0.5)
    g = RadialGeometry(1.0, 2.0, 1.5)
    assert g.swapped() == RadialGeometry(2.0, 1.0, 1.5)


# --- free kernel ----------------------------------------------------------------

def test_free_kernel_coincident_points():
    value = free_kernel(RadialGeometry.diagonal(1.0), 1.0, ModelParams(0.0))
    assert value == pytest.approx((4 * math.pi) ** -1.5, rel=1e-15)


def test_free_kernel_cutoff_factor():
    g = RadialGeometry(1.0, 2.0, 1.5)
    ratio = free_kernel(g, 1.0, ModelParams(0.0, eps=2.0)) / free_kernel(g, 1.0, ModelParams(0.0))
    assert ratio == pytest.approx(math.exp(-4.0), rel=1e-15)


def test_free_kernel_swap_symmetry():
    g = RadialGeometry(0.5, 2.0, 2.0)
    p = ModelParams(0.0)
    assert free_kernel(g, 0.3, p) == free_kernel(g.swapped(), 0.3, p)


# --- inner w integral ------------------------------------------------------------

def test_inner_w_origin_value():
    closed = inner_w_integral(0.0, 1.0, 1.0)
    assert closed == pytest.approx(math.sqrt(math.pi) * erfcx(1.0), rel=1e-15)
    assert abs(closed - inner_w_integral_quadrature(0.0, 1.0, 1.0)) <= 1e-10


def test_inner_w_delta_limit():
    a, t = 2.0, 1.0
    value = inner_w_integral(a, t, 1e-4)
    assert abs(value - math.exp(-a * a / (4 * t))) <= 1e-3
    assert value == pytest.approx(float(w_integral_mp(a, t, 1e-4)), rel=1e-10)


def test_inner_w_decreasing_in_a():
    a = np.linspace(0.0, 20.0, 201)
    v = inner_w_integral(a, 1.3, 0.7)
    assert np.all(np.diff(v) < 0)


@pytest.mark.parametrize("a,t,lam", [(0.0, 1e-3, 1e3), (1e-3, 1e3, 1e-3), (5.0, 0.1, 2.0), (30.0, 1.0, 0.5)])
def test_inner_w_against_mpmath(a, t, lam):
    assert inner_w_integral(a, t, lam) == pytest.approx(float(w_integral_mp(a, t, lam)), rel=1e-12)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_inner_w_closed_form_vs_quadrature(la, lt, ll):
    a, t, lam = 10.0**la, 10.0**lt, 10.0**ll
    closed = inner_w_integral(a, t, lam, scaled=True)
    assert closed == pytest.approx(inner_w_integral_quadrature(a, t, lam), rel=1e-10)


def test_inner_w_domain():
    with pytest.raises(DomainError):
        inner_w_integral(1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        inner_w_integral(-1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        inner_w_integral(1.0, 0.0, 1.0)


# --- kernel --------------------------------------------------------------------

def test_kernel_free_at_zero_coupling():
    g = RadialGeometry(0.4, 1.1, 0.9)
    for eps in (0.0, 1.5):
        p = ModelParams(0.0, eps=eps)
        assert kernel(g, 0.7, p) == free_kernel(g, 0.7, p)


@given(st.floats(0.05, 5.0), st.floats(0.05, 5.0), st.floats(0.0, 1.0), st.floats(-2, 2),
       st.floats(0.0, 3.0), st.floats(0.0, 5.0))
def test_kernel_swap_symmetric_and_free_limit(rx, ry, frac, lt, eps, lam):
    sep = abs(rx - ry) + frac * (rx + ry - abs(rx - ry))
    g = RadialGeometry(rx, ry, sep)
    t = 10.0**lt
    p = ModelParams(lam, eps=eps)
    assert kernel(g, t, p) == kernel(g.swapped(), t, p)
    q = ModelParams(0.0, eps=eps)
    assert kernel(g, t, q) == free_kernel(g, t, q)


@given(st.floats(0.1, 3.0), st.floats(-2, 2), st.floats(0.01, 3.0), st.floats(0.0, 4.0))
def test_kernel_cutoff_factorizes(r, lt, eps, lam):
    g = RadialGeometry(r, 2 * r, 1.5 * r)
    t = 10.0**lt
    base = kernel(g, t, ModelParams(lam))
    assert kernel(g, t, ModelParams(lam, eps=eps)) == cutoff_factor(eps, t) * base


def test_kernel_continuous_at_zero_coupling():
    g = RadialGeometry.diagonal(1.0)
    free = kernel(g, 1.0, ModelParams(0.0))
    gaps = [abs(kernel(g, 1.0, ModelParams(lam)) - free) / free for lam in (1e-2, 1e-3, 1e-4)]
    assert gaps[-1] <= 1e-2
    assert gaps[0] > gaps[1] > gaps[2]


def test_kernel_matches_defining_expression():
    rx, ry, sep, t, lam = 0.8, 1.3, 1.0, 0.6, 0.9
    a = mpmath.mpf(rx + ry)
    free = (4 * mpmath.pi * t) ** -1.5 * mpmath.exp(-mpmath.mpf(sep) ** 2 / (4 * t))
    corr = (4 * mpmath.pi * t) ** -1.5 * (2 * t / (rx * ry)) * (mpmath.exp(-a * a / (4 * t)) - w_integral_mp(a, t, lam))
    got = kernel(RadialGeometry(rx, ry, sep), t, ModelParams(lam))
    assert got == pytest.approx(float(free + corr), rel=1e-13)


# --- diagonal --------------------------------------------------------------------

def test_diagonal_relative_is_kernel_difference():
    p = ModelParams(1.0)
    g = RadialGeometry.diagonal(1.0)
    assert abs(diagonal_relative(1.0, 1.0, p) - (kernel(g, 1.0, p) - free_kernel(g, 1.0, p))) <= 1e-13


def test_diagonal_relative_sign():
    r, t, lam = 2.0, 0.1, 1.0
    assert math.sqrt(math.pi * t) / lam * erfcx(r / math.sqrt(t) + math.sqrt(t) / lam) < 1
    assert diagonal_relative(r, t, ModelParams(lam)) > 0


def test_diagonal_relative_far_decay():
    assert 0 <= diagonal_relative(30.0, 1.0, ModelParams(1.0)) < 1e-300


def test_diagonal_relative_vectorized_in_t():
    t = np.geomspace(1e-3, 1e3, 7)
    p = ModelParams(0.5, eps=0.2)
    v = diagonal_relative(0.7, t, p)
    assert np.allclose(v, [diagonal_relative(0.7, float(x), p) for x in t], rtol=1e-15, atol=0)


def test_diagonal_relative_domain():
    with pytest.raises(DomainError):
        diagonal_relative(0.0, 1.0, ModelParams(1.0))
    with pytest.raises(DomainError):
        diagonal_relative(1.0, 1.0, ModelParams(0.0))
