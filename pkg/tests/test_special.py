import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from deltacasimir.errors import DomainError, PoleError
from deltacasimir.special import (
    EULER_GAMMA,
    SQRT_PI,
    erfc,
    erfcx,
    erfcx_complement,
    g_derivatives,
    gamma_fn,
    log_gamma,
)


def erfc_oracle(x):
    """Taylor series for small |x|, Lentz continued fraction for large x."""
    x = mpmath.mpf(x)
    if x < 0:
        return 2 - erfc_oracle(-x)
    if x < 3:
        s, term, n = mpmath.mpf(0), x, 0
        while abs(term) > mpmath.mpf(10) ** -45:
            s += term / (2 * n + 1)
            n += 1
            term = -term * x * x / n
        return 1 - 2 * s / mpmath.sqrt(mpmath.pi)
    # erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + 1/2/(x + 1/(x + 3/2/(x + ...))))
    tail = x
    for k in range(400, 0, -1):
        tail = x + (mpmath.mpf(k) / 2) / tail
    return mpmath.exp(-x * x) / mpmath.sqrt(mpmath.pi) / tail


def gamma_stirling(x):
    """Stirling series after shifting the argument past 30 by recursion."""
    x = mpmath.mpf(x)
    shift = mpmath.mpf(1)
    while x < 30:
        shift *= x
        x += 1
    series = 1 / (12 * x) - 1 / (360 * x**3) + 1 / (1260 * x**5) - 1 / (1680 * x**7) + 1 / (1188 * x**9)
    log_g = (x - mpmath.mpf(1) / 2) * mpmath.log(x) - x + mpmath.log(2 * mpmath.pi) / 2 + series
    return mpmath.exp(log_g) / shift


def rel(a, b):
    return abs(float(a) - float(b)) / abs(float(b))


# --- erfc ---------------------------------------------------------------

def test_erfc_zero():
    assert erfc(0.0) == 1.0


def test_erfc_reflection_at_one():
    assert erfc(-1.0) == pytest.approx(2.0 - erfc(1.0), rel=1e-15)


def test_erfc_one_against_dual_oracle():
    assert rel(erfc(1.0), erfc_oracle(1)) <= 1e-13
    assert rel(erfc_oracle(1), mpmath.erfc(1)) < 1e-35


@pytest.mark.parametrize("x", [-5.0, -1.3, -0.2, 1e-8, 0.3, 0.49, 0.51, 2.0, 4.5, 9.0, 17.0, 25.9])
def test_erfc_grid(x):
    assert rel(erfc(x), mpmath.erfc(x)) <= 1e-13


def test_erfc_vectorized_matches_scalar():
    xs = np.linspace(-4, 8, 37)
    out = erfc(xs)
    assert isinstance(out, np.ndarray)
    assert all(out[i] == erfc(float(x)) for i, x in enumerate(xs))


@pytest.mark.filterwarnings("error")
def test_erfc_underflows_quietly():
    assert erfc(np.array([27.5, 40.0, 1e300])).tolist() == [0.0, 0.0, 0.0]
    assert erfc(-1e300) == 2.0
    # subnormal range: value still right to the precision that survives
    assert erfc(27.0) == pytest.approx(float(mpmath.erfc(27)), rel=1e-4)


@pytest.mark.filterwarnings("error")
def test_erfcx_huge_argument_quietly():
    assert erfcx(1e300) == pytest.approx(1 / (SQRT_PI * 1e300), rel=1e-13)


def test_erfc_rejects_nan():
    with pytest.raises(DomainError):
        erfc(float("nan"))


# --- erfcx ----------------------------------------------------------------

def test_erfcx_zero():
    assert erfcx(0.0) == 1.0


def test_erfcx_large_argument_asymptotics():
    x = 1e4
    # sqrt(pi) x erfcx(x) = 1 - 1/(2x^2) + 3/(4x^4) - ...
    corrected = erfcx(x) * SQRT_PI * x / (1.0 - 0.5 / x**2)
    assert corrected == pytest.approx(1.0, rel=1e-8)


def test_erfcx_direct_product_small_x():
    assert abs(erfcx(0.5) - math.exp(0.25) * math.erfc(0.5)) <= 1e-13


@pytest.mark.parametrize("x", [-26.0, -10.0, -3.0, -0.7, 0.2, 0.999, 1.001, 1.9, 2.1, 3.9, 4.1,
                               9.99, 10.01, 30.0, 49.0, 51.0, 1e3, 1e6, 1e12])
def test_erfcx_grid(x):
    expected = mpmath.exp(mpmath.mpf(x) ** 2) * mpmath.erfc(x)
    assert rel(erfcx(x), expected) <= 1e-13


def test_erfcx_domain():
    erfcx(-26.6)
    with pytest.raises(DomainError):
        erfcx(-26.7)
    with pytest.raises(DomainError):
        erfcx(-30.5)


@given(st.floats(-5.0, 5.0))
def test_erfcx_equals_scaled_erfc(x):
    expected = math.exp(x * x) * erfc(x)
    assert erfcx(x) == pytest.approx(expected, rel=1e-12)


def test_erfcx_bounded_and_decreasing():
    xs = np.concatenate([np.linspace(0, 10, 2001), np.geomspace(10, 1e8, 500)[1:]])
    v = erfcx(xs)
    assert np.all(v > 0) and np.all(v <= 1.0)
    assert np.all(np.diff(v) < 0)


def test_erfcx_complement_matches_definition():
    for x in (0.0, 0.3, 2.0, 6.9, 7.1, 50.0, 1e4):
        mx = mpmath.mpf(x)
        expected = 1 - mpmath.sqrt(mpmath.pi) * mx * mpmath.exp(mx * mx) * mpmath.erfc(mx)
        assert rel(erfcx_complement(x), expected) <= 1e-12


# --- g_derivatives ----------------------------------------------------------

@pytest.mark.parametrize("beta", [0.0, 0.3, 1.0, 7.0])
def test_h_prime_at_origin(beta):
    _, hp, _ = g_derivatives(0.0, beta)
    assert hp == pytest.approx(-2.0 / SQRT_PI, rel=1e-15)


def test_h_without_cutoff_is_erfcx():
    assert g_derivatives(1.0, 0.0)[0] == pytest.approx(erfcx(1.0), rel=1e-15)


def test_h_second_derivative_finite_difference():
    tau, beta, step = 0.7, 0.3, 1e-4
    hm, h0, hp_ = (g_derivatives(tau + k * step, beta)[0] for k in (-1, 0, 1))
    fd = (hp_ - 2 * h0 + hm) / step**2
    assert abs(g_derivatives(tau, beta)[2] - fd) <= 1e-7


def test_g_prime_recurrence_against_finite_difference():
    step = 1e-5
    for tau in np.linspace(step, 10.0, 41):
        fd = (erfcx(tau + step) - erfcx(tau - step)) / (2 * step)
        recurrence = 2 * tau * erfcx(tau) - 2 / SQRT_PI
        assert abs(fd - recurrence) <= 1e-10


@pytest.mark.parametrize("tau", [0.0, 0.5, 3.0, 6.99, 7.01, 12.0, 200.0])
@pytest.mark.parametrize("beta", [0.0, 0.4])
def test_g_derivatives_against_mpmath(tau, beta):
    t = mpmath.mpf(tau)
    h = lambda s: mpmath.exp(-(beta * s) ** 2) * mpmath.exp(s * s) * mpmath.erfc(s)
    expected = [h(t), mpmath.diff(h, t, 1), mpmath.diff(h, t, 2)]
    got = g_derivatives(tau, beta)
    for g, e in zip(got, expected):
        scale = max(abs(e), mpmath.mpf(10) ** -300)
        assert abs(g - e) / scale <= 1e-11


def test_g_derivatives_domain():
    with pytest.raises(DomainError):
        g_derivatives(-1.0, 0.0)
    with pytest.raises(DomainError):
        g_derivatives(1.0, -0.1)


# --- gamma ------------------------------------------------------------------

def test_gamma_half():
    assert abs(gamma_fn(0.5) - math.sqrt(math.pi)) <= 1e-14


def test_gamma_recurrence():
    x = 0.3
    assert gamma_fn(x + 1) / (x * gamma_fn(x)) == pytest.approx(1.0, abs=1e-13)


def test_gamma_three_halves_against_stirling():
    assert rel(gamma_fn(1.5), gamma_stirling(1.5)) <= 1e-13


@given(st.floats(0.01, 50.0))
def test_gamma_against_stirling(x):
    assert rel(gamma_fn(x), gamma_stirling(x)) <= 1e-13
    assert abs(log_gamma(x) - float(mpmath.log(gamma_stirling(x)))) <= 1e-13 * max(1.0, abs(log_gamma(x)))


def test_gamma_negative_non_integer():
    assert rel(gamma_fn(-0.5), -2 * mpmath.sqrt(mpmath.pi)) <= 1e-14


@pytest.mark.parametrize("x", [0.0, -1.0, -3.0])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        gamma_fn(x)


def test_log_gamma_domain():
    with pytest.raises(DomainError):
        log_gamma(0.0)


def test_euler_constant():
    assert EULER_GAMMA == float(mpmath.euler)
