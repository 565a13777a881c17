import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from deltacasimir.errors import DomainError
from deltacasimir.laurent import Regulator, regular_part, richardson_even


def test_pole_plus_constant():
    est = regular_part(lambda u: 1.0 / u + 7.0)
    assert abs(est.residue - 1.0) <= 1e-12
    assert abs(est.regular_part - 7.0) <= 1e-12


def test_pole_plus_exponential():
    est = regular_part(lambda u: 1.0 / u + math.exp(u), Regulator(stencil_h=1e-2, richardson_levels=3))
    assert abs(est.residue - 1.0) <= 1e-10
    assert abs(est.regular_part - 1.0) <= 1e-10
    assert est.converged


def test_cos_over_u():
    est = regular_part(lambda u: math.cos(u) / u)
    assert abs(est.residue - 1.0) <= 1e-10
    assert abs(est.regular_part) <= 1e-10


def test_shifted_pole():
    est = regular_part(lambda u: 3.0 / (u - 0.5) + math.sin(u), Regulator(u=0.5))
    assert est.residue == pytest.approx(3.0, abs=1e-12)
    assert est.regular_part == pytest.approx(math.sin(0.5), abs=1e-10)


def test_pole_plus_quadratic_one_level():
    a, b, c, d = 2.0, -1.5, 0.7, 4.0
    f = lambda u: a / u + b + c * u + d * u * u
    h = 1e-2
    plain = regular_part(f, Regulator(stencil_h=h, richardson_levels=1))
    assert plain.regular_part == pytest.approx(b + d * h * h, abs=1e-13)
    once = regular_part(f, Regulator(stencil_h=h, richardson_levels=2))
    assert abs(once.regular_part - b) <= 1e-13
    assert abs(once.residue - a) <= 1e-13


analytic = st.tuples(st.floats(-5, 5), st.floats(-5, 5), st.floats(-3, 3), st.floats(0.1, 2.0))


def make(params):
    a, b, c, k = params
    return lambda u: a / u + b + c * math.sin(k * u) + math.exp(k * u)


@given(analytic, analytic, st.floats(-3, 3))
def test_linear_in_f(p1, p2, alpha):
    f, g = make(p1), make(p2)
    ef, eg = regular_part(f), regular_part(g)
    ec = regular_part(lambda u: f(u) + alpha * g(u))
    scale = 1.0 + abs(ef.regular_part) + abs(alpha * eg.regular_part) + abs(ef.residue) + abs(alpha * eg.residue)
    assert abs(ec.regular_part - (ef.regular_part + alpha * eg.regular_part)) <= 1e-9 * scale
    assert abs(ec.residue - (ef.residue + alpha * eg.residue)) <= 1e-9 * scale


@given(analytic)
def test_stencil_invariance(params):
    f = make(params)
    coarse = regular_part(f, Regulator(stencil_h=0.08))
    fine = regular_part(f, Regulator(stencil_h=0.04))
    assert abs(coarse.regular_part - fine.regular_part) < 10 * coarse.regular_error + 1e-12


def test_richardson_even_exact_on_quadratic_in_h2():
    hs = [0.1 / 2**k for k in range(4)]
    est, err, ok = richardson_even([5.0 + 3 * h**2 - 2 * h**4 for h in hs])
    assert est == pytest.approx(5.0, abs=1e-13)
    assert ok


def test_richardson_single_value_unconverged():
    est, err, ok = richardson_even([1.0])
    assert est == 1.0 and math.isinf(err) and not ok


def test_function_errors_propagate():
    def f(u):
        raise ZeroDivisionError("boom")

    with pytest.raises(ZeroDivisionError):
        regular_part(f)


@pytest.mark.parametrize("kwargs", [dict(stencil_h=0.0), dict(stencil_h=0.2), dict(richardson_levels=0)])
def test_regulator_validation(kwargs):
    with pytest.raises(DomainError):
        Regulator(**kwargs)
