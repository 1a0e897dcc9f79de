from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from hypercs.errors import ConvergenceError, DivergenceError, DomainError, QuadratureError
from hypercs.model import CANONICAL, ModelParams, pho
from hypercs.specfun import (
    bessel_i,
    bessel_k,
    cancel_parameters,
    log_gamma,
    log_pochhammer,
    pfq,
    pfq_partial,
    pochhammer,
    radial_quadrature,
    series_radius,
)


@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (2.0, 0.0), (5.0, math.log(24))])
def test_log_gamma_examples(x, expected):
    assert log_gamma(x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("x", [1e-8, 0.3, 7.7, 123.4, 1e6])
def test_log_gamma_matches_scipy(x):
    assert log_gamma(x) == pytest.approx(special.gammaln(x), rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
def test_log_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        log_gamma(x)


def test_pochhammer_examples():
    assert pochhammer(2, 3) == 24
    assert pochhammer(-3.7, 0) == 1
    assert pochhammer(1.5, 2) == pytest.approx(3.75, rel=1e-15)


def test_pochhammer_integer_is_exact():
    assert pochhammer(3, 10) == math.factorial(12) // 2


def test_pochhammer_hits_zero():
    assert pochhammer(-2.0, 4) == 0.0


def test_pochhammer_overflow_goes_through_logs():
    lg, sign = log_pochhammer(1.5, 400)
    assert sign == 1
    assert lg == pytest.approx(special.gammaln(401.5) - special.gammaln(1.5), rel=1e-13)
    assert pochhammer(1.5, 400) == math.inf


# dyadic a keeps a - n and 1 - a exact, so only pochhammer's own rounding is measured
dyadic = st.integers(-6 * 2**30, 6 * 2**30).map(lambda k: k / 2**30)


@given(dyadic, st.integers(0, 10))
def test_pochhammer_reflection(a, n):
    lhs = pochhammer(a - n, n)
    rhs = (-1) ** n * pochhammer(1 - a, n)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


@given(st.floats(0.1, 8), st.integers(0, 30))
def test_pochhammer_gamma_ratio(x, n):
    assert pochhammer(x, n) == pytest.approx(special.poch(x, n), rel=1e-12)


def test_cancel_parameters_removes_equal_pairs():
    assert cancel_parameters((1.0, 2.0, 3.0), (3.0, 4.0)) == ((1.0, 2.0), (4.0,))


def test_series_radius():
    assert series_radius((), ()) == math.inf
    assert series_radius((2.0,), ()) == 1.0
    assert series_radius((1.0, 2.0), ()) == 0.0


def test_pfq_examples():
    assert pfq(CANONICAL, 1.0).value == pytest.approx(math.e, rel=1e-14)
    assert pfq(pho(1.0), 1.0).value.real == pytest.approx(math.sinh(2) / 2, rel=1e-13)
    assert pfq(ModelParams(a=(0.7, 1.1), b=(2.0,)), 0.0).value == 1


@pytest.mark.parametrize("x", np.linspace(-20, 20, 21))
def test_pfq_exp_reduction(x):
    assert pfq(CANONICAL, x).value.real == pytest.approx(math.exp(x), rel=1e-12)
    assert pfq(ModelParams(a=(2.5,), b=(2.5,)), x).value.real == pytest.approx(math.exp(x), rel=1e-12)


@pytest.mark.parametrize("a", [0.5, 1.3, 2.0])
@pytest.mark.parametrize("x", [-0.9, -0.3, 0.4, 0.9])
def test_pfq_binomial_series(a, x):
    assert pfq(ModelParams(a=(a,)), x).value.real == pytest.approx((1 - x) ** (-a), rel=1e-10)


@pytest.mark.parametrize("b", [1.5, 2.5])
@pytest.mark.parametrize("y", [0.01, 1.0, 7.3, 25.0])
def test_pfq_matches_scipy_hyp0f1(b, y):
    assert pfq(ModelParams(b=(b,)), y).value.real == pytest.approx(special.hyp0f1(b, y), rel=1e-12)


def test_pfq_complex_argument():
    x = 0.3 + 1.7j
    assert pfq(ModelParams(b=(1.5,)), x).value == pytest.approx(complex(special.hyp0f1(1.5, x)), rel=1e-12)


def test_pfq_divergence():
    with pytest.raises(DivergenceError):
        pfq(ModelParams(a=(2.0,)), 1.0)


def test_pfq_convergence_cap():
    with pytest.raises(ConvergenceError):
        pfq(ModelParams(a=(2.0,)), 0.999999)


def test_pfq_reports_tail():
    res = pfq(pho(1.0), 4.0, 1e-12)
    assert res.terms_used >= 1
    assert 0 <= res.tail_bound <= 1e-12 * max(1.0, abs(res.value))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(0.2, 4.0), max_size=2),
    st.lists(st.floats(0.2, 4.0), max_size=3),
    st.floats(0.0, 0.95),
    st.integers(5, 60),
)
def test_tail_bound_is_a_bound(a, b, x, n):
    params = ModelParams(a=tuple(a), b=tuple(b))
    if len(a) > len(b) + 1:
        return
    s1, tail = pfq_partial(params, x, n)
    s2, _ = pfq_partial(params, x, 2 * n)
    assert s2 - s1 <= tail * (1 + 1e-12) + 1e-15 * s2


@pytest.mark.parametrize("nu, x, expected", [(0.5, 2.0, 2.0462369), (0.0, 0.0, 1.0), (1.3, 0.0, 0.0)])
def test_bessel_i_examples(nu, x, expected):
    assert bessel_i(nu, x) == pytest.approx(expected, rel=1e-7, abs=1e-300)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 1.5, 2.3, -0.5, -1.3])
@pytest.mark.parametrize("x", [0.01, 0.7, 3.0, 17.0, 50.0])
def test_bessel_i_matches_scipy(nu, x):
    assert bessel_i(nu, x) == pytest.approx(special.iv(nu, x), rel=1e-10)


@pytest.mark.parametrize("nu, x, expected", [(0.5, 2.0, 0.1199377), (0.5, 1.0, 0.4610685)])
def test_bessel_k_examples(nu, x, expected):
    assert bessel_k(nu, x) == pytest.approx(expected, rel=1e-6)
    assert bessel_k(nu, x) == pytest.approx(math.sqrt(math.pi / (2 * x)) * math.exp(-x), rel=1e-12)


@pytest.mark.parametrize("nu", [0.0, 0.05, 0.5, 1.0, 1.5, 2.3, 3.7])
@pytest.mark.parametrize("x", [0.01, 0.3, 1.9, 2.1, 10.0, 50.0])
def test_bessel_k_matches_scipy(nu, x):
    assert bessel_k(nu, x) == pytest.approx(special.kv(nu, x), rel=1e-8)


@given(st.floats(0.0, 4.0), st.floats(0.01, 50.0))
def test_bessel_k_order_symmetry(nu, x):
    assert bessel_k(-nu, x) == pytest.approx(bessel_k(nu, x), rel=1e-14)


def test_bessel_k_domain():
    with pytest.raises(DomainError):
        bessel_k(0.5, 0.0)


def test_radial_quadrature_examples():
    assert radial_quadrature(lambda x: math.exp(-x)) == pytest.approx(1.0, rel=1e-10)
    assert radial_quadrature(lambda x: math.exp(-x) * x**3) == pytest.approx(6.0, rel=1e-10)
    f = lambda x: 2 * math.sqrt(x) * bessel_k(1.0, 2 * math.sqrt(x)) * x
    assert radial_quadrature(f) == pytest.approx(2.0, rel=1e-10)


def test_radial_quadrature_complex():
    val = radial_quadrature(lambda x: complex(math.exp(-x), x * math.exp(-x)))
    assert val == pytest.approx(1 + 1j, rel=1e-10)


def test_radial_quadrature_reports_failure():
    with pytest.raises(QuadratureError):
        radial_quadrature(lambda x: 1.0 / (1.0 + x), 1e-10)
