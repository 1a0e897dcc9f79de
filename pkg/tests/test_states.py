from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercs.errors import DivergenceError
from hypercs.model import CANONICAL, ModelParams, pho, radius_of_convergence
from hypercs.specfun import pfq
from hypercs.states import (
    ShiftSpec,
    annihilation_residual,
    bg_state,
    compare_routes,
    displacement_diagonal,
    displacement_diagonal_matrix,
    gen_binom_power,
    hypergeometric_eigen_residual,
    kp_state,
    label_distance,
    overlap,
    overlap_routes,
    sequential_displacement,
    shifted_normalization,
    shifted_state,
    truncation_residual_bound,
)

PHO = pho(1.0)
P1Q0 = ModelParams(a=(1.3,))


def _labels(params, seed, count, rmax=2.0):
    rng = np.random.default_rng(seed)
    radius = radius_of_convergence(params)
    r = min(rmax, 0.9 * math.sqrt(radius))
    return r * np.sqrt(rng.random(count)) * np.exp(2j * np.pi * rng.random(count))


def test_bg_state_examples():
    assert bg_state(CANONICAL, 1).coeffs[0] == pytest.approx(math.exp(-0.5), rel=1e-14)
    assert bg_state(PHO, 1).coeffs[0] == pytest.approx(1 / math.sqrt(math.sinh(2) / 2), rel=1e-13)
    zero = bg_state(PHO, 0)
    assert zero.coeffs[0] == 1 and not np.any(zero.coeffs[1:])


def test_bg_state_outside_radius():
    with pytest.raises(DivergenceError):
        bg_state(ModelParams(a=(2.0,)), 1.5)


@pytest.mark.parametrize("z", [0.3, 1 + 1j, -2.5j, 3.0])
def test_bg_state_canonical_closed_form(z):
    s = bg_state(CANONICAL, z, 1e-16)
    n = np.arange(s.trunc + 1)
    ref = np.array([complex(z) ** k / math.sqrt(math.factorial(k)) for k in n]) * math.exp(-abs(z) ** 2 / 2)
    assert np.max(np.abs(s.coeffs - ref)) <= 1e-12


def test_bg_state_normalized_within_tail(family):
    for z in _labels(family, 1, 20):
        s = bg_state(family, z, 1e-12)
        assert abs(s.norm() ** 2 - 1) <= s.tail_bound + 1e-14
        assert s.tail_bound <= 1e-12


def test_bg_state_fixed_truncation_reports_tail():
    s = bg_state(CANONICAL, 2.0, trunc=5)
    assert s.trunc == 5
    assert 1 - s.norm() ** 2 <= s.tail_bound
    assert s.tail_bound > 1e-3


def test_kp_state_examples():
    for z in (0.4, 1 - 0.5j):
        n = bg_state(CANONICAL, z).trunc
        assert np.allclose(kp_state(CANONICAL, z, trunc=n).coeffs, bg_state(CANONICAL, z, trunc=n).coeffs, atol=1e-15)
    s = kp_state(PHO, 0.5, 1e-14)
    assert s.coeffs[0] ** -2 == pytest.approx(0.75**-1.5, rel=1e-12)
    assert kp_state(PHO, 0).coeffs[0] == 1


def test_kp_state_radius():
    with pytest.raises(DivergenceError):
        kp_state(PHO, 1.0)
    with pytest.raises(DivergenceError):
        kp_state(ModelParams(b=(1.5, 2.0)), 0.1)


def test_overlap_examples():
    assert overlap(PHO, 0.7 - 0.2j, 0.7 - 0.2j) == pytest.approx(1.0, rel=1e-14)
    w = 1.3 + 0.4j
    assert overlap(PHO, 0, w) == pytest.approx(1 / math.sqrt(pfq(PHO, abs(w) ** 2).value.real), rel=1e-14)
    assert abs(overlap(CANONICAL, 0.5, 0.5j)) == pytest.approx(math.exp(-0.25), rel=1e-14)


def test_overlap_routes_agree(family):
    zs, ws = _labels(family, 2, 15), _labels(family, 3, 15)
    for z, w in zip(zs, ws):
        k, i = overlap_routes(family, z, w)
        assert abs(k - i) <= 1e-10


def test_annihilation_residual_examples():
    assert annihilation_residual(PHO, 0) == 0.0
    assert annihilation_residual(CANONICAL, 1, 1e-12) <= 1e-10
    assert annihilation_residual(PHO, 2, 1e-12) <= 1e-9


def test_annihilation_residual_within_bound(family):
    for z in _labels(family, 4, 15):
        s = bg_state(family, z, 1e-10)
        res = annihilation_residual(family, z, state=s)
        assert res <= 10 * truncation_residual_bound(s)


def test_annihilation_residual_shrinks_with_tol():
    values = [annihilation_residual(PHO, 1.5 + 0.5j, tol) for tol in (1e-4, 1e-8, 1e-12)]
    assert values[0] > values[1] > values[2]


def test_hypergeometric_annihilator_eigenvalue(family):
    for z, s in zip(_labels(family, 5, 10, 1.5), _labels(family, 6, 10, 1.5)):
        assert hypergeometric_eigen_residual(family, z, s) <= 1e-9


@pytest.mark.parametrize("params, x, y, l, expected", [(CANONICAL, 1, 1, 3, 8), (PHO, 1, 1, 2, 16 / 3)])
def test_gen_binom_examples(params, x, y, l, expected):
    assert gen_binom_power(params, x, y, l).value == pytest.approx(expected, rel=1e-14)


def test_gen_binom_single_term():
    bp = gen_binom_power(PHO, 0.7 + 0.1j, 0, 5)
    assert bp.value == pytest.approx((0.7 + 0.1j) ** 5, rel=1e-14)
    assert len(bp.terms) == 6


cplx = st.builds(complex, st.floats(-3, 3), st.floats(-3, 3))


@given(cplx, cplx, st.integers(0, 25))
def test_gen_binom_symmetry(x, y, l):
    assert gen_binom_power(PHO, x, y, l).value == gen_binom_power(PHO, y, x, l).value


@given(cplx, cplx, st.integers(0, 25))
def test_gen_binom_canonical_is_newton(x, y, l):
    scale = (abs(x) + abs(y)) ** l
    assert abs(gen_binom_power(CANONICAL, x, y, l).value - (x + y) ** l) <= 1e-13 * max(scale, 1.0)


def test_shift_label_polar():
    shift = ShiftSpec(-0.7, 0.4 + 0.2j, 1.3, -0.3 + 0.1j)
    mod2, phase = shift.polar()
    assert mod2 == pytest.approx(abs(shift.Z) ** 2, rel=1e-14)
    assert phase == pytest.approx(cmath.phase(shift.Z), abs=1e-14)
    assert shift.polar_residual() <= 1e-14


def test_shifted_state_examples():
    s = shifted_state(CANONICAL, ShiftSpec(1, 0.3, 1, 0.2))
    assert s.coeffs[0] == pytest.approx(math.exp(-0.125), rel=1e-12)
    z = 0.6 - 0.3j
    a = shifted_state(PHO, ShiftSpec(1, z, 0, 0.9))
    b = bg_state(PHO, z, trunc=a.trunc)
    assert np.max(np.abs(a.coeffs - b.coeffs)) <= 1e-12
    zero = shifted_state(PHO, ShiftSpec(1, 0, 1, 0))
    assert zero.coeffs[0] == 1 and not np.any(zero.coeffs[1:])


def test_shifted_state_unit_norm(family):
    for z, s in zip(_labels(family, 7, 10, 1.0), _labels(family, 8, 10, 1.0)):
        st_ = shifted_state(family, ShiftSpec(0.8, z, -0.6, s))
        assert st_.norm() == pytest.approx(1.0, abs=1e-14)


def test_shifted_state_canonical_closed_form():
    rng = np.random.default_rng(11)
    for _ in range(20):
        z, s = (2 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random()) for _ in range(2))
        st_ = shifted_state(CANONICAL, ShiftSpec(1, z, 1, s), 1e-16)
        Z = z + s
        ref = np.array([Z**k / math.sqrt(math.factorial(k)) for k in range(st_.trunc + 1)]) * math.exp(-abs(Z) ** 2 / 2)
        assert np.max(np.abs(st_.coeffs - ref)) <= 1e-10


def test_shifted_state_divergence():
    with pytest.raises(DivergenceError):
        shifted_state(P1Q0, ShiftSpec(1, 1.2, 1, 0.1))


def test_shifted_normalization_diagnostic():
    norm, literal = shifted_normalization(CANONICAL, ShiftSpec(1, 0.3, 1, 0.2))
    assert norm == pytest.approx(literal, rel=1e-14)
    norm, literal = shifted_normalization(PHO, ShiftSpec(1, 0.4, 1, 0.3))
    assert abs(norm - literal) / norm > 1e-3
    _, literal = shifted_normalization(P1Q0, ShiftSpec(1, 0.8, 1, 0.7))
    assert literal is None


def test_sequential_examples():
    cmp = compare_routes(CANONICAL, ShiftSpec(1, 0.3, 1, 0.2))
    assert cmp.max_gap <= 1e-10
    assert cmp.factor == pytest.approx(cmp.factor_expected, rel=1e-12)
    assert compare_routes(PHO, ShiftSpec(1, 0.4, 1, 0.3)).max_gap <= 1e-8
    out, factor = sequential_displacement(PHO, ShiftSpec(1, 0.6j, 0, 0.3))
    assert factor == 1.0
    assert np.max(np.abs(out.coeffs - bg_state(PHO, 0.6j, trunc=out.trunc).coeffs)) <= 1e-14


def test_sequential_canonical_modulus_matches_textbook_displacement():
    # D(s)D(z)|0> = exp(i Im(s z*)) |z+s>; the generalized route is phase-free
    z, s = 0.5 + 0.2j, -0.3 + 0.4j
    out, _ = sequential_displacement(CANONICAL, ShiftSpec(1, z, 1, s))
    ref = bg_state(CANONICAL, z + s, trunc=out.trunc)
    assert np.max(np.abs(np.abs(out.coeffs) - np.abs(ref.coeffs))) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(
    st.sampled_from([CANONICAL, PHO, pho(2.0), P1Q0]),
    st.floats(-1.5, 1.5),
    st.floats(-1.5, 1.5),
    cplx,
    cplx,
)
def test_two_route_equality(params, eps, lam, z, s):
    if math.isfinite(radius_of_convergence(params)):
        z, s = z / 6, s / 6
    else:
        z, s = z / 3, s / 3
    cmp = compare_routes(params, ShiftSpec(eps, z, lam, s), 1e-14)
    assert cmp.max_gap <= 1e-8
    assert cmp.factor == pytest.approx(cmp.factor_expected, rel=1e-8)


def test_displacement_diagonal_examples():
    z = 0.8 - 0.3j
    assert displacement_diagonal(PHO, z, 0) == pytest.approx(1 / math.sqrt(pfq(PHO, abs(z) ** 2).value.real), rel=1e-14)
    assert displacement_diagonal(CANONICAL, 1, 1) == pytest.approx(math.exp(0.5), rel=1e-14)
    s = 0.4 + 0.4j
    assert displacement_diagonal(PHO, 0, s, printed=False) == pytest.approx(1.0, rel=1e-14)
    assert displacement_diagonal(PHO, 0, s) == pytest.approx(1 / pfq(PHO, abs(s) ** 2).value.real, rel=1e-14)


@pytest.mark.parametrize("params", [CANONICAL, PHO, P1Q0])
def test_displacement_diagonal_matrix_cross_check(params):
    z, s = 0.5 + 0.2j, 0.3 - 0.6j
    direct = displacement_diagonal(params, z, s, printed=False)
    assert displacement_diagonal_matrix(params, z, s) == pytest.approx(direct, rel=1e-11)
    printed = displacement_diagonal(params, z, s)
    assert printed == pytest.approx(direct / pfq(params, abs(s) ** 2).value.real, rel=1e-14)


def test_label_continuity():
    z = 0.7 + 0.3j
    ratios = [label_distance(PHO, z, z + h) / h for h in (1e-1, 1e-2, 1e-3)]
    assert label_distance(PHO, z, z) == 0.0
    assert ratios[2] == pytest.approx(ratios[1], rel=0.02)
    s1, s2 = bg_state(PHO, z, 1e-16), bg_state(PHO, z + 1e-2, 1e-16)
    n = max(s1.trunc, s2.trunc)
    direct = np.linalg.norm(bg_state(PHO, z, trunc=n).coeffs - bg_state(PHO, z + 1e-2, trunc=n).coeffs)
    assert label_distance(PHO, z, z + 1e-2) == pytest.approx(direct, rel=1e-6)
