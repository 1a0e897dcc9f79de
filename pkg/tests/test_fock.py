from __future__ import annotations

import math

import numpy as np
import pytest

from hypercs.errors import ShapeError, TruncationError
from hypercs.fock import StateVector, apply, basis, build_ladder, number_expectation, raise_vacuum
from hypercs.model import CANONICAL, log_rho, pho, structure


def test_canonical_lowering_band():
    op = build_ladder(CANONICAL, 6, "lowering")
    assert np.allclose(op.band, np.sqrt(np.arange(1, 7)), rtol=0, atol=1e-15)


def test_pho_first_amplitude():
    op = build_ladder(pho(1.0), 4, "lowering")
    assert op.amplitude(1) == pytest.approx(math.sqrt(1.5), rel=1e-15)


def test_raising_overflow_is_recorded():
    op = build_ladder(pho(1.0), 3, "raising")
    out = apply(op, basis(pho(1.0), 3, 3))
    assert not np.any(out.coeffs)
    assert out.tail_bound == pytest.approx(structure(pho(1.0)).e(4)[4], rel=1e-14)


def test_build_ladder_needs_one_level():
    with pytest.raises(TruncationError):
        build_ladder(CANONICAL, 0, "raising")


def test_apply_examples():
    down = build_ladder(CANONICAL, 5, "lowering")
    assert not np.any(apply(down, basis(CANONICAL, 0, 5)).coeffs)
    out = apply(down, basis(CANONICAL, 3, 5))
    assert out.coeffs[2] == pytest.approx(math.sqrt(3), rel=1e-15)
    up = build_ladder(pho(1.0), 5, "raising")
    out = apply(up, basis(pho(1.0), 2, 5))
    assert out.coeffs[3] == pytest.approx(math.sqrt(structure(pho(1.0)).e(3)[3]), rel=1e-15)


def test_apply_shape_mismatch():
    with pytest.raises(ShapeError):
        apply(build_ladder(CANONICAL, 5, "lowering"), basis(CANONICAL, 0, 4))
    with pytest.raises(ShapeError):
        apply(build_ladder(CANONICAL, 5, "lowering"), basis(pho(1.0), 0, 5))


def test_state_vector_shape_checked():
    with pytest.raises(ShapeError):
        StateVector(np.zeros(3), 3, CANONICAL)


@pytest.mark.parametrize("params, n, expected", [(CANONICAL, 4, math.sqrt(24)), (pho(1.0), 2, math.sqrt(7.5))])
def test_raise_vacuum_examples(params, n, expected):
    v = raise_vacuum(params, n, 6)
    assert v.coeffs[n] == pytest.approx(expected, rel=1e-14)
    assert np.count_nonzero(v.coeffs) == 1
    assert np.array_equal(raise_vacuum(params, 0, 6).coeffs, basis(params, 0, 6).coeffs)


def test_raise_vacuum_beyond_truncation():
    with pytest.raises(TruncationError):
        raise_vacuum(CANONICAL, 5, 4)


def test_raise_vacuum_consistency(family):
    for n in range(41):
        v = raise_vacuum(family, n, 40)
        assert v.coeffs[n].real == pytest.approx(math.exp(0.5 * log_rho(family, n)), rel=1e-12)


def test_adjointness(family):
    rng = np.random.default_rng(7)
    n = 40
    down, up = build_ladder(family, n, "lowering"), build_ladder(family, n, "raising")
    assert np.array_equal(down.matrix().T, up.matrix())
    assert down.adjoint().kind == "raising"
    for _ in range(10):
        u = StateVector(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1), n, family)
        v = StateVector(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1), n, family)
        assert u.inner(apply(down, v)) == pytest.approx(apply(up, u).inner(v), rel=1e-12)


def test_number_expectation(family):
    e = structure(family).e(40)
    for n in range(41):
        assert number_expectation(basis(family, n, 40)) == pytest.approx(e[n], rel=1e-12, abs=0)
    assert number_expectation(basis(CANONICAL, 2, 4)) == pytest.approx(2.0)


def test_matrix_matches_apply():
    op = build_ladder(pho(2.0), 8, "raising")
    v = StateVector(np.arange(9) + 1j, 8, pho(2.0))
    assert np.allclose(op.matrix() @ v.coeffs, apply(op, v).coeffs, rtol=1e-15, atol=0)


def test_state_vector_is_immutable():
    v = basis(CANONICAL, 1, 3)
    with pytest.raises(ValueError):
        v.coeffs[0] = 1.0
