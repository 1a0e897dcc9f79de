"""Barut-Girardello, Klauder-Perelomov and shifted-argument coherent states.

State constructors pick the truncation N from the tail of their
normalization series and record the discarded weight in
``StateVector.tail_bound``. ``tol`` is always a bound on that weight
relative to the norm.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DivergenceError, ValidationError
from .fock import StateVector, apply, basis, build_ladder
from .model import ModelParams, func_binom, radius_of_convergence, structure, validate
from .specfun import pfq, pfq_partial

__all__ = [
    "MAX_TRUNC",
    "ShiftSpec",
    "BinomialPower",
    "ShiftComparison",
    "bg_state",
    "kp_state",
    "overlap",
    "overlap_routes",
    "annihilation_residual",
    "truncation_residual_bound",
    "hypergeometric_eigen_residual",
    "gen_binom_power",
    "shifted_state",
    "shifted_normalization",
    "sequential_displacement",
    "compare_routes",
    "displacement_diagonal",
    "displacement_diagonal_matrix",
    "label_distance",
]

MAX_TRUNC = 512


@dataclass(frozen=True)
class ShiftSpec:
    """Composite label Z = eps*z + lam*sigma with real eps, lam."""

    eps: float
    z: complex
    lam: float
    sigma: complex

    @property
    def x(self) -> complex:
        return self.eps * complex(self.z)

    @property
    def y(self) -> complex:
        return self.lam * complex(self.sigma)

    @property
    def Z(self) -> complex:
        return self.x + self.y

    def polar(self) -> tuple[float, float]:
        """|Z|^2 and phase of Z from the moduli and phases of z and sigma."""
        rz, pz = abs(self.z), cmath.phase(self.z)
        rs, ps = abs(self.sigma), cmath.phase(self.sigma)
        e, l = self.eps, self.lam
        mod2 = e * e * rz * rz + l * l * rs * rs + 2.0 * e * l * rz * rs * math.cos(pz - ps)
        phase = math.atan2(e * rz * math.sin(pz) + l * rs * math.sin(ps), e * rz * math.cos(pz) + l * rs * math.cos(ps))
        return mod2, phase

    def polar_residual(self) -> float:
        """Largest mismatch between :meth:`polar` and the directly formed Z."""
        mod2, phase = self.polar()
        Z = self.Z
        gap = abs(mod2 - abs(Z) ** 2)
        if abs(Z) > 0:
            gap = max(gap, abs(cmath.exp(1j * phase) - Z / abs(Z)))
        return gap


@dataclass(frozen=True)
class BinomialPower:
    """Generalized Newton binomial [x + y]^l and its summands."""

    l: int
    value: complex
    terms: tuple[complex, ...]


def _radius_check(params: ModelParams, *labels: complex) -> None:
    radius = radius_of_convergence(params)
    for w in labels:
        if w != 0 and abs(w) ** 2 >= radius:
            raise DivergenceError(f"|label|^2 = {abs(w) ** 2:.6g} is not inside the radius {radius:g}")


def _series_state(series: ModelParams, owner: ModelParams, z: complex, tol: float, trunc: int | None) -> StateVector:
    # coefficients z^n / sqrt(rho_series(n) F(|z|^2)); the kept weight is 1 - tail
    z = complex(z)
    x = abs(z) ** 2
    if trunc is None:
        if z == 0:
            trunc = 1
        else:
            res = pfq(series, x, tol, reduce=False)
            trunc = max(res.terms_used - 1, 1)
            if trunc > MAX_TRUNC:
                raise ConvergenceError(f"truncation {trunc} exceeds the cap {MAX_TRUNC}")
    if z == 0:
        return basis(owner, 0, trunc)
    _, tail = pfq_partial(series, x, trunc)
    full = pfq(series, x, 1e-16).value.real
    n = np.arange(trunc + 1)
    logr = structure(series).rho_log(trunc)
    logmag = n * math.log(abs(z)) - 0.5 * logr - 0.5 * math.log(full)
    coeffs = np.exp(logmag) * np.exp(1j * n * cmath.phase(z))
    return StateVector(coeffs, trunc, owner, tail / full)


def bg_state(params: ModelParams, z: complex, tol: float = 1e-12, *, trunc: int | None = None) -> StateVector:
    """Eigenstate of the lowering operator with eigenvalue z.

    Coefficients are z^n / sqrt(rho(n) pFq(|z|^2)). With ``trunc`` given
    the truncation is fixed and ``tail_bound`` reports what it discards.
    """
    validate(params)
    _radius_check(params, z)
    return _series_state(params, params, z, tol, trunc)


def kp_state(params: ModelParams, z: complex, tol: float = 1e-12, *, trunc: int | None = None) -> StateVector:
    """Klauder-Perelomov state exp(z A+)|0>, normalized.

    Coefficients are z^n / sqrt(rho_KP(n)) with rho_KP(n) = (n!)^2 / rho(n);
    the normalization is qFp with numerator and denominator swapped.
    """
    validate(params)
    if z == 0:
        return basis(params, 0, 1 if trunc is None else trunc)
    try:
        dual = validate(params.dual())
    except ValidationError as exc:
        raise DivergenceError(f"dual normalization series has zero radius for {params}") from exc
    _radius_check(dual, z)
    return _series_state(dual, params, z, tol, trunc)


def overlap(params: ModelParams, z: complex, w: complex, tol: float = 1e-14) -> complex:
    """<z|w> = pFq(z* w) / sqrt(pFq(|z|^2) pFq(|w|^2))."""
    validate(params)
    _radius_check(params, z, w)
    num = pfq(params, z.conjugate() * w, tol).value
    den = math.sqrt(pfq(params, abs(z) ** 2, tol).value.real * pfq(params, abs(w) ** 2, tol).value.real)
    return num / den


def overlap_routes(params: ModelParams, z: complex, w: complex, tol: float = 1e-14) -> tuple[complex, complex]:
    """<z|w> from the kernel formula and from the truncated coefficient vectors."""
    kernel = overlap(params, z, w, tol)
    n = max(bg_state(params, z, tol).trunc, bg_state(params, w, tol).trunc)
    inner = bg_state(params, z, tol, trunc=n).inner(bg_state(params, w, tol, trunc=n))
    return kernel, inner


def truncation_residual_bound(state: StateVector) -> float:
    """Bound on ||A-|z> - z|z>|| implied by the state's discarded weight.

    The residual is |z c_N| = sqrt(e(N+1)) |c_{N+1}|, and |c_{N+1}|^2 never
    exceeds the tail weight.
    """
    e_next = structure(state.params).e(state.trunc + 1)[state.trunc + 1]
    return math.sqrt(e_next * state.tail_bound)


def annihilation_residual(params: ModelParams, z: complex, tol: float = 1e-12, *, state: StateVector | None = None) -> float:
    """||A- |z> - z |z>|| on the truncated space.

    Without ``state`` the truncation grows until
    :func:`truncation_residual_bound` is at most ``tol``.
    """
    if state is None:
        state = bg_state(params, z, tol * tol)
        while truncation_residual_bound(state) > tol:
            if state.trunc >= MAX_TRUNC:
                raise ConvergenceError(f"residual bound {tol:g} not reached below truncation {MAX_TRUNC}")
            state = bg_state(params, z, tol * tol, trunc=state.trunc + 1)
    down = build_ladder(state.params, state.trunc, "lowering")
    return float(np.linalg.norm(apply(down, state).coeffs - z * state.coeffs))


def _operator_series(state: StateVector, w: complex, kind: str) -> StateVector:
    # pFq(w A) |state> = sum_m w^m / rho(m) A^m |state>, exact on the truncated space
    op = build_ladder(state.params, state.trunc, kind)
    e = structure(state.params).e(state.trunc)
    acc = state
    term = state
    for m in range(1, state.trunc + 1):
        term = apply(op, term).scaled(w / e[m])
        if kind == "lowering" and not np.any(term.coeffs):
            break
        acc = acc + term
    return acc


def hypergeometric_eigen_residual(params: ModelParams, z: complex, sigma: complex, tol: float = 1e-24) -> float:
    """||pFq(z* A-)|sigma> - pFq(z* sigma)|sigma>|| on the truncated space."""
    validate(params)
    _radius_check(params, z, sigma)
    state = bg_state(params, sigma, tol)
    lhs = _operator_series(state, complex(z).conjugate(), "lowering")
    eig = pfq(params, complex(z).conjugate() * sigma, 1e-16).value
    return float(np.linalg.norm(lhs.coeffs - eig * state.coeffs))


def gen_binom_power(params: ModelParams, x: complex, y: complex, l: int) -> BinomialPower:
    """[x + y]^l = sum_n rho(l)/(rho(n) rho(l-n)) x^(l-n) y^n."""
    validate(params)
    x, y = complex(x), complex(y)
    # symmetric coefficient and a commutative product keep [x+y]^l == [y+x]^l bitwise
    terms = tuple(func_binom(params, l, n) * (x ** (l - n) * y**n) for n in range(l + 1))
    value = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    return BinomialPower(l, value, terms)


def _log_powers(w: complex, n: int) -> np.ndarray:
    k = np.arange(n + 1, dtype=float)
    if w == 0:
        out = np.full(n + 1, -np.inf)
        out[0] = 0.0
        return out
    return k * math.log(abs(w))


def _shifted_level(logr: np.ndarray, lx: np.ndarray, ly: np.ndarray, px: complex, py: complex, l: int) -> tuple[complex, float]:
    # [x+y]^l / sqrt(rho(l)) and its modulus majorant
    m = np.arange(l + 1)
    logw = 0.5 * logr[l] - logr[m] - logr[l - m] + lx[l - m] + ly[m]
    mag = np.exp(logw)
    phase = np.exp(1j * ((l - m) * px + m * py))
    return complex(np.sum(mag * phase)), float(np.sum(mag))


def _limit_ratio(params: ModelParams, shift: ShiftSpec) -> float:
    radius = radius_of_convergence(params)
    if math.isinf(radius):
        return 0.0
    return max(abs(shift.x), abs(shift.y)) ** 2 / radius


@dataclass(frozen=True)
class _ShiftedRaw:
    coeffs: np.ndarray  # [Z]^l / sqrt(rho(l)), unnormalized
    norm2: float  # sum_l |[Z]^l|^2 / rho(l) over kept levels
    tail: float  # bound on the discarded part of norm2


def _shifted_raw(params: ModelParams, shift: ShiftSpec, tol: float, trunc: int | None) -> _ShiftedRaw:
    validate(params)
    _radius_check(params, shift.x, shift.y)
    x, y = shift.x, shift.y
    if x == 0 and y == 0:
        n = 1 if trunc is None else trunc
        c = np.zeros(n + 1, dtype=complex)
        c[0] = 1.0
        return _ShiftedRaw(c, 1.0, 0.0)
    cap = MAX_TRUNC if trunc is None else trunc
    logr = structure(params).rho_log(cap + 1)
    lx, ly = _log_powers(x, cap + 1), _log_powers(y, cap + 1)
    px, py = cmath.phase(x), cmath.phase(y)
    r_inf = _limit_ratio(params, shift)
    coeffs = []
    majorant = []
    norm2 = 0.0
    tail = math.inf
    for l in range(cap + 2):
        val, mag = _shifted_level(logr, lx, ly, px, py, l)
        majorant.append(mag * mag)
        if l == cap + 1:
            break
        coeffs.append(val)
        norm2 += abs(val) ** 2
        tail = _majorant_tail(majorant, r_inf)
        if trunc is None and l >= 2 and tail <= tol * norm2:
            break
    else:  # pragma: no cover - loop always breaks
        pass
    if trunc is None and not tail <= tol * norm2:
        raise ConvergenceError(f"shifted-state normalization not converged below truncation {MAX_TRUNC}")
    if trunc is not None:
        tail = _majorant_tail(majorant, r_inf)
    return _ShiftedRaw(np.array(coeffs), norm2, tail)


def _majorant_tail(m: list[float], r_inf: float) -> float:
    # geometric bound on sum_{k>=len(m)-1} m_k (the last entry is the first discarded)
    last = m[-1]
    if last == 0.0:
        return 0.0
    if len(m) < 3 or m[-2] == 0.0 or m[-3] == 0.0:
        return math.inf
    r1, r0 = m[-1] / m[-2], m[-2] / m[-3]
    if r1 > r0 and r1 > r_inf:
        return math.inf
    ratio = max(r1, r_inf)
    if ratio >= 1.0:
        return math.inf
    return last / (1.0 - ratio)


def shifted_state(params: ModelParams, shift: ShiftSpec, tol: float = 1e-12, *, trunc: int | None = None) -> StateVector:
    """Coherent state with label [eps z + lam sigma].

    Coefficients are [Z]^l / sqrt(rho(l)) normalized by
    N = sum_l |[Z]^l|^2 / rho(l), which makes the state unit-norm.
    """
    raw = _shifted_raw(params, shift, tol, trunc)
    n = len(raw.coeffs) - 1
    return StateVector(raw.coeffs / math.sqrt(raw.norm2), n, params, raw.tail / raw.norm2)


def shifted_normalization(params: ModelParams, shift: ShiftSpec, tol: float = 1e-12) -> tuple[float, float | None]:
    """N(z, sigma) and the literal pFq(|Z|^2) (None when |Z|^2 is outside the radius)."""
    raw = _shifted_raw(params, shift, tol, None)
    Z2 = abs(shift.Z) ** 2
    literal = None
    if Z2 < radius_of_convergence(params):
        literal = pfq(params, Z2, 1e-16).value.real
    return raw.norm2, literal


def sequential_displacement(
    params: ModelParams, shift: ShiftSpec, tol: float = 1e-12, *, trunc: int | None = None
) -> tuple[StateVector, float]:
    """Apply D(lam sigma) to |eps z> on the truncated space.

    D(w) = pFq(w A+) / sqrt(pFq(|w|^2)). Returns the normalized result and
    its norm before normalization, the proportionality factor between
    D(lam sigma) D(eps z)|0> and the shifted state. The truncation is the
    one :func:`shifted_state` would pick, so both routes share a space.
    """
    raw = _shifted_raw(params, shift, tol, trunc)
    n = len(raw.coeffs) - 1
    start = bg_state(params, shift.x, tol, trunc=n)
    if shift.y == 0:
        return start, 1.0
    fy = pfq(params, abs(shift.y) ** 2, 1e-16).value.real
    out = _operator_series(start, shift.y, "raising").scaled(1.0 / math.sqrt(fy))
    factor = out.norm()
    result = StateVector(out.coeffs / factor, n, params, raw.tail / raw.norm2)
    return result, factor


@dataclass(frozen=True)
class ShiftComparison:
    """Both routes to a shifted state and the diagnostics relating them."""

    shift: ShiftSpec
    direct: StateVector
    sequential: StateVector
    max_gap: float
    factor: float
    factor_expected: float
    norm_module: float
    norm_literal: float | None
    literal_gap: float | None = field(default=None)


def compare_routes(params: ModelParams, shift: ShiftSpec, tol: float = 1e-12, *, trunc: int | None = None) -> ShiftComparison:
    """Shifted state built directly and by successive displacement."""
    direct = shifted_state(params, shift, tol, trunc=trunc)
    seq, factor = sequential_displacement(params, shift, tol, trunc=trunc)
    gap = float(np.max(np.abs(direct.coeffs - seq.coeffs)))
    norm, literal = shifted_normalization(params, shift, tol)
    fx = pfq(params, abs(shift.x) ** 2, 1e-16).value.real
    fy = pfq(params, abs(shift.y) ** 2, 1e-16).value.real
    expected = math.sqrt(norm / (fx * fy))
    literal_gap = None if literal is None else abs(literal - norm) / norm
    return ShiftComparison(shift, direct, seq, gap, factor, expected, norm, literal, literal_gap)


def displacement_diagonal(params: ModelParams, z: complex, sigma: complex, tol: float = 1e-14, *, printed: bool = True) -> complex:
    """Diagonal element of the generalized displacement operator in |sigma>.

    The default is pFq(z sigma*) pFq(z* sigma) / (sqrt(pFq(|z|^2)) pFq(|sigma|^2)).
    ``printed=False`` drops the 1/pFq(|sigma|^2) factor, which gives the
    matrix element for a unit-norm |sigma>; that variant is what
    :func:`displacement_diagonal_matrix` reproduces.
    """
    validate(params)
    _radius_check(params, z, sigma)
    z, sigma = complex(z), complex(sigma)
    f1 = pfq(params, z * sigma.conjugate(), tol).value
    f2 = pfq(params, z.conjugate() * sigma, tol).value
    value = f1 * f2 / math.sqrt(pfq(params, abs(z) ** 2, tol).value.real)
    if printed:
        value /= pfq(params, abs(sigma) ** 2, tol).value.real
    return value


def displacement_diagonal_matrix(params: ModelParams, z: complex, sigma: complex, tol: float = 1e-24) -> complex:
    """<sigma| pFq(z A+) pFq(z* A-) |sigma> / sqrt(pFq(|z|^2)) on the truncated space.

    The lowering factor acts first (normal order) and |sigma> is unit-norm.
    """
    validate(params)
    _radius_check(params, z, sigma)
    z = complex(z)
    state = bg_state(params, sigma, tol)
    lowered = _operator_series(state, z.conjugate(), "lowering")
    raised = _operator_series(lowered, z, "raising")
    return state.inner(raised) / math.sqrt(pfq(params, abs(z) ** 2, 1e-16).value.real)


def label_distance(params: ModelParams, z: complex, zp: complex, tol: float = 1e-15) -> float:
    """||z> - |z'>|| = sqrt(2 - 2 Re <z|z'>)."""
    return math.sqrt(max(0.0, 2.0 - 2.0 * overlap(params, z, zp, tol).real))
