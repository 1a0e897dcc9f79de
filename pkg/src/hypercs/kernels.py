"""Integration measures through their moments, and the scalar kernel identities.

The measure that resolves the identity for a family is represented by its
Stieltjes moments Gamma(b/a) rho(l). Direct quadrature is available only
where the weight is elementary: exp(-x) when every numerator parameter
cancels a denominator one, and a Bessel-K weight for one leftover
denominator parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DivergenceError, DomainError, UnsupportedKernelError
from .model import CANONICAL, ModelParams, radius_of_convergence, structure, validate
from .specfun import bessel_k, cancel_parameters, log_pochhammer, pfq, radial_quadrature

__all__ = [
    "MomentFunctional",
    "KernelReport",
    "moment_exact",
    "log_moment_exact",
    "moment_kernel",
    "moment_quadrature",
    "reproducing_kernel_check",
    "derivative_kernel_check",
    "derivative_closed_form",
    "series_identity_check",
    "two_variable_closure_check",
    "resolution_of_identity",
    "has_kernel",
]

_MAX_ANGULAR_NODES = 4096


@dataclass(frozen=True)
class MomentFunctional:
    """Moments Gamma(b/a) rho(l) of the measure attached to ``params``.

    ``normalization`` is prod Gamma(b_j) / prod Gamma(a_i).
    """

    params: ModelParams
    normalization: float = field(init=False)

    def __post_init__(self):
        validate(self.params)
        object.__setattr__(self, "normalization", math.exp(self.log_normalization))

    @property
    def log_normalization(self) -> float:
        return sum(math.lgamma(b) for b in self.params.b) - sum(math.lgamma(a) for a in self.params.a)

    def moment(self, l: int) -> float:
        return moment_exact(self, l)


@dataclass(frozen=True)
class KernelReport:
    """Outcome of one identity check: both sides and their relative gap."""

    name: str
    lhs: complex
    rhs: complex
    max_err: float
    tol: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.max_err <= self.tol


def _rel_gap(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)


def log_moment_exact(mf: MomentFunctional, l: int) -> float:
    """ln of l! prod Gamma(b_j + l) / prod Gamma(a_i + l)."""
    if l < 0:
        raise DomainError(f"moment index must be >= 0, got {l}")
    p = mf.params
    return math.lgamma(l + 1) + sum(math.lgamma(b + l) for b in p.b) - sum(math.lgamma(a + l) for a in p.a)


def moment_exact(mf: MomentFunctional, l: int) -> float:
    """Stieltjes moment Gamma(b/a) rho(l); inf if it overflows."""
    try:
        return math.exp(log_moment_exact(mf, l))
    except OverflowError:
        return math.inf


def has_kernel(params: ModelParams) -> bool:
    """True when an elementary quadrature weight exists for ``params``."""
    a, b = cancel_parameters(validate(params).a, params.b)
    return not a and len(b) <= 1


def moment_kernel(params: ModelParams) -> Callable[[float], float]:
    """Weight w(x) on [0, inf) with moments Gamma(b/a) rho(l)."""
    validate(params)
    a, b = cancel_parameters(params.a, params.b)
    if a or len(b) > 1:
        raise UnsupportedKernelError(f"no elementary weight for {params}; only moments are available")
    if not b:
        # cancelled pairs contribute Gamma(c)/Gamma(c) = 1 and (c)_l/(c)_l = 1
        return lambda x: math.exp(-x)
    nu = b[0] - 1.0
    gamma_rest = math.exp(MomentFunctional(params).log_normalization - math.lgamma(b[0]))

    def weight(x: float) -> float:
        if x <= 0.0:
            return gamma_rest * math.gamma(nu) if nu > 0 else math.inf
        return 2.0 * gamma_rest * x ** (0.5 * nu) * bessel_k(nu, 2.0 * math.sqrt(x))

    return weight


def moment_quadrature(params: ModelParams, l: int, tol: float = 1e-10) -> float:
    """Integral of w(x) x^l over [0, inf), split at max(10, 4 l)."""
    w = moment_kernel(params)
    return float(radial_quadrature(lambda x: w(x) * x**l, tol, split=max(10.0, 4.0 * l)))


def reproducing_kernel_check(params: ModelParams, u: complex, v: complex, tol: float = 1e-6) -> KernelReport:
    """Scalar identity int (d^2z/pi) w(|z|^2) pFq(z u) pFq(z* v) = Gamma(b/a) pFq(u v).

    The angular integral keeps only the diagonal terms, leaving
    int w(x) G(u v x) dx with G(y) = sum y^l / rho(l)^2, done by quadrature.
    """
    validate(params)
    w = moment_kernel(params)
    uv = complex(u) * complex(v)
    if uv != 0 and abs(uv) >= radius_of_convergence(params):
        raise DivergenceError(f"|u v| = {abs(uv):.6g} is not inside the radius")
    squared = ModelParams(a=params.a + params.a, b=params.b + params.b + (1.0,))
    rhs = MomentFunctional(params).normalization * pfq(params, uv, 1e-15).value
    if uv == 0:
        lhs = moment_quadrature(params, 0, min(1e-10, tol))
    else:
        lhs = radial_quadrature(
            lambda x: w(x) * pfq(squared, uv * x, 1e-15).value,
            min(1e-10, tol),
            split=max(10.0, 4.0 * abs(uv)),
        )
    return KernelReport("reproducing_kernel", complex(lhs), complex(rhs), _rel_gap(lhs, rhs), tol, {"u": u, "v": v})


def derivative_closed_form(n: int, m: int, u: complex, v: complex) -> complex:
    """(d/du)^n (d/dv)^m exp(u v)."""
    total = sum(math.comb(n, k) * math.perm(m, k) * u ** (m - k) * v ** (n - k) for k in range(min(n, m) + 1))
    return complex(total) * complex(np.exp(u * v))


def _angular_mean(g: Callable[[np.ndarray], np.ndarray], nodes: int) -> complex:
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    return complex(np.mean(g(theta)))


def derivative_kernel_check(
    n: int, m: int, u: complex, v: complex, tol: float = 1e-5, *, params: ModelParams = CANONICAL
) -> KernelReport:
    """int (d^2z/pi) exp(-|z|^2) z^n z*^m exp(z u + z* v) against its closed form.

    Full polar quadrature: trapezoid rule in the angle (at least
    2(n+m)+8 nodes, doubled until stable) and adaptive quadrature in |z|^2.
    """
    if not validate(params).is_canonical:
        raise UnsupportedKernelError("the derivative kernel identity is implemented for the canonical family only")
    if n < 0 or m < 0:
        raise DomainError("derivative orders must be nonnegative")
    u, v = complex(u), complex(v)
    base = 2 * (n + m) + 8

    def angular(r: float) -> complex:
        def g(theta):
            z = r * np.exp(1j * theta)
            return z**n * np.conj(z) ** m * np.exp(z * u + np.conj(z) * v)

        nodes = base
        cur = _angular_mean(g, nodes)
        while nodes < _MAX_ANGULAR_NODES:
            nodes *= 2
            nxt = _angular_mean(g, nodes)
            if abs(nxt - cur) <= 1e-15 * max(1.0, abs(nxt)):
                return nxt
            cur = nxt
        return cur

    lhs = complex(radial_quadrature(lambda x: math.exp(-x) * angular(math.sqrt(x)), min(1e-10, tol)))
    rhs = derivative_closed_form(n, m, u, v)
    scale = max(abs(rhs), 1.0)
    return KernelReport(f"derivative_kernel[{n},{m}]", lhs, rhs, abs(lhs - rhs) / scale, tol, {"u": u, "v": v})


def _log_poch_prod(vals, n: int) -> tuple[float, int]:
    s, sign = 0.0, 1
    for x in vals:
        lg, sg = log_pochhammer(x, n)
        s += lg
        sign *= sg
    return s, sign


def _degenerate(vals, n: int) -> bool:
    return any(float(x).is_integer() and x <= n for x in vals)


def series_identity_check(params: ModelParams, n: int, m: int, L: int, tol: float = 1e-12) -> KernelReport:
    """Term-wise form of the (n, m) kernel identity, pure scalar arithmetic.

    For each l <= L the moment-weighted left coefficient
    Gamma(b/a) rho(l) / (rho(l-n) rho(l-m)) is compared with the right
    coefficient rebuilt from shifted Pochhammer products,

        s Gamma(b/a) P_n P_m c_l l! / ((l-n)! (l-m)!),
        P_k = prod (1-b)_k / prod (1-a)_k,
        c_l = prod (a-n)_l (a-m)_l (b)_l / prod (b-n)_l (b-m)_l (a)_l,

    with sign s = (-1)^((n+m)(q-p)). ``details['printed_sign_ok']`` says
    whether the identity also holds with s = 1.
    """
    validate(params)
    if n < 0 or m < 0 or L < 0:
        raise DomainError("n, m and L must be nonnegative")
    a, b = cancel_parameters(params.a, params.b)
    for k in (n, m):
        if _degenerate(a, k) or _degenerate(b, k):
            raise DomainError(f"integer parameter <= {k} makes the shifted Pochhammer form singular")
    log_gamma_ratio = MomentFunctional(params).log_normalization
    logr = structure(params).rho_log(L)
    sign_exp = (n + m) * (len(b) - len(a))
    s = -1 if sign_exp % 2 else 1
    lp_b_n, sp_b_n = _log_poch_prod([1.0 - x for x in b], n)
    lp_a_n, sp_a_n = _log_poch_prod([1.0 - x for x in a], n)
    lp_b_m, sp_b_m = _log_poch_prod([1.0 - x for x in b], m)
    lp_a_m, sp_a_m = _log_poch_prod([1.0 - x for x in a], m)
    log_p = lp_b_n - lp_a_n + lp_b_m - lp_a_m
    sign_p = sp_b_n * sp_a_n * sp_b_m * sp_a_m
    worst = 0.0
    lhs_vals, rhs_vals = [], []
    for l in range(max(n, m), L + 1):
        lhs_log = log_gamma_ratio + logr[l] - logr[l - n] - logr[l - m]
        num = [_log_poch_prod([x - n for x in a], l), _log_poch_prod([x - m for x in a], l), _log_poch_prod(b, l)]
        den = [_log_poch_prod([x - n for x in b], l), _log_poch_prod([x - m for x in b], l), _log_poch_prod(a, l)]
        log_c = sum(t[0] for t in num) - sum(t[0] for t in den)
        sign_c = math.prod(t[1] for t in num) * math.prod(t[1] for t in den)
        fact = math.lgamma(l + 1) - math.lgamma(l - n + 1) - math.lgamma(l - m + 1)
        rhs_log = log_gamma_ratio + log_p + log_c + fact
        rhs_sign = s * sign_p * sign_c
        lhs_vals.append(math.exp(lhs_log))
        rhs_vals.append(rhs_sign * math.exp(rhs_log))
        worst = max(worst, abs(rhs_sign * math.exp(rhs_log - lhs_log) - 1.0))
    details = {"n": n, "m": m, "L": L, "sign": s, "printed_sign_ok": s == 1}
    lhs_arr = complex(math.fsum(lhs_vals))
    rhs_arr = complex(math.fsum(rhs_vals))
    return KernelReport(f"series_identity[{n},{m}]", lhs_arr, rhs_arr, worst, tol, details)


def two_variable_closure_check(params: ModelParams, l: int, tol: float = 1e-12) -> KernelReport:
    """Closure arithmetic of the two-variable resolution of identity at level l.

    Uses the declared radial integrals
    Int_z = (l-n)! ([g(l-n)]!)^2 / sqrt(2^l [g(l)]!) and
    Int_sigma = n! ([g(n)]!)^2 / sqrt(2^l [g(l)]!), so that
    sum_n C(l,n) Int_z Int_sigma [g(l)]! / ((l-n)! ([g(l-n)]!)^2 n! ([g(n)]!)^2)
    must equal 1. ``details['binomial_sum_exact']`` records sum C(l,n) == 2^l.
    """
    validate(params)
    if l < 0:
        raise DomainError(f"l must be >= 0, got {l}")
    logr = structure(params).rho_log(l)
    lgf = [logr[k] - math.lgamma(k + 1) for k in range(l + 1)]  # ln [g(k)]!
    half = 0.5 * (l * math.log(2.0) + lgf[l])
    terms = []
    for n in range(l + 1):
        log_int_z = math.lgamma(l - n + 1) + 2.0 * lgf[l - n] - half
        log_int_s = math.lgamma(n + 1) + 2.0 * lgf[n] - half
        log_t = (
            math.log(math.comb(l, n))
            + log_int_z - math.lgamma(l - n + 1) - 2.0 * lgf[l - n]
            + log_int_s - math.lgamma(n + 1) - 2.0 * lgf[n]
            + lgf[l]
        )
        terms.append(math.exp(log_t))
    total = math.fsum(terms)
    exact = sum(math.comb(l, n) for n in range(l + 1)) == 2**l
    return KernelReport(f"two_variable_closure[{l}]", total, 1.0, abs(total - 1.0), tol, {"binomial_sum_exact": exact})


def resolution_of_identity(params: ModelParams, trunc: int) -> np.ndarray:
    """Truncated sum_l moment(l) / (Gamma(b/a) rho(l)) |l><l| as a dense matrix."""
    mf = MomentFunctional(params)
    logr = structure(params).rho_log(trunc)
    diag = np.array([math.exp(log_moment_exact(mf, l) - mf.log_normalization - logr[l]) for l in range(trunc + 1)])
    return np.diag(diag)
