"""Scalar special functions and quadrature primitives.

Everything here is a pure function of immutable inputs. Products that can
overflow (Pochhammer symbols, structure functions) are carried as
``(log|value|, sign)`` pairs and only exponentiated at the boundary.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy import integrate

from .errors import ConvergenceError, DivergenceError, DomainError, QuadratureError

__all__ = [
    "SeriesResult",
    "log_gamma",
    "log_pochhammer",
    "pochhammer",
    "series_radius",
    "cancel_parameters",
    "pfq",
    "pfq_partial",
    "pfq_tail_bound",
    "bessel_i",
    "bessel_k",
    "radial_quadrature",
    "MAX_SERIES_TERMS",
]

MAX_SERIES_TERMS = 10_000
_LOOKAHEAD = 32
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class SeriesResult:
    """Value of a truncated power series together with its truncation bound."""

    value: complex
    terms_used: int
    tail_bound: float


def log_gamma(x: float) -> float:
    """Return ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def log_pochhammer(x: float, n: int) -> tuple[float, int]:
    """Rising factorial (x)_n as ``(ln|(x)_n|, sign)``.

    A vanishing factor gives ``(-inf, 0)``.
    """
    if n < 0:
        raise DomainError(f"pochhammer order must be >= 0, got {n}")
    logabs = 0.0
    sign = 1
    for s in range(n):
        f = x + s
        if f == 0.0:
            return -math.inf, 0
        if f < 0.0:
            sign = -sign
        logabs += math.log(abs(f))
    return logabs, sign


def pochhammer(x: float, n: int) -> float:
    """Rising factorial (x)_n = x (x+1) ... (x+n-1); (x)_0 = 1.

    Integer arguments are multiplied exactly. Real arguments use a direct
    product while it stays finite and fall back to the signed log domain,
    which returns ``±inf`` when the magnitude exceeds double range.
    """
    if n < 0:
        raise DomainError(f"pochhammer order must be >= 0, got {n}")
    if isinstance(x, int):
        return float(math.prod(range(x, x + n)))
    prod = 1.0
    for s in range(n):
        prod *= x + s
        if not math.isfinite(prod):
            break
    else:
        return prod
    logabs, sign = log_pochhammer(x, n)
    try:
        return sign * math.exp(logabs)
    except OverflowError:
        return sign * math.inf


def cancel_parameters(a: Sequence[float], b: Sequence[float]) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Drop numerator/denominator parameter pairs that are exactly equal."""
    rest_b = list(b)
    kept_a = []
    for ai in a:
        if ai in rest_b:
            rest_b.remove(ai)
        else:
            kept_a.append(ai)
    return tuple(kept_a), tuple(rest_b)


def series_radius(a: Sequence[float], b: Sequence[float]) -> float:
    """Radius of convergence in x of sum (a)_n/(b)_n x^n/n!."""
    p, q = len(a), len(b)
    if p <= q:
        return math.inf
    if p == q + 1:
        return 1.0
    return 0.0


def _ratio(a: Sequence[float], b: Sequence[float], xabs: float, k: int) -> float:
    # |t_{k+1} / t_k| for t_k = (a)_k/(b)_k x^k/k!
    r = xabs / (k + 1)
    for ai in a:
        r *= ai + k
    for bj in b:
        r /= bj + k
    return r


def _limit_ratio(a: Sequence[float], b: Sequence[float], xabs: float) -> float:
    return xabs / series_radius(a, b) if xabs else 0.0


def pfq_tail_bound(a: Sequence[float], b: Sequence[float], xabs: float, k: int, tk_abs: float) -> float:
    """Bound on sum_{j>k} |t_j| given |t_k|, from a geometric majorant.

    The majorant ratio is the largest term ratio seen over a lookahead
    window starting at ``k``, floored by the limiting ratio. Returns
    ``inf`` when that ratio is not below one.
    """
    if tk_abs == 0.0:
        return 0.0
    sup = _limit_ratio(a, b, xabs)
    for j in range(k, k + _LOOKAHEAD):
        sup = max(sup, _ratio(a, b, xabs, j))
        if sup >= 1.0:
            return math.inf
    return tk_abs * sup / (1.0 - sup)


def _check_radius(a, b, x) -> None:
    if x == 0:
        return
    radius = series_radius(a, b)
    if abs(x) >= radius:
        raise DivergenceError(f"|x| = {abs(x):.6g} is not inside the radius of convergence {radius:g}")


def pfq(params, x: complex, tol: float = 1e-14, *, reduce: bool = True) -> SeriesResult:
    """Generalized hypergeometric function sum_n x^n / rho(n).

    ``params`` is anything exposing parameter lists ``a`` (numerator) and
    ``b`` (denominator). Terms are summed until the geometric tail bound
    drops below ``tol * max(1, |partial sum|)``.

    With ``reduce=True`` equal numerator/denominator parameters are
    cancelled first, and a family that cancels completely is evaluated as
    ``exp(x)``; the plain series loses all accuracy for large negative x.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    a, b = tuple(params.a), tuple(params.b)
    _check_radius(a, b, x)
    if reduce:
        a, b = cancel_parameters(a, b)
        if not a and not b:
            return SeriesResult(complex(cmath.exp(x)), 1, 0.0)
    x = complex(x)
    xabs = abs(x)
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    for k in range(MAX_SERIES_TERMS):
        tabs = abs(term)
        r = _ratio(a, b, xabs, k)
        if r < 1.0 and tabs * r / (1.0 - r) <= tol * max(1.0, abs(total)):
            tail = pfq_tail_bound(a, b, xabs, k, tabs)
            if tail <= tol * max(1.0, abs(total)):
                return SeriesResult(total, k + 1, tail)
        factor = x / (k + 1)
        for ai in a:
            factor *= ai + k
        for bj in b:
            factor /= bj + k
        term *= factor
        total += term
    raise ConvergenceError(f"pFq series did not reach tol={tol:g} within {MAX_SERIES_TERMS} terms")


def pfq_partial(params, xabs: float, n_max: int) -> tuple[float, float]:
    """Partial sum over n <= n_max of the positive series at ``xabs`` and its tail bound."""
    a, b = tuple(params.a), tuple(params.b)
    _check_radius(a, b, xabs)
    term = 1.0
    total = 1.0
    for k in range(n_max):
        term *= _ratio(a, b, xabs, k)
        total += term
    return total, pfq_tail_bound(a, b, xabs, n_max, term)


def bessel_i(nu: float, x: float) -> float:
    """Modified Bessel function of the first kind from its ascending series."""
    if x < 0:
        raise DomainError(f"bessel_i requires x >= 0, got {x!r}")
    if nu < 0 and float(nu).is_integer():
        nu = -nu
    if x == 0.0:
        if nu == 0:
            return 1.0
        return 0.0 if nu > 0 else math.inf
    # leading factor (x/2)^nu / Gamma(nu + 1), signed when nu + 1 < 0
    lead = nu * math.log(0.5 * x) - math.lgamma(nu + 1.0)
    sign = 1.0 if (nu + 1.0 > 0 or math.floor(nu + 1.0) % 2 == 0) else -1.0
    quarter = 0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while True:
        term *= quarter / ((k + 1) * (k + 1 + nu))
        total += term
        k += 1
        if abs(term) <= 0.25 * _EPS * abs(total) and k > abs(nu):
            break
        if k > MAX_SERIES_TERMS:
            raise ConvergenceError("bessel_i series did not converge")
    return sign * math.exp(lead) * total


# Taylor coefficients of 1/Gamma(x) = sum_k c_k x^k (Abramowitz & Stegun 6.1.34).
_RGAMMA = (
    0.0,
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
)


def _temme_gammas(mu: float) -> tuple[float, float, float, float]:
    """gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu) for |mu| <= 1/2."""
    gampl = 1.0 / math.gamma(1.0 + mu)
    gammi = 1.0 / math.gamma(1.0 - mu)
    if abs(mu) > 0.1:
        gam1 = (gammi - gampl) / (2.0 * mu)
    else:
        # odd part of 1/Gamma(1+x) = sum_k c_k x^(k-1), no cancellation
        gam1 = 0.0
        mu2 = mu * mu
        for k in range(len(_RGAMMA) - 1 - (len(_RGAMMA) - 1) % 2, 1, -2):
            gam1 = gam1 * mu2 + _RGAMMA[k]
        gam1 = -gam1
    gam2 = 0.5 * (gammi + gampl)
    return gam1, gam2, gampl, gammi


def bessel_k(nu: float, x: float) -> float:
    """Modified Bessel function of the second kind K_nu(x), x > 0.

    Temme's series for x < 2 and Steed's continued fraction otherwise give
    K_mu and K_{mu+1} with |mu| <= 1/2; upward recurrence reaches nu.
    """
    if not x > 0:
        raise DomainError(f"bessel_k requires x > 0, got {x!r}")
    nu = abs(nu)
    nl = int(nu + 0.5)
    mu = nu - nl
    mu2 = mu * mu
    xi = 1.0 / x
    xi2 = 2.0 * xi
    if x < 2.0:
        x2 = 0.5 * x
        pimu = math.pi * mu
        fact = 1.0 if abs(pimu) < _EPS else pimu / math.sin(pimu)
        d = -math.log(x2)
        e = mu * d
        fact2 = 1.0 if abs(e) < _EPS else math.sinh(e) / e
        gam1, gam2, gampl, gammi = _temme_gammas(mu)
        ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
        total = ff
        e = math.exp(e)
        p = 0.5 * e / gampl
        q = 0.5 / (e * gammi)
        c = 1.0
        d = x2 * x2
        total1 = p
        i = 1
        while True:
            ff = (i * ff + p + q) / (i * i - mu2)
            c *= d / i
            p /= i - mu
            q /= i + mu
            delta = c * ff
            total += delta
            total1 += c * (p - i * ff)
            if abs(delta) < abs(total) * _EPS:
                break
            i += 1
            if i > MAX_SERIES_TERMS:
                raise ConvergenceError("bessel_k Temme series did not converge")
        kmu = total
        k1 = total1 * xi2
    else:
        bb = 2.0 * (1.0 + x)
        d = 1.0 / bb
        h = delh = d
        q1, q2 = 0.0, 1.0
        a1 = 0.25 - mu2
        q = c = a1
        a = -a1
        s = 1.0 + q * delh
        i = 2
        while True:
            a -= 2 * (i - 1)
            c = -a * c / i
            qnew = (q1 - bb * q2) / a
            q1, q2 = q2, qnew
            q += c * qnew
            bb += 2.0
            d = 1.0 / (bb + a * d)
            delh = (bb * d - 1.0) * delh
            h += delh
            dels = q * delh
            s += dels
            if abs(dels / s) < _EPS:
                break
            i += 1
            if i > MAX_SERIES_TERMS:
                raise ConvergenceError("bessel_k continued fraction did not converge")
        h = a1 * h
        kmu = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
        k1 = kmu * (mu + x + 0.5 - h) * xi
    for i in range(1, nl + 1):
        kmu, k1 = k1, (mu + i) * xi2 * k1 + kmu
    return kmu


def _quad_piece(f: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = integrate.quad(f, lo, hi, epsabs=1e-3 * tol, epsrel=1e-3 * tol, limit=400, full_output=1)
    return out[0], out[1]


def radial_quadrature(f: Callable[[float], complex], tol: float = 1e-10, *, split: float | None = None) -> complex:
    """Integrate f over [0, inf) as [0, X] plus the infinite tail.

    ``f`` must decay at least exponentially. Complex-valued integrands are
    handled by integrating real and imaginary parts separately. Raises
    :class:`QuadratureError` when the combined error estimate exceeds
    ``tol`` in both the absolute and the relative sense.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    cut = 10.0 if split is None else float(split)
    probe = f(0.5 * cut)
    parts = [lambda t: f(t).real, lambda t: f(t).imag] if isinstance(probe, complex) else [f]
    values = []
    err = 0.0
    for g in parts:
        v0, e0 = _quad_piece(g, 0.0, cut, tol)
        v1, e1 = _quad_piece(g, cut, math.inf, tol)
        values.append(v0 + v1)
        err += e0 + e1
    value = complex(values[0], values[1]) if len(values) == 2 else values[0]
    if not math.isfinite(err) or err > tol * max(1.0, abs(value)):
        raise QuadratureError(f"quadrature error estimate {err:.3g} exceeds tol={tol:g}")
    return value
