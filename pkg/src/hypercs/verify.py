"""Registry of identity checks driven by ``hypercs verify``.

Each check returns ``(max_err, tol)`` or ``None`` when it does not apply to
the requested family. Randomized checks draw from a generator seeded by
the run seed and the check name, so results do not depend on scheduling.
"""

from __future__ import annotations

import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import kernels, states
from .errors import DomainError, HyperCSError
from .fock import apply, basis, build_ladder, number_expectation, raise_vacuum
from .model import CANONICAL, ModelParams, log_rho, pho, radius_of_convergence, structure
from .specfun import bessel_i, pfq, pochhammer

__all__ = ["Check", "CheckResult", "SUITES", "checks_for", "run_suite"]

Outcome = Optional[tuple[float, float]]


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    paper_ref: str
    run: Callable[[ModelParams, np.random.Generator], Outcome]


@dataclass(frozen=True)
class CheckResult:
    name: str
    paper_ref: str
    status: str
    max_err: float | None
    tol: float
    error: str | None = None

    def as_dict(self) -> dict:
        out = {"name": self.name, "paper_ref": self.paper_ref, "status": self.status, "max_err": self.max_err, "tol": self.tol}
        if self.error is not None:
            out["error"] = self.error
        return out


_REGISTRY: list[Check] = []
SUITES = ("all", "states", "kernels", "limits")


def _check(name: str, suite: str, paper_ref: str):
    def deco(fn):
        _REGISTRY.append(Check(name, suite, paper_ref, fn))
        return fn

    return deco


def _labels(params: ModelParams, rng: np.random.Generator, count: int, rmax: float = 2.0) -> np.ndarray:
    radius = radius_of_convergence(params)
    r = min(rmax, 0.9 * math.sqrt(radius)) if math.isfinite(radius) else rmax
    mod = r * np.sqrt(rng.random(count))
    return mod * np.exp(2j * np.pi * rng.random(count))


def _rel(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.maximum(np.abs(np.asarray(b)), 1e-300)))


# limits ------------------------------------------------------------------


@_check("limit_canonical_rho", "limits", "structure function rho(n) = n! in the canonical limit")
def _limit_rho(params, rng):
    n = np.arange(51)
    ref = np.array([math.lgamma(k + 1) for k in n])
    fams = [CANONICAL, ModelParams(a=(1.7, 2.4), b=(2.4, 1.7))]
    return max(float(np.max(np.abs(structure(f).rho_log(50) - ref))) for f in fams), 1e-12


@_check("limit_canonical_bg_state", "limits", "canonical coherent state exp(-|z|^2/2) z^n / sqrt(n!)")
def _limit_bg(params, rng):
    worst = 0.0
    for z in _labels(CANONICAL, rng, 10, 3.0):
        s = states.bg_state(CANONICAL, z, 1e-16)
        n = np.arange(s.trunc + 1)
        ref = np.exp(-0.5 * abs(z) ** 2 + n * np.log(abs(z)) - 0.5 * np.array([math.lgamma(k + 1) for k in n])) * np.exp(1j * n * np.angle(z))
        worst = max(worst, float(np.max(np.abs(s.coeffs - ref))))
    return worst, 1e-12


@_check("limit_canonical_shifted_state", "limits", "shifted canonical state exp(-|z+sigma|^2/2) (z+sigma)^n / sqrt(n!)")
def _limit_shifted(params, rng):
    worst = 0.0
    zs, ss = _labels(CANONICAL, rng, 20), _labels(CANONICAL, rng, 20)
    for z, s in zip(zs, ss):
        Z = z + s
        st = states.shifted_state(CANONICAL, states.ShiftSpec(1.0, z, 1.0, s), 1e-16)
        n = np.arange(st.trunc + 1)
        ref = np.power(complex(Z), n) * np.exp(-0.5 * abs(Z) ** 2 - 0.5 * np.array([math.lgamma(k + 1) for k in n]))
        worst = max(worst, float(np.max(np.abs(st.coeffs - ref))))
    return worst, 1e-10


@_check("limit_canonical_kp_equals_bg", "limits", "Klauder-Perelomov and Barut-Girardello states coincide canonically")
def _limit_kp(params, rng):
    worst = 0.0
    for z in _labels(CANONICAL, rng, 10):
        n = states.bg_state(CANONICAL, z, 1e-14).trunc
        worst = max(worst, float(np.max(np.abs(states.kp_state(CANONICAL, z, trunc=n).coeffs - states.bg_state(CANONICAL, z, trunc=n).coeffs))))
    return worst, 1e-12


@_check("limit_canonical_ladder", "limits", "generalized ladder operators reduce to the canonical ones")
def _limit_ladder(params, rng):
    n = 40
    ref = np.diag(np.sqrt(np.arange(1, n + 1, dtype=float)), 1)
    fams = [CANONICAL, ModelParams(a=(1.7, 2.4), b=(2.4, 1.7))]
    return max(float(np.max(np.abs(build_ladder(f, n, "lowering").matrix() - ref))) for f in fams), 1e-12


@_check("limit_exp_series", "limits", "0F0(x) = exp(x)")
def _limit_exp(params, rng):
    xs = np.linspace(-20, 20, 41)
    return max(abs(pfq(CANONICAL, x).value - math.exp(x)) / math.exp(x) for x in xs), 1e-12


@_check("limit_binomial_series", "limits", "1F0(a;;x) = (1-x)^(-a)")
def _limit_binomial(params, rng):
    worst = 0.0
    for a in (0.5, 1.3, 2.0):
        fam = ModelParams(a=(a,))
        for x in np.linspace(-0.9, 0.9, 19):
            worst = max(worst, abs(pfq(fam, x).value - (1 - x) ** (-a)) / (1 - x) ** (-a))
    return worst, 1e-10


@_check("limit_pho_bessel_normalization", "limits", "PHO normalization 0F1(;b;y) = Gamma(b) y^((1-b)/2) I_(b-1)(2 sqrt y)")
def _limit_pho_bessel(params, rng):
    worst = 0.0
    for vs in (1.0, 2.0):
        b = vs + 0.5
        for r in np.linspace(0.05, 5.0, 40):
            y = r * r
            ref = math.gamma(b) * y ** ((1 - b) / 2) * bessel_i(b - 1, 2 * math.sqrt(y))
            worst = max(worst, abs(pfq(pho(vs), y).value - ref) / ref)
    return worst, 1e-10


@_check("limit_pho_ladder_amplitudes", "limits", "PHO ladder amplitudes sqrt(n(n + varsigma - 1/2))")
def _limit_pho_ladder(params, rng):
    worst = 0.0
    for vs in (1.0, 2.0):
        op = build_ladder(pho(vs), 40, "lowering")
        n = np.arange(1, 41)
        worst = max(worst, _rel(op.band, np.sqrt(n * (n + vs - 0.5))))
    return worst, 1e-12


@_check("limit_pochhammer_reflection", "limits", "Pochhammer identity (a-n)_n = (-1)^n (1-a)_n")
def _limit_pochhammer(params, rng):
    worst = 0.0
    for _ in range(200):
        a = round(float(rng.uniform(-5, 5)) * 2**30) / 2**30  # a - n exact in binary
        n = int(rng.integers(0, 11))
        lhs, rhs = pochhammer(a - n, n), (-1) ** n * pochhammer(1 - a, n)
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return worst, 1e-12


# states ------------------------------------------------------------------


@_check("structure_ladder_consistency", "states", "repeated raising (A+)^n|0> = sqrt(rho(n))|n>")
def _structure_ladder(params, rng):
    worst = 0.0
    for n in range(41):
        v = raise_vacuum(params, n, 41)
        worst = max(worst, abs(v.coeffs[n] - math.exp(0.5 * log_rho(params, n))) / math.exp(0.5 * log_rho(params, n)))
        worst = max(worst, float(np.max(np.abs(np.delete(v.coeffs, n)))))
    return worst, 1e-12


@_check("structure_adjointness", "states", "raising operator is the adjoint of lowering")
def _structure_adjoint(params, rng):
    n = 40
    down, up = build_ladder(params, n, "lowering"), build_ladder(params, n, "raising")
    worst = 0.0
    for _ in range(5):
        u = states.StateVector(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1), n, params)
        v = states.StateVector(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1), n, params)
        lhs, rhs = u.inner(apply(down, v)), apply(up, u).inner(v)
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1.0))
    return worst, 1e-12


@_check("structure_number_expectation", "states", "<n|A+ A-|n> = e(n)")
def _structure_number(params, rng):
    e = structure(params).e(40)
    return max(abs(number_expectation(basis(params, n, 40)) - e[n]) / max(e[n], 1.0) for n in range(41)), 1e-12


@_check("state_normalization", "states", "coherent states are normalized")
def _state_norm(params, rng):
    worst = 0.0
    for z in _labels(params, rng, 50):
        s = states.bg_state(params, z, 1e-14)
        worst = max(worst, max(0.0, abs(s.norm() ** 2 - 1.0) - s.tail_bound))
    return worst, 1e-13


@_check("state_annihilation_eigenvalue", "states", "annihilation eigenvalue A-|z> = z|z> (residual over ten times truncation bound)")
def _state_eigen(params, rng):
    worst = 0.0
    for z in _labels(params, rng, 50):
        s = states.bg_state(params, z, 1e-14)
        res = states.annihilation_residual(params, z, state=s)
        bound = states.truncation_residual_bound(s)
        worst = max(worst, res / (10 * bound) if bound > 0 else (0.0 if res == 0 else math.inf))
    return worst, 1.0


@_check("state_hypergeometric_annihilator", "states", "pFq(z* A-)|sigma> = pFq(z* sigma)|sigma>")
def _state_hyper(params, rng):
    zs, ss = _labels(params, rng, 50, 1.5), _labels(params, rng, 50, 1.5)
    radius = radius_of_convergence(params)
    worst = 0.0
    for z, s in zip(zs, ss):
        if abs(z * s) >= radius:
            continue
        worst = max(worst, states.hypergeometric_eigen_residual(params, z, s))
    return worst, 1e-9


@_check("state_overlap_routes", "states", "overlap kernel pFq(z* w)/sqrt(pFq(|z|^2) pFq(|w|^2)) against coefficient inner product")
def _state_overlap(params, rng):
    zs, ws = _labels(params, rng, 50), _labels(params, rng, 50)
    worst = 0.0
    for z, w in zip(zs, ws):
        k, i = states.overlap_routes(params, z, w, 1e-15)
        worst = max(worst, abs(k - i))
    return worst, 1e-10


@_check("state_two_route_displacement", "states", "two-route equality of displaced and shifted-argument states")
def _state_two_route(params, rng):
    radius = radius_of_convergence(params)
    scale = 1.0 if math.isinf(radius) else 0.6 * math.sqrt(radius)
    worst = 0.0
    for _ in range(30):
        eps, lam = rng.uniform(-1.5, 1.5, size=2)
        z, s = (scale * (rng.uniform(-1, 1, size=2) @ np.array([1, 1j])) / math.sqrt(2) for _ in range(2))
        if abs(eps * z) ** 2 >= radius or abs(lam * s) ** 2 >= radius:
            eps, lam = eps / 2, lam / 2
        cmp = states.compare_routes(params, states.ShiftSpec(float(eps), complex(z), float(lam), complex(s)), 1e-14)
        worst = max(worst, cmp.max_gap)
    return worst, 1e-8


@_check("state_label_continuity", "states", "continuity in the label ||z> - |z'>|| = O(|z - z'|)")
def _state_continuity(params, rng):
    worst = 0.0
    for z in _labels(params, rng, 5, 1.0):
        d = [states.label_distance(params, z, z + h) / h for h in (1e-2, 1e-3)]
        worst = max(worst, abs(d[1] / d[0] - 1.0))
    return worst, 0.05


# kernels -----------------------------------------------------------------


@_check("kernel_moment_quadrature", "kernels", "Stieltjes moments Gamma(b/a) rho(l) of the integration measure")
def _kernel_moments(params, rng):
    if not kernels.has_kernel(params):
        return None
    mf = kernels.MomentFunctional(params)
    lmax = 15 if params.is_canonical else 10
    return max(abs(kernels.moment_quadrature(params, l) / kernels.moment_exact(mf, l) - 1.0) for l in range(lmax + 1)), 1e-6


@_check("kernel_resolution_of_identity", "kernels", "resolution of the identity from the measure moments")
def _kernel_identity(params, rng):
    n = 40
    return float(np.max(np.abs(kernels.resolution_of_identity(params, n) - np.eye(n + 1)))), 1e-12


@_check("kernel_reproducing", "kernels", "reproducing kernel int dmu pFq(z u) pFq(z* v) = Gamma(b/a) pFq(u v)")
def _kernel_reproducing(params, rng):
    if not kernels.has_kernel(params):
        return None
    grid = np.linspace(0.0, 1.0, 5)
    return max(kernels.reproducing_kernel_check(params, u, v).max_err for u in grid for v in grid), 1e-6


@_check("kernel_derivative", "kernels", "Gaussian integral of z^n z*^m exp(z u + z* v) equals derivatives of exp(u v)")
def _kernel_derivative(params, rng):
    pts = (0.0, 0.5)
    return max(
        kernels.derivative_kernel_check(n, m, u, v).max_err for n in range(3) for m in range(3) for u in pts for v in pts
    ), 1e-5


@_check("kernel_series_identity", "kernels", "term-wise shifted-Pochhammer form of the (n, m) kernel identity")
def _kernel_series(params, rng):
    try:
        return max(kernels.series_identity_check(params, n, m, 30).max_err for n in range(4) for m in range(4)), 1e-12
    except DomainError:
        return None


@_check("kernel_two_variable_closure", "kernels", "two-variable resolution of identity closure sum")
def _kernel_closure(params, rng):
    worst = 0.0
    for l in range(21):
        rep = kernels.two_variable_closure_check(params, l)
        worst = max(worst, rep.max_err if rep.details["binomial_sum_exact"] else math.inf)
    return worst, 1e-12


def checks_for(suite: str) -> list[Check]:
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}")
    return [c for c in _REGISTRY if suite == "all" or c.suite == suite]


def _worker_count() -> int:
    raw = os.environ.get("HYPERCS_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_one(check: Check, params: ModelParams, seed: int) -> CheckResult | None:
    rng = np.random.default_rng([seed, zlib.crc32(check.name.encode())])
    try:
        out = check.run(params, rng)
    except HyperCSError as exc:
        return CheckResult(check.name, check.paper_ref, "fail", None, math.nan, f"{type(exc).__name__}: {exc}")
    if out is None:
        return None
    err, tol = out
    status = "pass" if err <= tol else "fail"
    return CheckResult(check.name, check.paper_ref, status, float(err), float(tol))


def run_suite(suite: str, params: ModelParams, seed: int = 0) -> list[CheckResult]:
    """Run every applicable check of ``suite``; results sorted by name."""
    todo = checks_for(suite)
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        results = list(pool.map(lambda c: _run_one(c, params, seed), todo))
    return sorted((r for r in results if r is not None), key=lambda r: r.name)
