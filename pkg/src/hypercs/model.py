"""Hypergeometric coherent-state families and their structure quantities.

A family is fixed by two lists of positive reals: numerator parameters
``a`` (length p) and denominator parameters ``b`` (length q). Everything
else follows from the ladder amplitude

    e(n) = n * prod_j (b_j - 1 + n) / prod_i (a_i - 1 + n)

and the structure function rho(n) = e(1) e(2) ... e(n), rho(0) = 1, which
is kept in log domain.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DomainError, ValidationError, ZeroRadiusError
from .specfun import series_radius

__all__ = [
    "ModelParams",
    "StructureTable",
    "validate",
    "structure",
    "e_coeff",
    "log_rho",
    "rho",
    "log_g_factorial",
    "func_binom",
    "log_func_binom",
    "log_kp_rho",
    "kp_rho",
    "radius_of_convergence",
    "CANONICAL",
    "pho",
]


@dataclass(frozen=True)
class ModelParams:
    """Parameter set (p, q, a, b) of one generalized coherent-state family."""

    a: tuple[float, ...] = ()
    b: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def q(self) -> int:
        return len(self.b)

    @property
    def is_canonical(self) -> bool:
        """True when p = q and the parameter lists agree as multisets."""
        return sorted(self.a) == sorted(self.b)

    def dual(self) -> "ModelParams":
        """Family with the roles of numerator and denominator swapped."""
        return ModelParams(a=self.b, b=self.a)

    @classmethod
    def parse(cls, text: str) -> "ModelParams":
        """Read the textual form ``p=0,q=1;a=;b=1.5``.

        Whitespace is ignored. The declared arities must match the list
        lengths.
        """
        compact = re.sub(r"\s+", "", text)
        sections = compact.split(";")
        if len(sections) != 3:
            raise ValidationError(f"expected 'p=..,q=..;a=..;b=..', got {text!r}")
        head, a_sec, b_sec = sections
        m = re.fullmatch(r"p=(\d+),q=(\d+)", head)
        if m is None:
            raise ValidationError(f"malformed arity section {head!r}")
        p, q = int(m.group(1)), int(m.group(2))

        def values(sec: str, name: str) -> tuple[float, ...]:
            if not sec.startswith(name + "="):
                raise ValidationError(f"expected section '{name}=...', got {sec!r}")
            body = sec[len(name) + 1:]
            if not body:
                return ()
            try:
                return tuple(float(v) for v in body.split(","))
            except ValueError as exc:
                raise ValidationError(f"non-numeric coefficient in {sec!r}") from exc

        a, b = values(a_sec, "a"), values(b_sec, "b")
        if len(a) != p or len(b) != q:
            raise ValidationError(f"declared p={p}, q={q} but got {len(a)} a-values and {len(b)} b-values")
        return cls(a=a, b=b)

    def format(self) -> str:
        """Inverse of :meth:`parse`."""
        return "p={},q={};a={};b={}".format(
            self.p, self.q, ",".join(repr(v) for v in self.a), ",".join(repr(v) for v in self.b)
        )

    def __str__(self) -> str:
        return self.format()


CANONICAL = ModelParams()


def pho(varsigma: float) -> ModelParams:
    """Pseudoharmonic-oscillator family: p = 0, q = 1, b = varsigma + 1/2."""
    return ModelParams(b=(varsigma + 0.5,))


def validate(params: ModelParams) -> ModelParams:
    """Return ``params`` unchanged if every coefficient is positive and p <= q + 1."""
    for name, vals in (("a", params.a), ("b", params.b)):
        for v in vals:
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"coefficient {name}={v!r} must be a positive finite real")
    if params.p > params.q + 1:
        raise ZeroRadiusError(f"p={params.p} > q+1={params.q + 1}: the normalization series has zero radius")
    return params


def radius_of_convergence(params: ModelParams) -> float:
    """Radius in the variable x = |z|^2: infinite for p <= q, 1 for p = q + 1."""
    validate(params)
    return series_radius(params.a, params.b)


def _e_value(a: Sequence[float], b: Sequence[float], n: int) -> float:
    num = float(n)
    for bj in b:
        num *= bj - 1.0 + n
    den = 1.0
    for ai in a:
        den *= ai - 1.0 + n
    return num / den


def _log_e_value(a: Sequence[float], b: Sequence[float], n: int) -> float:
    s = math.log(n)
    s += sum(math.log(bj - 1.0 + n) for bj in b)
    s -= sum(math.log(ai - 1.0 + n) for ai in a)
    return s


class StructureTable:
    """Cached ln rho(n) and e(n) for one validated family.

    The table grows on demand; growth happens under a lock, readers only
    ever see fully written prefixes.
    """

    def __init__(self, params: ModelParams, n_max: int = 64):
        self.params = validate(params)
        self._lock = threading.Lock()
        self._rho_log = np.zeros(1)
        self._e = np.zeros(1)  # e(0) = 0 by convention
        self._extend(n_max)

    def _extend(self, n_max: int) -> None:
        with self._lock:
            have = len(self._rho_log) - 1
            if n_max <= have:
                return
            a, b = self.params.a, self.params.b
            new_e = np.array([_e_value(a, b, n) for n in range(have + 1, n_max + 1)])
            new_log = np.array([_log_e_value(a, b, n) for n in range(have + 1, n_max + 1)])
            rho_log = np.concatenate([self._rho_log, self._rho_log[-1] + np.cumsum(new_log)])
            e = np.concatenate([self._e, new_e])
            rho_log.flags.writeable = False
            e.flags.writeable = False
            self._e = e
            self._rho_log = rho_log

    @property
    def size(self) -> int:
        return len(self._rho_log) - 1

    def rho_log(self, n_max: int) -> np.ndarray:
        """ln rho(n) for n = 0..n_max (read-only view)."""
        if n_max > self.size:
            self._extend(max(n_max, 2 * self.size))
        return self._rho_log[: n_max + 1]

    def e(self, n_max: int) -> np.ndarray:
        """e(n) for n = 0..n_max, with e(0) = 0 (read-only view)."""
        if n_max > self.size:
            self._extend(max(n_max, 2 * self.size))
        return self._e[: n_max + 1]


@lru_cache(maxsize=256)
def structure(params: ModelParams) -> StructureTable:
    """Shared :class:`StructureTable` for ``params``."""
    return StructureTable(params)


def e_coeff(params: ModelParams, n: int) -> float:
    """Ladder amplitude squared e(n), n >= 1."""
    if n < 1:
        raise DomainError(f"e(n) is defined for n >= 1, got {n}")
    validate(params)
    return _e_value(params.a, params.b, n)


def log_rho(params: ModelParams, n: int) -> float:
    """ln rho(n)."""
    if n < 0:
        raise DomainError(f"rho(n) needs n >= 0, got {n}")
    return float(structure(params).rho_log(n)[n])


def rho(params: ModelParams, n: int) -> float:
    """rho(n) itself; overflows to inf for very large n."""
    try:
        return math.exp(log_rho(params, n))
    except OverflowError:
        return math.inf


def log_g_factorial(params: ModelParams, n: int) -> float:
    """ln [g(n)]! = ln rho(n) - ln n!."""
    return log_rho(params, n) - math.lgamma(n + 1)


def log_func_binom(params: ModelParams, l: int, n: int) -> float:
    """ln of rho(l) / (rho(n) rho(l - n))."""
    if not 0 <= n <= l:
        raise DomainError(f"functional binomial needs 0 <= n <= l, got l={l}, n={n}")
    lr = structure(params).rho_log(l)
    return float(lr[l] - lr[n] - lr[l - n])


def func_binom(params: ModelParams, l: int, n: int) -> float:
    """Functional binomial coefficient rho(l) / (rho(n) rho(l - n)).

    Symmetric in n <-> l - n by construction; reduces to C(l, n) for the
    canonical family.
    """
    return math.exp(log_func_binom(params, l, min(n, l - n) if 0 <= n <= l else n))


def log_kp_rho(params: ModelParams, n: int) -> float:
    """ln rho_KP(n) = 2 ln n! - ln rho(n)."""
    return 2.0 * math.lgamma(n + 1) - log_rho(params, n)


def kp_rho(params: ModelParams, n: int) -> float:
    """rho_KP(n) = (n!)^2 / rho(n); overflows to inf for very large n."""
    try:
        return math.exp(log_kp_rho(params, n))
    except OverflowError:
        return math.inf
