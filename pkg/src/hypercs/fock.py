"""Truncated Fock space: state vectors and the generalized ladder operators.

Levels run from 0 to N. The lowering operator maps |n> to sqrt(e(n)) |n-1>
and the raising operator maps |n> to sqrt(e(n+1)) |n+1>; both are stored
as a single band.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .errors import ShapeError, TruncationError
from .model import ModelParams, structure, validate

__all__ = [
    "StateVector",
    "LadderOperator",
    "basis",
    "build_ladder",
    "apply",
    "raise_vacuum",
    "number_expectation",
]

Kind = Literal["raising", "lowering"]


@dataclass(frozen=True, eq=False)
class StateVector:
    """Fock-basis coefficients on levels 0..trunc.

    ``tail_bound`` bounds the weight (squared norm) that lives above
    ``trunc`` or was pushed out of the truncated space.
    """

    coeffs: np.ndarray
    trunc: int
    params: ModelParams
    tail_bound: float = 0.0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (self.trunc + 1,):
            raise ShapeError(f"expected {self.trunc + 1} coefficients, got shape {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: "StateVector") -> complex:
        """<self|other>, antilinear in ``self``."""
        _check_compatible(self, other)
        return complex(np.vdot(self.coeffs, other.coeffs))

    def normalized(self) -> "StateVector":
        nrm = self.norm()
        return replace(self, coeffs=self.coeffs / nrm, tail_bound=self.tail_bound / nrm**2)

    def __add__(self, other: "StateVector") -> "StateVector":
        _check_compatible(self, other)
        return replace(self, coeffs=self.coeffs + other.coeffs, tail_bound=self.tail_bound + other.tail_bound)

    def scaled(self, factor: complex) -> "StateVector":
        return replace(self, coeffs=factor * self.coeffs, tail_bound=abs(factor) ** 2 * self.tail_bound)


def _check_compatible(u: StateVector, v: StateVector) -> None:
    if u.trunc != v.trunc or u.params != v.params:
        raise ShapeError("states live on different truncated spaces or families")


def basis(params: ModelParams, n: int, trunc: int) -> StateVector:
    """Fock state |n> on levels 0..trunc."""
    if not 0 <= n <= trunc:
        raise TruncationError(f"level {n} outside 0..{trunc}")
    c = np.zeros(trunc + 1, dtype=complex)
    c[n] = 1.0
    return StateVector(c, trunc, validate(params))


@dataclass(frozen=True, eq=False)
class LadderOperator:
    """Banded ladder operator; ``band[k] = sqrt(e(k+1))`` for k = 0..trunc-1.

    ``overflow`` is sqrt(e(trunc+1)), the amplitude the raising operator
    would send from the top level out of the space.
    """

    kind: Kind
    band: np.ndarray
    trunc: int
    params: ModelParams
    overflow: float

    def amplitude(self, n: int) -> float:
        """sqrt(e(n)) for 1 <= n <= trunc."""
        return float(self.band[n - 1])

    def matrix(self) -> np.ndarray:
        """Dense (trunc+1) x (trunc+1) matrix."""
        return np.diag(self.band, 1 if self.kind == "lowering" else -1)

    def adjoint(self) -> "LadderOperator":
        other = "raising" if self.kind == "lowering" else "lowering"
        return replace(self, kind=other)


def build_ladder(params: ModelParams, trunc: int, kind: Kind) -> LadderOperator:
    """Raising or lowering operator on levels 0..trunc (trunc >= 1)."""
    if trunc < 1:
        raise TruncationError(f"truncation must be >= 1, got {trunc}")
    if kind not in ("raising", "lowering"):
        raise ValueError(f"unknown ladder kind {kind!r}")
    e = structure(params).e(trunc + 1)
    band = np.sqrt(e[1 : trunc + 1])
    band.flags.writeable = False
    return LadderOperator(kind, band, trunc, params, float(np.sqrt(e[trunc + 1])))


def apply(op: LadderOperator, v: StateVector) -> StateVector:
    """Matrix-vector product on the truncated space.

    Raising from the top level cannot be represented; the discarded weight
    is added to the result's ``tail_bound``.
    """
    if op.trunc != v.trunc or op.params != v.params:
        raise ShapeError("operator and state differ in truncation or family")
    out = np.zeros_like(v.coeffs)
    tail = v.tail_bound
    if op.kind == "lowering":
        out[:-1] = op.band * v.coeffs[1:]
    else:
        out[1:] = op.band * v.coeffs[:-1]
        tail += (op.overflow * abs(v.coeffs[-1])) ** 2
    return StateVector(out, v.trunc, v.params, tail)


def raise_vacuum(params: ModelParams, n: int, trunc: int) -> StateVector:
    """(A+)^n |0> by n successive applications; equals sqrt(rho(n)) |n>."""
    if n > trunc:
        raise TruncationError(f"cannot raise to level {n} with truncation {trunc}")
    v = basis(params, 0, trunc)
    if n == 0:
        return v
    up = build_ladder(params, trunc, "raising")
    for _ in range(n):
        v = apply(up, v)
    return v


def number_expectation(v: StateVector) -> float:
    """<v| A+ A- |v> = sum_n e(n) |c_n|^2."""
    e = structure(v.params).e(v.trunc)
    return float(np.sum(e * np.abs(v.coeffs) ** 2))
