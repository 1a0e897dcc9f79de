"""Generalized hypergeometric coherent states on truncated Fock spaces."""

from __future__ import annotations

from .errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    HyperCSError,
    InputError,
    NumericalError,
    QuadratureError,
    ShapeError,
    TruncationError,
    UnsupportedKernelError,
    ValidationError,
    ZeroRadiusError,
)
from .fock import LadderOperator, StateVector, apply, basis, build_ladder, number_expectation, raise_vacuum
from .kernels import (
    KernelReport,
    MomentFunctional,
    derivative_kernel_check,
    moment_exact,
    moment_quadrature,
    reproducing_kernel_check,
    resolution_of_identity,
    series_identity_check,
    two_variable_closure_check,
)
from .model import (
    CANONICAL,
    ModelParams,
    StructureTable,
    e_coeff,
    func_binom,
    kp_rho,
    log_kp_rho,
    log_rho,
    pho,
    radius_of_convergence,
    rho,
    structure,
    validate,
)
from .specfun import SeriesResult, bessel_i, bessel_k, log_gamma, pfq, pochhammer, radial_quadrature
from .states import (
    BinomialPower,
    ShiftSpec,
    annihilation_residual,
    bg_state,
    compare_routes,
    displacement_diagonal,
    displacement_diagonal_matrix,
    gen_binom_power,
    kp_state,
    overlap,
    sequential_displacement,
    shifted_state,
)

__version__ = "0.1.0"
