"""Numerical toolkit for quaternionic Monge-Ampere energies of the radial power family."""

from .energy import (
    DEFAULT_QUADRATURE,
    EnergyParams,
    EnergyResult,
    QuadratureError,
    QuadratureSpec,
    energy_closed_pair,
    energy_numeric,
    integrate_radial,
    sphere_area,
    total_mass,
)
from .hessian import (
    HESSIAN_SCALE,
    EvaluationPoint,
    NormalizationConstants,
    PowerFamilyMember,
    fd_quaternionic_hessian,
    ma_density,
    mixed_density,
    normalization_constants,
    power_hessian_closed,
)
from .ineq import (
    CertificateError,
    ConstantsReport,
    RatioCertificate,
    F_func,
    alpha_const,
    check_two_term,
    constants_report,
    d_const,
    dFdb_closed,
    f_lemma,
    find_violation,
    ratio_R,
    ratio_general,
    ratio_grid,
)
from .quatlin import (
    HyperhermitianMatrix,
    PairingError,
    Quaternion,
    complex_adjoint,
    mixed_moore_det,
    moore_det,
)
from .specfun import SpecialValue, beta, digamma, log_beta, log_gamma

__version__ = "0.1.0"
