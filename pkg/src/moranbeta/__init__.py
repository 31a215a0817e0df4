"""Exact verification and error certificates for the Beta approximation
of the two-allele Moran model's stationary law."""

from .beta import BetaParams
from .distance import (
    DistanceReport,
    distance_report,
    gap_h,
    kolmogorov,
    membership_check_g,
    periodic_extension_g,
    wasserstein,
)
from .model import (
    LatticeDistribution,
    ModelParams,
    TransitionTriple,
    power_iteration_oracle,
    sample_stationary,
    simulate_chain,
    stationary_closed_form,
    stationary_ratio_product,
    transition,
)
from .moments import MomentTable, moment_recursion
from .special import ConvergenceError, Tolerance, log_beta, log_gamma, reg_inc_beta
from .stein import (
    BoundCertificate,
    SteinReport,
    bound_certificate,
    c_constant,
    e_abs_s,
    k_constant,
    lower_bound,
    s_remainder,
    stein_report,
    third_moment_ratio,
    upper_bound_assembled,
    verify_condition_1,
    verify_condition_2,
)

__version__ = "0.1.0"

__all__ = [
    "BetaParams",
    "BoundCertificate",
    "ConvergenceError",
    "DistanceReport",
    "LatticeDistribution",
    "ModelParams",
    "MomentTable",
    "SteinReport",
    "Tolerance",
    "TransitionTriple",
    "bound_certificate",
    "c_constant",
    "distance_report",
    "e_abs_s",
    "gap_h",
    "k_constant",
    "kolmogorov",
    "log_beta",
    "log_gamma",
    "lower_bound",
    "membership_check_g",
    "moment_recursion",
    "periodic_extension_g",
    "power_iteration_oracle",
    "reg_inc_beta",
    "s_remainder",
    "sample_stationary",
    "simulate_chain",
    "stationary_closed_form",
    "stationary_ratio_product",
    "stein_report",
    "third_moment_ratio",
    "transition",
    "upper_bound_assembled",
    "verify_condition_1",
    "verify_condition_2",
    "wasserstein",
]
