"""Limiting determinantal kernels and their finite-parameter precursors."""

from .bessel import BesselTable, bessel_C, deformed_bessel_kernel, discrete_bessel_kernel
from .gamma_limit import (
    GammaDeformParams,
    Psi,
    Psi_gamma_only,
    W,
    gamma_deformed_kernel,
    gamma_deformed_kernel_printed,
    gamma_kernel,
    h_dx,
    h_fn,
    psi_asymptotic_check,
    scaled_deformed_zmeasure,
    unscaled_limit_estimate,
)
from .zmeasure import (
    COMPLEMENTARY,
    DEGENERATE,
    PRINCIPAL,
    HalfInt,
    ZParams,
    classify,
    D_k,
    kernel_constant,
    printed_constant,
    psi,
    psi_dx,
    psi_integral,
    psi_meixner,
    zmeas_deformed_kernel,
)

__all__ = [
    "BesselTable", "COMPLEMENTARY", "DEGENERATE", "D_k", "GammaDeformParams", "HalfInt",
    "PRINCIPAL", "Psi", "Psi_gamma_only", "W", "ZParams", "bessel_C", "classify",
    "deformed_bessel_kernel", "discrete_bessel_kernel", "gamma_deformed_kernel",
    "gamma_deformed_kernel_printed", "gamma_kernel", "h_dx", "h_fn", "kernel_constant",
    "printed_constant", "psi", "psi_asymptotic_check", "psi_dx", "psi_integral", "psi_meixner",
    "scaled_deformed_zmeasure", "unscaled_limit_estimate", "zmeas_deformed_kernel",
]
