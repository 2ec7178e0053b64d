"""Christoffel deformations of discrete orthogonal polynomial ensembles.

Finite ensembles (Charlier, Meixner) deformed by ``prod (x - u_i)^2``, their
correlation kernels, the limiting discrete Bessel, z-measure and Gamma
kernels, and brute-force oracles to check all of them against.
"""

from .christoffel import (
    DeformationSpec,
    EnsembleSpec,
    KernelHandle,
    deformed_kernel,
    deformed_monic,
    deformed_norm,
    ope_kernel,
)
from .errors import ChristoffelDPPError
from .orthopoly import WeightFamily
from .specfun import PrecisionContext, get_context

__version__ = "0.1.0"

__all__ = [
    "ChristoffelDPPError",
    "DeformationSpec",
    "EnsembleSpec",
    "KernelHandle",
    "PrecisionContext",
    "WeightFamily",
    "deformed_kernel",
    "deformed_monic",
    "deformed_norm",
    "get_context",
    "ope_kernel",
]
