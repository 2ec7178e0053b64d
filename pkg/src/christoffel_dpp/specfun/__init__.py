"""Extended-precision scalar substrate."""

from .bessel import BesselParams, bessel_J, bessel_J_series, bessel_L, bessel_L_series
from .gamma import digamma, gamma_fn, gen_pochhammer, log_gamma, pochhammer, rgamma
from .hypergeom import hyp2F1_neg, hyp2f1_regularized_series, hyp_pFq
from .precision import PrecisionContext, get_context

__all__ = [
    "BesselParams",
    "PrecisionContext",
    "bessel_J",
    "bessel_J_series",
    "bessel_L",
    "bessel_L_series",
    "digamma",
    "gamma_fn",
    "gen_pochhammer",
    "get_context",
    "hyp2F1_neg",
    "hyp2f1_regularized_series",
    "hyp_pFq",
    "log_gamma",
    "pochhammer",
    "rgamma",
]
