"""Invariant suites behind ``christoffel-dpp verify``.

Each check returns ``(residual, tolerance)``; ``fuzz`` is a relative
perturbation applied to the library side of every comparison, used as a
negative control.
"""

from __future__ import annotations

from fractions import Fraction

from .christoffel import (
    DeformationSpec,
    EnsembleSpec,
    deformed_kernel,
    deformed_monic_coeffs,
    deformed_norm,
    det,
    det_laplace,
    ensemble_pair_probability,
    ope_kernel,
    support_cutoff,
)
from .kernels.bessel import deformed_bessel_kernel, discrete_bessel_kernel
from .kernels.gamma_limit import Psi, Psi_gamma_only
from .kernels.zmeasure import ZParams, psi, psi_integral, zmeas_deformed_kernel
from .oracle import (
    brute_plancherel_corr,
    brute_zmeasure_corr,
    enumerate_partitions,
    gram_schmidt_monic,
    kernel_side_deformation,
    partition_dim,
    partition_dim_checked,
)
from .orthopoly import WeightFamily, charlier_eval, meixner_eval
from .specfun.bessel import BesselParams, bessel_J, bessel_J_series, bessel_L
from .specfun.gamma import digamma
from .specfun.hypergeom import hyp2F1_neg, hyp_pFq


def _rel(ctx, a, b):
    mp = ctx.mp
    return abs(a - b) / max(mp.one, abs(b))


# -- specfun --------------------------------------------------------------------------

def _digamma_one(ctx, f):
    return abs(digamma(1, ctx) * f + ctx.mp.euler), 1e-60


def _hyp_log(ctx, f):
    mp = ctx.mp
    return _rel(ctx, hyp_pFq([1, 1], [2], mp.mpf(1) / 2, ctx) * f, -mp.log(mp.mpf(1) / 2) * 2), 1e-60


def _hyp_routes(ctx, f):
    mp = ctx.mp
    a, b, c, w = mp.mpf("0.3"), mp.mpf("0.7"), mp.mpf("1.1"), mp.mpf(-50)
    return _rel(ctx, hyp2F1_neg(a, b, c, w, ctx) * f, mp.hyp2f1(a, b, c, w)), 1e-60


def _bessel_series(ctx, f):
    p = BesselParams(1)
    return _rel(ctx, bessel_J(ctx.num("2.5"), p, ctx) * f, bessel_J_series(ctx.num("2.5"), 1, ctx)), 1e-40


def _bessel_generating(ctx, f):
    mp = ctx.mp
    p = BesselParams(1)
    t = mp.expj(mp.mpf("0.7"))
    s = mp.fsum(bessel_J(n, p, ctx) * t ** n for n in range(-40, 41))
    return abs(s * f - mp.exp(t - 1 / t)), 1e-20


def _bessel_L_fd(ctx, f):
    mp = ctx.mp
    p = BesselParams(1)
    x, h = mp.mpf("0.3"), mp.mpf("1e-20")
    fd = (bessel_J(x + h, p, ctx) - bessel_J(x - h, p, ctx)) / (2 * h)
    return abs(bessel_L(x, p, ctx) * f - fd), 1e-30


# -- orthopoly -----------------------------------------------------------------------

def _gram(fam, ctx, f, n_max=5):
    mp = ctx.mp
    X = fam.support_cutoff(ctx.mantissa_bits, degree=n_max)
    w = [fam.weight(x, ctx) for x in range(X)]
    P = [[fam.eval(n, x, ctx) for x in range(X)] for n in range(n_max + 1)]
    worst = mp.zero
    for n in range(n_max + 1):
        for m in range(n + 1):
            g = mp.fsum(w[x] * P[n][x] * P[m][x] for x in range(X)) * f
            target = fam.sq_norm(n, ctx) if n == m else 0
            worst = max(worst, _rel(ctx, g, target))
    return worst


def _charlier_gram(ctx, f):
    return _gram(WeightFamily.charlier(2), ctx, f), 1e-20


def _meixner_gram(ctx, f):
    return _gram(WeightFamily.meixner("1.5", "0.3"), ctx, f), 1e-20


def _meixner_mass(ctx, f):
    mp = ctx.mp
    fam = WeightFamily.meixner("1.5", "0.3")
    s = mp.fsum(fam.weight(x, ctx) for x in range(201)) * f
    return _rel(ctx, s, mp.power(1 - mp.mpf("0.3"), -mp.mpf("1.5"))), 1e-25


def _routes(ctx, f):
    worst = ctx.mp.zero
    for n, x in [(12, 3), (25, "7.5"), (30, 40)]:
        a = charlier_eval(n, x, 2, ctx, route="direct")
        b = charlier_eval(n, x, 2, ctx, route="recurrence")
        c = meixner_eval(n, x, "1.5", "0.3", ctx, route="direct")
        d = meixner_eval(n, x, "1.5", "0.3", ctx, route="recurrence")
        worst = max(worst, _rel(ctx, a * f, b), _rel(ctx, c * f, d))
    return worst, 1e-40


# -- christoffel ---------------------------------------------------------------------

def _det_laplace(ctx, f):
    mp = ctx.mp
    rows = [[mp.mpf(1) / (i + j + 1) + (i == j) for j in range(5)] for i in range(5)]
    return _rel(ctx, det(rows, ctx) * f, det_laplace(rows)), 1e-60


def _monic_vs_moments(ctx, f):
    worst = ctx.mp.zero
    for fam in (WeightFamily.charlier(1), WeightFamily.meixner("1.5", "0.3")):
        d = DeformationSpec(("2.5",))
        coeffs, norms = gram_schmidt_monic(EnsembleSpec(fam, 1, d), 4, ctx)
        for n in range(5):
            mine = deformed_monic_coeffs(fam, d, n, ctx)
            worst = max(worst, max(_rel(ctx, a * f, b) for a, b in zip(mine, coeffs[n])))
            worst = max(worst, _rel(ctx, deformed_norm(fam, d, n, ctx) * f, norms[n]))
    return worst, 1e-15


def _trace(ctx, f):
    spec = EnsembleSpec(WeightFamily.charlier(1), 3, DeformationSpec(("0.5",)))
    K = deformed_kernel(spec, ctx)
    X = support_cutoff(spec, ctx)
    return abs(ctx.mp.fsum(K(x, x) for x in range(X)) * f - 3), 1e-30


def _pair_probability(ctx, f):
    worst = ctx.mp.zero
    for pts in ((), ("0.5",)):
        spec = EnsembleSpec(WeightFamily.charlier(1), 2, DeformationSpec(pts))
        K = deformed_kernel(spec, ctx) if pts else ope_kernel(spec, ctx)
        for x1, x2 in ((0, 1), (2, 5), (1, 3)):
            worst = max(worst, _rel(ctx, K.minor([x1, x2]) * f, ensemble_pair_probability(spec, x1, x2, ctx)))
    return worst, 1e-12


# -- kernels --------------------------------------------------------------------------

def _bessel_collapse(ctx, f):
    K0 = discrete_bessel_kernel(1, ctx)
    Kd = deformed_bessel_kernel(1, (), ctx)
    return max(abs(Kd(x, y) * f - K0(x, y)) for x in (-1, 0, 2) for y in (-1, 0, 2)), 1e-40


def _psi_routes(ctx, f):
    worst = ctx.mp.zero
    for zp in (ZParams(complex(0.3, 0.4), complex(0.3, -0.4), "0.4"), ZParams("0.2", "0.6", "0.4")):
        for a, x in ((-0.5, 0.5), (1.5, -2.5)):
            worst = max(worst, abs(psi(a, x, zp, ctx) * f - psi_integral(a, x, zp, ctx)))
    return worst, 1e-12


def _psi_symmetry(ctx, f):
    zp = ZParams("0.2", "0.6", "0.4")
    return abs(psi(-0.5, 1.5, zp, ctx) * f - psi(-0.5, 1.5, zp.swapped(), ctx)), 1e-20


def _meixner_identification(ctx, f):
    mp = ctx.mp
    zp = ZParams(4, "4.5", "0.3")
    u, N = mp.mpf("0.3"), 4
    K = zmeas_deformed_kernel(zp, [u], ctx)
    KM = deformed_kernel(EnsembleSpec(WeightFamily.meixner("1.5", "0.3"), N,
                                      DeformationSpec((u + N - mp.mpf(1) / 2,))), ctx)
    grid = (-1.5, 0.5, 2.5)
    return max(abs(K(x, y) * f - KM(mp.mpf(x) + N - mp.mpf(1) / 2, mp.mpf(y) + N - mp.mpf(1) / 2))
               for x in grid for y in grid), 1e-10


def _gamma_only(ctx, f):
    zp = ZParams(complex(0.3, 0.4), complex(0.3, -0.4), "0.5")
    return abs(Psi(0.5, 1.7, -1.5, 0.5, zp, ctx) * f - Psi_gamma_only(0.5, 1.7, -1.5, 0.5, zp, ctx)), 1e-18


# -- oracle ----------------------------------------------------------------------------

def _partition_counts(ctx, f):
    n = sum(1 for _ in enumerate_partitions(10))
    return abs(n * f - 139), 0.5


def _plancherel_norm(ctx, f):
    worst = 0
    for n in range(11):
        s = sum(Fraction(partition_dim(p) ** 2) for p in enumerate_partitions(n) if p.size == n)
        worst = max(worst, abs(float(s / _fact(n)) * f - 1))
    for p in enumerate_partitions(8):
        partition_dim_checked(p)
    return worst, 1e-15


def _fact(n):
    out = 1
    for j in range(2, n + 1):
        out *= j
    return out


def _plancherel_cross(ctx, f):
    r = brute_plancherel_corr("0.5", [1, -2], 14, ctx)
    K = discrete_bessel_kernel("0.5", ctx)
    return abs(r.value * f - K.minor([1, -2])), float(r.tail) + 1e-8


def _zmeasure_cross(ctx, f):
    zp = ZParams(5, "5.5", "0.02")
    r = brute_zmeasure_corr(zp, [0.5, -1.5], 14, kernel_side_deformation(zp, ["0.3"]), ctx)
    K = zmeas_deformed_kernel(zp, ["0.3"], ctx)
    return abs(r.value * f - K.minor([0.5, -1.5])), 1e-8


SUITES = {
    "specfun": [
        ("digamma_at_one", _digamma_one),
        ("hyp2f1_log_identity", _hyp_log),
        ("hyp2f1_transformation_route", _hyp_routes),
        ("bessel_contour_vs_series", _bessel_series),
        ("bessel_generating_function", _bessel_generating),
        ("bessel_L_finite_difference", _bessel_L_fd),
    ],
    "orthopoly": [
        ("charlier_gram_matrix", _charlier_gram),
        ("meixner_gram_matrix", _meixner_gram),
        ("meixner_total_mass", _meixner_mass),
        ("direct_vs_recurrence", _routes),
    ],
    "christoffel": [
        ("determinant_vs_laplace", _det_laplace),
        ("monic_vs_moment_oracle", _monic_vs_moments),
        ("kernel_trace", _trace),
        ("pair_probability", _pair_probability),
    ],
    "kernels": [
        ("bessel_k0_collapse", _bessel_collapse),
        ("psi_series_vs_contour", _psi_routes),
        ("psi_parameter_symmetry", _psi_symmetry),
        ("zmeasure_meixner_identification", _meixner_identification),
        ("psi_gamma_only_form", _gamma_only),
    ],
    "oracle": [
        ("partition_count", _partition_counts),
        ("plancherel_normalization", _plancherel_norm),
        ("plancherel_cross_oracle", _plancherel_cross),
        ("zmeasure_cross_oracle", _zmeasure_cross),
    ],
}


def run_suite(name, ctx, fuzz=0):
    """Yield one report dict per invariant of suite ``name`` (or every suite for "all")."""
    names = list(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown suite {name!r}")
    f = 1 + ctx.mp.ldexp(1, -fuzz) if fuzz else 1
    for suite in names:
        for check, fn in SUITES[suite]:
            residual, tol = fn(ctx, f)
            yield {"suite": suite, "check": check, "residual": float(residual), "tolerance": float(tol),
                   "passed": bool(residual <= tol)}
