"""Discrete Bessel kernel and its Wronskian-type Christoffel deformation on Z."""

from __future__ import annotations

from ..christoffel import KernelHandle, cofactor_row, guarded_det
from ..errors import DegenerateDeformationError
from ..specfun.bessel import BesselParams, bessel_J, bessel_L
from ..specfun.precision import resolve


class BesselTable:
    """Memo of ``J_x(2 sqrt(alpha))`` and ``L_x(2 sqrt(alpha))`` keyed by exact order."""

    def __init__(self, alpha, ctx, r=1):
        self.ctx = ctx
        self.params = BesselParams(alpha, r)
        self._J = {}
        self._L = {}

    def J(self, x):
        key = self.ctx.num(x)
        if key not in self._J:
            self._J[key] = bessel_J(key, self.params, self.ctx)
        return self._J[key]

    def L(self, x):
        key = self.ctx.num(x)
        if key not in self._L:
            self._L[key] = bessel_L(key, self.params, self.ctx)
        return self._L[key]


def discrete_bessel_kernel(alpha, ctx=None, table=None):
    ctx = resolve(ctx)
    mp = ctx.mp
    tab = table or BesselTable(alpha, ctx)

    def point_data(x):
        return mp.one, [(tab.J(x), tab.J(x + 1), tab.L(x), tab.L(x + 1))]

    prov = {"kernel": "discrete_bessel", "alpha": str(alpha), "bits": ctx.mantissa_bits}
    return KernelHandle(point_data, mp.sqrt(ctx.num(alpha)), ctx, "Z", prov)


def _wronskian_rows(tab, utilde, width, p, ctx):
    us = [ctx.num(u) for u in utilde]
    vals = [[tab.J(u - j + p) for j in range(width)] for u in us]
    ders = [[tab.L(u - j + p) for j in range(width)] for u in us]
    return vals + ders


def bessel_C(alpha, utilde, ctx=None, table=None):
    """The ``2k x 2k`` determinant of J and L entries at the deformation points."""
    ctx = resolve(ctx)
    tab = table or BesselTable(alpha, ctx)
    k = len(utilde)
    if k == 0:
        return ctx.mp.one
    return guarded_det(_wronskian_rows(tab, utilde, 2 * k, 0, ctx), ctx, "C_k")


def deformed_bessel_kernel(alpha, utilde, ctx=None, table=None):
    """Limit kernel of the deformed Charlier ensembles in the Poisson regime.

    ``A_{k,p}(x)`` is expanded along its last row, so ``A_{k,p}(x)`` and its
    x-derivative are dot products of fixed cofactors with ``J_{x-j+p}`` and
    ``L_{x-j+p}``.
    """
    ctx = resolve(ctx)
    mp = ctx.mp
    utilde = tuple(utilde)
    for u in utilde:
        if float(u) == int(float(u)):
            raise ValueError("deformation points must be non-integers")
    if len(set(float(u) for u in utilde)) != len(utilde):
        raise ValueError("deformation points must be pairwise distinct")
    tab = table or BesselTable(alpha, ctx)
    k = len(utilde)
    try:
        C = bessel_C(alpha, utilde, ctx, tab)
    except DegenerateDeformationError as exc:
        raise DegenerateDeformationError(f"C_k vanishes for u={utilde}") from exc
    width = 2 * k + 1
    cof = [cofactor_row(_wronskian_rows(tab, utilde, width, p, ctx), ctx, f"A_{{k,{p}}}") if k else [mp.one]
           for p in (0, 1)]
    us = [ctx.num(u) for u in utilde]

    def point_data(x):
        A = [mp.fsum(c * tab.J(x - j + p) for j, c in enumerate(cof[p])) for p in (0, 1)]
        Ad = [mp.fsum(c * tab.L(x - j + p) for j, c in enumerate(cof[p])) for p in (0, 1)]
        s = mp.one
        for u in us:
            s /= abs(x - u)
        return s, [(A[0], A[1], Ad[0], Ad[1])]

    const = mp.power(ctx.num(alpha), mp.mpf(2 * k + 1) / 2) / C ** 2
    prov = {"kernel": "deformed_bessel", "alpha": str(alpha), "utilde": [str(u) for u in utilde],
            "bits": ctx.mantissa_bits}
    return KernelHandle(point_data, const, ctx, "Z", prov)
