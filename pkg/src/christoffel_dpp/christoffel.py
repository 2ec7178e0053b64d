"""Christoffel deformations of discrete orthogonal polynomial ensembles.

A deformation multiplies the weight by ``prod_i (x - u_i)^2``.  The deformed
monic polynomials are bordered determinants of the base family whose first
``2k`` rows hold values and x-derivatives at the ``u_i``; everything below
is built on the cofactors of that border, so ``D_n(x)`` and ``D_n'(x)`` are
both plain dot products with a row of base polynomials.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import DegenerateDeformationError
from .orthopoly import WeightFamily, joint_eval
from .specfun.precision import resolve

DIAG_SWITCH = 1e-8


# -- determinants ------------------------------------------------------------

def det(rows, ctx=None):
    """Determinant by Gaussian elimination with partial pivoting."""
    ctx = resolve(ctx)
    n = len(rows)
    if n == 0:
        return ctx.mp.one
    a = [list(r) for r in rows]
    sign = 1
    out = ctx.mp.one
    for c in range(n):
        p = max(range(c, n), key=lambda r: abs(a[r][c]))
        if a[p][c] == 0:
            return ctx.mp.zero
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        piv = a[c][c]
        out *= piv
        for r in range(c + 1, n):
            f = a[r][c] / piv
            if f:
                row_r, row_c = a[r], a[c]
                for j in range(c + 1, n):
                    row_r[j] -= f * row_c[j]
    return out * sign


def det_laplace(rows):
    """Cofactor expansion along the first row; test oracle for tiny sizes."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * det_laplace(minor)
    return total


def _hadamard(rows, ctx):
    mp = ctx.mp
    out = mp.one
    for r in rows:
        out *= mp.sqrt(mp.fsum(abs(v) ** 2 for v in r))
    return out


def guarded_det(rows, ctx, what):
    """Determinant that refuses to return a value indistinguishable from zero."""
    d = det(rows, ctx)
    bound = _hadamard(rows, ctx)
    if not rows:
        return d
    if bound == 0 or abs(d) <= ctx.mp.ldexp(bound, 16 - ctx.mantissa_bits):
        raise DegenerateDeformationError(f"{what} vanishes to working precision")
    return d


def cofactor_row(rows, ctx, what="bordered determinant"):
    """Cofactors of a missing last row for a ``m x (m+1)`` block of rows.

    ``det([rows; v]) == sum_i cof[i] * v[i]`` for any last row ``v``.
    """
    m = len(rows)
    cof = []
    for i in range(m + 1):
        minor = [r[:i] + r[i + 1:] for r in rows]
        cof.append((-1) ** (m + i) * det(minor, ctx))
    if m and all(c == 0 for c in cof):
        raise DegenerateDeformationError(f"{what}: all border cofactors vanish")
    return cof


# -- specs ---------------------------------------------------------------------

@dataclass(frozen=True)
class DeformationSpec:
    points: tuple = ()

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(set(float(p) for p in pts)) != len(pts):
            raise ValueError("deformation points must be pairwise distinct")

    @property
    def k(self):
        return len(self.points)

    def check_support(self):
        for u in self.points:
            f = float(u)
            if f >= 0 and f == int(f):
                raise ValueError(f"deformation point {u} lies on the support")


@dataclass(frozen=True)
class EnsembleSpec:
    family: WeightFamily
    N: int
    deform: DeformationSpec = field(default_factory=DeformationSpec)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        self.deform.check_support()


def deformed_weight(family: WeightFamily, d: DeformationSpec, x, ctx=None):
    ctx = resolve(ctx)
    w = family.weight(x, ctx)
    xv = ctx.num(x)
    for u in d.points:
        w *= (xv - ctx.num(u)) ** 2
    return w


# -- Christoffel determinants --------------------------------------------------

def border_rows(family, d: DeformationSpec, n, width, ctx=None):
    """Rows ``P_m(u_i)`` then ``P_m'(u_i)`` for ``m = n .. n+width-1``."""
    ctx = resolve(ctx)
    pairs = [joint_eval(family, range(n, n + width), u, ctx) for u in d.points]
    vals = [[p[0] for p in row] for row in pairs]
    ders = [[p[1] for p in row] for row in pairs]
    return vals + ders


def delta_det(family, d: DeformationSpec, n, ctx=None):
    ctx = resolve(ctx)
    if d.k == 0:
        return ctx.mp.one
    return guarded_det(border_rows(family, d, n, 2 * d.k, ctx), ctx, f"delta_{n}")


def big_D_cofactors(family, d: DeformationSpec, n, ctx=None):
    ctx = resolve(ctx)
    if d.k == 0:
        return [ctx.mp.one]
    return cofactor_row(border_rows(family, d, n, 2 * d.k + 1, ctx), ctx, f"D_{n}")


def _D_pair(family, cof, n, x, ctx):
    vals = joint_eval(family, range(n, n + len(cof)), x, ctx)
    mp = ctx.mp
    return (mp.fsum(c * v[0] for c, v in zip(cof, vals)),
            mp.fsum(c * v[1] for c, v in zip(cof, vals)))


def big_D_det(family, d: DeformationSpec, n, x, ctx=None):
    ctx = resolve(ctx)
    return _D_pair(family, big_D_cofactors(family, d, n, ctx), n, x, ctx)[0]


def big_D_det_dx(family, d: DeformationSpec, n, x, ctx=None):
    ctx = resolve(ctx)
    return _D_pair(family, big_D_cofactors(family, d, n, ctx), n, x, ctx)[1]


def _prod_sq(d, x, ctx):
    out = ctx.mp.one
    for u in d.points:
        out *= (x - ctx.num(u)) ** 2
    return out


def deformed_monic_coeffs(family, d: DeformationSpec, n, ctx=None):
    """Power-basis coefficients (constant first) of ``p_n^k``.

    ``D_n^k/(delta c)`` is interpolated at ``n+2k+1`` integer nodes and the
    squared factors are divided out by synthetic division.
    """
    ctx = resolve(ctx)
    mp = ctx.mp
    deg = n + 2 * d.k
    scale = delta_det(family, d, n, ctx) * family.leading_coeff(deg, ctx)
    cof = big_D_cofactors(family, d, n, ctx)
    nodes = [mp.mpf(j) for j in range(deg + 1)]
    vand = mp.matrix([[t ** e for e in range(deg + 1)] for t in nodes])
    rhs = mp.matrix([_D_pair(family, cof, n, t, ctx)[0] / scale for t in nodes])
    coeffs = list(mp.lu_solve(vand, rhs))
    for u in d.points:
        uu = ctx.num(u)
        for _ in range(2):
            # divide by (x - u), highest degree first
            hi = coeffs[::-1]
            q = [hi[0]]
            for c in hi[1:-1]:
                q.append(c + uu * q[-1])
            coeffs = q[::-1]
    return coeffs


def deformed_monic(family, d: DeformationSpec, n, x, ctx=None):
    ctx = resolve(ctx)
    mp = ctx.mp
    x = ctx.num(x)
    if any(abs(x - ctx.num(u)) < DIAG_SWITCH for u in d.points):
        coeffs = deformed_monic_coeffs(family, d, n, ctx)
        return mp.polyval(coeffs[::-1], x)
    den = _prod_sq(d, x, ctx) * delta_det(family, d, n, ctx) * family.leading_coeff(n + 2 * d.k, ctx)
    return big_D_det(family, d, n, x, ctx) / den


def deformed_norm(family, d: DeformationSpec, n, ctx=None):
    ctx = resolve(ctx)
    num = family.sq_norm(n, ctx) * delta_det(family, d, n + 1, ctx)
    den = delta_det(family, d, n, ctx) * family.leading_coeff(n + 2 * d.k, ctx) * family.leading_coeff(n, ctx)
    return num / den


# -- kernels ---------------------------------------------------------------------

class KernelHandle:
    """Integrable kernel ``c s(x) s(y) sum_p (f_p(x) g_p(y) - f_p(y) g_p(x)) / (x - y)``.

    ``point_data(x)`` returns ``(s, [(f, g, f', g'), ...])``.  The diagonal is
    the L'Hospital form ``c s(x)^2 sum_p (f_p' g_p - f_p g_p')``.  Point data
    is memoized; the memo only ever gains identical entries, so concurrent
    readers are safe.
    """

    def __init__(self, point_data, const, ctx, carrier, provenance, complex_guard=None):
        self._point_data = point_data
        self.const = const
        self.ctx = ctx
        self.carrier = carrier
        self.provenance = dict(provenance)
        self._complex_guard = complex_guard
        self._memo = {}

    def data(self, x):
        key = self.ctx.num(x)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._point_data(key)
            self._memo[key] = hit
        return hit

    def _real(self, v):
        if self._complex_guard is None:
            return v
        mp = self.ctx.mp
        v = mp.mpc(v)
        if abs(v.imag) > self._complex_guard * max(1, abs(v.real)):
            from .errors import BranchError
            raise BranchError(f"kernel value has imaginary residue {mp.nstr(v.imag, 5)}")
        return v.real

    def diag(self, x):
        s, parts = self.data(x)
        mp = self.ctx.mp
        acc = mp.fsum(fd * g - f * gd for f, g, fd, gd in parts)
        return self._real(self.const * s * s * acc)

    def __call__(self, x, y):
        mp = self.ctx.mp
        xv, yv = self.ctx.num(x), self.ctx.num(y)
        if xv == yv or abs(xv - yv) < DIAG_SWITCH:
            return self.diag(x)
        sx, px = self.data(xv)
        sy, py = self.data(yv)
        acc = mp.fsum(fx * gy - fy * gx for (fx, gx, _, _), (fy, gy, _, _) in zip(px, py))
        return self._real(self.const * sx * sy * acc / (xv - yv))

    def matrix(self, points):
        return [[self(x, y) for y in points] for x in points]

    def minor(self, points):
        return det(self.matrix(points), self.ctx)


def _k_scale(spec, ctx):
    fam, N, d = spec.family, spec.N, spec.deform
    k = d.k
    return fam.leading_coeff(N - 1, ctx) / (fam.sq_norm(N - 1, ctx) * fam.leading_coeff(N + 2 * k, ctx))


def deformed_kernel(spec: EnsembleSpec, ctx=None):
    """Finite-N kernel of the deformed ensemble in bordered-determinant form."""
    ctx = resolve(ctx)
    mp = ctx.mp
    fam, N, d = spec.family, spec.N, spec.deform
    delta = delta_det(fam, d, N, ctx)
    cof_n = big_D_cofactors(fam, d, N, ctx)
    cof_m = big_D_cofactors(fam, d, N - 1, ctx)
    const = _k_scale(spec, ctx) / delta ** 2

    def point_data(x):
        dn, dn1 = _D_pair(fam, cof_n, N, x, ctx)
        dm, dm1 = _D_pair(fam, cof_m, N - 1, x, ctx)
        s = mp.sqrt(fam.weight(int(x) if x == int(x) and x >= 0 else x, ctx)) / mp.sqrt(_prod_sq(d, x, ctx))
        return s, [(dn, dm, dn1, dm1)]

    prov = {"kernel": "christoffel_deformed", "family": fam.params(), "N": N,
            "u": [str(u) for u in d.points], "bits": ctx.mantissa_bits}
    return KernelHandle(point_data, const, ctx, "N", prov)


def ope_kernel(spec: EnsembleSpec, ctx=None):
    """Christoffel-Darboux kernel of the undeformed ensemble."""
    if spec.deform.k:
        raise ValueError("ope_kernel needs an undeformed spec")
    ctx = resolve(ctx)
    mp = ctx.mp
    fam, N = spec.family, spec.N
    const = _k_scale(spec, ctx)

    def point_data(x):
        (pn, dpn), (pm, dpm) = joint_eval(fam, [N, N - 1], x, ctx)
        s = mp.sqrt(fam.weight(int(x) if x == int(x) and x >= 0 else x, ctx))
        return s, [(pn, pm, dpn, dpm)]

    prov = {"kernel": "ope", "family": fam.params(), "N": N, "bits": ctx.mantissa_bits}
    return KernelHandle(point_data, const, ctx, "N", prov)


def sum_form_kernel(spec: EnsembleSpec, ctx=None):
    """``sqrt(w^k(x) w^k(y)) sum_{n<N} p_n^k(x) p_n^k(y) / h_n^k`` as a plain function."""
    ctx = resolve(ctx)
    mp = ctx.mp
    fam, N, d = spec.family, spec.N, spec.deform
    norms = [deformed_norm(fam, d, n, ctx) for n in range(N)]

    def K(x, y):
        wx = deformed_weight(fam, d, x, ctx)
        wy = deformed_weight(fam, d, y, ctx)
        acc = mp.fsum(deformed_monic(fam, d, n, x, ctx) * deformed_monic(fam, d, n, y, ctx) / norms[n]
                      for n in range(N))
        return mp.sqrt(wx * wy) * acc

    return K


def support_cutoff(spec: EnsembleSpec, ctx=None):
    """Truncation point for sums over the support of the deformed ensemble."""
    ctx = resolve(ctx)
    shift = max([0.0] + [float(u) for u in spec.deform.points])
    return spec.family.support_cutoff(ctx.mantissa_bits, degree=spec.N + 2 * spec.deform.k, shift=shift)


def ensemble_pair_probability(spec: EnsembleSpec, x1, x2, ctx=None):
    """N=2 probability of ``{x1, x2}`` by direct summation of the squared Vandermonde."""
    if spec.N != 2:
        raise ValueError("pair probability oracle is for N = 2")
    ctx = resolve(ctx)
    mp = ctx.mp
    X = support_cutoff(spec, ctx)
    w = [deformed_weight(spec.family, spec.deform, t, ctx) for t in range(X)]
    Z = mp.fsum((s - t) ** 2 * w[s] * w[t] for s, t in itertools.combinations(range(X), 2))
    return (x1 - x2) ** 2 * w[x1] * w[x2] / Z
