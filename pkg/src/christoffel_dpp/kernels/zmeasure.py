"""psi_a functions on the half-integer lattice and the deformed z-measure kernel.

``psi_a(x)`` is evaluated from its Gauss-function form with the regularized
``2F1`` (so ``x + a + 1`` may be a non-positive integer), the x-derivative
by carrying a dual number through every factor, and independently from the
circular contour integral by the trapezoid rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .._dual import Dual, deriv, value
from ..christoffel import KernelHandle, cofactor_row, guarded_det
from ..errors import AdmissibilityError, BranchError, QuadratureError
from ..orthopoly import WeightFamily
from ..specfun.gamma import digamma, gamma_fn, pochhammer
from ..specfun.hypergeom import hyp2F1_neg
from ..specfun.precision import resolve

PRINCIPAL = "principal"
COMPLEMENTARY = "complementary"
DEGENERATE = "degenerate"

MAX_CONTOUR_NODES = 2**14


def _is_int(v):
    return v.imag == 0 and v.real == int(v.real)


def classify(z, zp):
    z, zp = complex(z), complex(zp)
    if z.imag != 0 or zp.imag != 0:
        if zp == z.conjugate():
            return PRINCIPAL
        raise AdmissibilityError("complex parameters must be conjugate to each other")
    for a, b in ((z, zp), (zp, z)):
        if _is_int(a) and a.real != 0:
            if (a.real > 0) == (b.real > 0) and b.real != 0 and abs(b.real) > abs(a.real) - 1:
                return DEGENERATE
    if not _is_int(z) and not _is_int(zp) and int(z.real // 1) == int(zp.real // 1):
        return COMPLEMENTARY
    raise AdmissibilityError(f"(z, z') = ({z}, {zp}) is not admissible")


@dataclass(frozen=True)
class ZParams:
    z: object
    zp: object
    xi: object

    def __post_init__(self):
        if not _in_unit_interval(self.xi):
            raise AdmissibilityError("xi must lie in (0, 1)")
        object.__setattr__(self, "series", classify(self.z, self.zp))

    def swapped(self):
        return ZParams(self.zp, self.z, self.xi)

    def nums(self, ctx):
        return _cnum(ctx, self.z), _cnum(ctx, self.zp), ctx.num(self.xi)

    def params(self):
        return {"z": str(self.z), "zp": str(self.zp), "xi": str(self.xi), "series": self.series}


def _in_unit_interval(v):
    """Exact test of ``0 < v < 1`` (``float`` would round ``1 - 1e-40`` up to 1)."""
    if hasattr(v, "_mpf_"):
        return 0 < v < 1
    return 0 < Fraction(v) < 1


def _cnum(ctx, v):
    if isinstance(v, complex):
        if v.imag == 0:
            return ctx.mp.mpf(v.real)
        return ctx.mp.mpc(v.real, v.imag)
    return ctx.num(v)


class HalfInt:
    """Element of Z + 1/2 stored through its integer floor."""

    __slots__ = ("m",)

    def __init__(self, value):
        if isinstance(value, HalfInt):
            self.m = value.m
            return
        twice = 2 * value
        if float(twice) != int(float(twice)) or int(float(twice)) % 2 == 0:
            raise ValueError(f"{value} is not a proper half-integer")
        self.m = (int(float(twice)) - 1) // 2

    @property
    def value(self):
        return self.m + 0.5

    def num(self, ctx):
        return ctx.mp.mpf(2 * self.m + 1) / 2

    def __eq__(self, other):
        return isinstance(other, HalfInt) and other.m == self.m

    def __hash__(self):
        return hash(("halfint", self.m))

    def __repr__(self):
        return f"HalfInt({self.m + 0.5})"


def _idx(ctx, a):
    return a.num(ctx) if isinstance(a, HalfInt) else HalfInt(a).num(ctx)


def _pos_root(ctx, prod, what):
    """Positive square root of a product expected to be real and positive."""
    mp = ctx.mp
    pv = value(prod)
    re, im = mp.re(pv), mp.im(pv)
    if re <= 0 or abs(im) > ctx.mp.ldexp(abs(re), 32 - ctx.mantissa_bits):
        raise BranchError(f"{what} is not positive real: {mp.nstr(pv, 8)}")
    return mp.sqrt(re)


def _gamma_sq_root(ctx, s, t, what):
    """``sqrt(Gamma(s) Gamma(t))`` taken positive; dual ``s``/``t`` give the log-derivative."""
    mp = ctx.mp
    gs, gt = gamma_fn(value(s), ctx), gamma_fn(value(t), ctx)
    root = _pos_root(ctx, gs * gt, what)
    if isinstance(s, Dual) or isinstance(t, Dual):
        dl = (digamma(value(s), ctx) * deriv(s) + digamma(value(t), ctx) * deriv(t)) / 2
        return Dual(root, root * dl)
    return root


def _psi_core(ctx, zp, a, x):
    mp = ctx.mp
    z, zz, xi = zp.nums(ctx)
    half = mp.mpf(1) / 2
    top = _gamma_sq_root(ctx, x + z + half, x + zz + half, "Gamma(x+z+1/2)Gamma(x+z'+1/2)")
    bot = _gamma_sq_root(ctx, z - a + half, zz - a + half, "Gamma(z-a+1/2)Gamma(z'-a+1/2)")
    e = (x + a) / 2
    if isinstance(e, Dual):
        p = mp.power(xi, e.v)
        pw = Dual(p, p * mp.log(xi) * e.d)
    else:
        pw = mp.power(xi, e)
    pre = mp.power(1 - xi, (z + zz) / 2 - a) / bot
    F = hyp2F1_neg(-z + a + half, -zz + a + half, x + a + 1, xi / (xi - 1), ctx, regularized=True)
    return top * pw * F * pre


def psi(a, x, zp: ZParams, ctx=None):
    """``psi_a(x; z, z', xi)`` for half-integer ``a`` and real ``x``."""
    ctx = resolve(ctx)
    return _psi_core(ctx, zp, _idx(ctx, a), _xnum(ctx, x))


def psi_dx(a, x, zp: ZParams, ctx=None):
    ctx = resolve(ctx)
    return _psi_core(ctx, zp, _idx(ctx, a), Dual(_xnum(ctx, x), 1)).d


def psi_pair(a, x, zp: ZParams, ctx=None):
    """``(psi_a(x), psi_a'(x))`` in one pass."""
    ctx = resolve(ctx)
    r = _psi_core(ctx, zp, _idx(ctx, a), Dual(_xnum(ctx, x), 1))
    return r.v, r.d


def _xnum(ctx, x):
    return x.num(ctx) if isinstance(x, HalfInt) else ctx.num(x)


def psi_integral(a, x, zp: ZParams, ctx=None, radius=1):
    """Contour-integral route for ``psi_a(x)``, ``x`` on the half-integer lattice.

    The integrand is periodic in the angle and analytic in an annulus, so the
    trapezoid rule converges geometrically; nodes double until two passes
    agree to ``tol_rel``.
    """
    ctx = resolve(ctx)
    mp = ctx.mp
    a = _idx(ctx, a)
    x = _xnum(ctx, x)
    if (x + a) != mp.floor(x + a):
        raise ValueError("contour route needs x + a to be an integer")
    z, zz, xi = zp.nums(ctx)
    rho = ctx.num(radius)
    sx = mp.sqrt(xi)
    if not sx < rho < 1 / sx:
        raise ValueError("contour radius must lie in (sqrt(xi), 1/sqrt(xi))")
    half = mp.mpf(1) / 2
    e1, e2, n = -zz + a - half, z - a - half, int(x + a)

    def g(theta):
        w = mp.mpc(rho * mp.cos(theta), rho * mp.sin(theta))
        return mp.power(1 - sx * w, e1) * mp.power(1 - sx / w, e2) * mp.power(w, -n)

    m = ctx.quad_nodes
    est = mp.fsum(g(2 * mp.pi * j / m) for j in range(m)) / m
    while True:
        if m >= MAX_CONTOUR_NODES:
            raise QuadratureError("contour trapezoid did not settle")
        mid = mp.fsum(g(2 * mp.pi * (2 * j + 1) / (2 * m)) for j in range(m)) / m
        new = (est + mid) / 2
        m *= 2
        scale = max(abs(new), mp.ldexp(1, -ctx.mantissa_bits // 2))
        if abs(new - est) <= ctx.tol_rel * scale:
            break
        est = new
    top = _gamma_sq_root(ctx, x + z + half, x + zz + half, "Gamma(x+z+1/2)Gamma(x+z'+1/2)")
    bot = _gamma_sq_root(ctx, z - a + half, zz - a + half, "Gamma(z-a+1/2)Gamma(z'-a+1/2)")
    pre = top / bot * gamma_fn(zz - a + half, ctx) / gamma_fn(zz + x + half, ctx)
    return pre * mp.power(1 - xi, (zz - z + 1) / 2) * new


def psi_meixner(a, x, zp: ZParams, ctx=None):
    """Degenerate-series ``psi_a`` through the Meixner polynomial of degree ``N - a - 1/2``.

    Includes the sign ``(-1)^n`` that the degree-``n`` Meixner form carries
    relative to the Gauss-function form.
    """
    ctx = resolve(ctx)
    mp = ctx.mp
    if zp.series != DEGENERATE:
        raise AdmissibilityError("Meixner route needs degenerate parameters")
    z, zz, xi = zp.nums(ctx)
    N = int(mp.re(z))
    beta = mp.re(zz) - N + 1
    a = _idx(ctx, a)
    n = N - a - mp.mpf(1) / 2
    xt = _xnum(ctx, x) + N - mp.mpf(1) / 2
    if n < 0 or n != int(n):
        raise ValueError("N - a - 1/2 must be a nonnegative integer")
    n = int(n)
    fam = WeightFamily.meixner(beta, xi)
    xarg = int(xt) if xt == int(xt) and xt >= 0 else xt
    return (-1) ** n * mp.sqrt(fam.weight(xarg, ctx) / fam.sq_norm(n, ctx)) * fam.eval(n, xt, ctx)


# -- kernel ------------------------------------------------------------------------

def kernel_constant(zp: ZParams, k, ctx=None):
    """Positive constant ``xi^{(2k+1)/2} (1-xi)^{-(2k+1)} sqrt((z)_{2k+1} (z')_{2k+1})``."""
    ctx = resolve(ctx)
    mp = ctx.mp
    z, zz, xi = zp.nums(ctx)
    m = 2 * k + 1
    root = _pos_root(ctx, pochhammer(z, m, ctx) * pochhammer(zz, m, ctx), "(z)_m (z')_m")
    return mp.power(xi, mp.mpf(m) / 2) * mp.power(1 - xi, -m) * root


def printed_constant(zp: ZParams, k, ctx=None):
    """The constant as printed, ``(xi/(xi-1))^{1+2k} G(z+2k+1) G(z'+2k) / (G(z) G(z'-1))``.

    Kept only so reports can show how far it is from :func:`kernel_constant`.
    """
    ctx = resolve(ctx)
    mp = ctx.mp
    z, zz, xi = zp.nums(ctx)
    return (mp.power(xi / (xi - 1), 1 + 2 * k) * gamma_fn(z + 2 * k + 1, ctx) * gamma_fn(zz + 2 * k, ctx)
            / (gamma_fn(z, ctx) * gamma_fn(zz - 1, ctx)))


def _columns(k, p, width):
    return [HalfInt(-0.5 - j + p) for j in range(width)]


def b_rows(zp, u, p, width, ctx):
    """Border rows ``psi_{a_j}(u_i)`` and ``psi'_{a_j}(u_i)`` with ``a_j = -1/2 - j + p``."""
    cols = _columns(len(u), p, width)
    pairs = [[psi_pair(a, ui, zp, ctx) for a in cols] for ui in u]
    return [[v for v, _ in row] for row in pairs] + [[d for _, d in row] for row in pairs]


def D_k(zp, u, ctx=None):
    ctx = resolve(ctx)
    if not u:
        return ctx.mp.one
    return guarded_det(b_rows(zp, u, 0, 2 * len(u), ctx), ctx, "D_k")


def _check_u(u):
    for v in u:
        f = float(v)
        if (2 * f) == int(2 * f) and int(2 * f) % 2:
            raise ValueError(f"deformation point {v} lies on Z + 1/2")
    if len(set(float(v) for v in u)) != len(u):
        raise ValueError("deformation points must be pairwise distinct")


def zmeas_deformed_kernel(zp: ZParams, u=(), ctx=None):
    """Correlation kernel on Z + 1/2 of the z-measure deformed at the points ``u``.

    The deformation factor is ``prod_{j>=1} prod_i (X_j - u_i)^2 / (1/2 - j - u_i)^2``
    with ``X_j = lambda_j - j + 1/2``, which is what makes the finite-N
    identification with the deformed Meixner ensemble exact.
    """
    ctx = resolve(ctx)
    mp = ctx.mp
    u = tuple(u)
    _check_u(u)
    k = len(u)
    us = [ctx.num(v) for v in u]
    Dk = D_k(zp, us, ctx)
    width = 2 * k + 1
    cols = [_columns(k, p, width) for p in (0, 1)]
    cof = [cofactor_row(b_rows(zp, us, p, width, ctx), ctx, f"B_{{k,{p}}}") if k else [mp.one] for p in (0, 1)]

    def point_data(x):
        B, Bd = [], []
        for p in (0, 1):
            vals = [psi_pair(a, x, zp, ctx) for a in cols[p]]
            B.append(mp.fsum(c * v for c, (v, _) in zip(cof[p], vals)))
            Bd.append(mp.fsum(c * d for c, (_, d) in zip(cof[p], vals)))
        s = mp.one
        for v in us:
            s /= abs(x - v)
        return s, [(B[0], B[1], Bd[0], Bd[1])]

    const = kernel_constant(zp, k, ctx) / Dk ** 2
    prov = {"kernel": "zmeasure_deformed", **zp.params(), "u": [str(v) for v in u], "bits": ctx.mantissa_bits}
    guard = mp.ldexp(1, 40 - ctx.mantissa_bits)
    return KernelHandle(point_data, const, ctx, "Z+1/2", prov, complex_guard=guard)
