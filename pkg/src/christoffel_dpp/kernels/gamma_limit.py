"""Gamma-function building blocks for the xi -> 1 limit of the deformed z-measure.

``h_{z,z'}(u, a) = Gamma(z'-z) / (f(u) g(a))`` factorizes into a function of
the point times a function of the index; ``h~`` denotes the same object with
``z`` and ``z'`` interchanged.  The limit kernel is assembled from the
limits of the cofactors of the bordered ``psi`` determinants: every 2x2
block ``psi_a psi_b' - psi_b psi_a'`` becomes a four-term ``W`` and every
antisymmetrized pair ``psi_a(x) psi_b(y) - psi_a(y) psi_b(x)`` a four-term
``Psi``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..christoffel import KernelHandle
from ..errors import DegenerateDeformationError
from ..specfun.gamma import digamma, gamma_fn, pochhammer
from ..specfun.precision import resolve
from .zmeasure import DEGENERATE, HalfInt, ZParams, _idx, _pos_root, psi_pair, zmeas_deformed_kernel


@dataclass(frozen=True)
class GammaDeformParams:
    zparams: ZParams
    u: object

    def __post_init__(self):
        if self.zparams.series == DEGENERATE:
            raise ValueError("the Gamma limit needs principal or complementary parameters")
        f = float(self.u)
        if 2 * f == int(2 * f) and int(2 * f) % 2:
            raise ValueError("u must not lie on Z + 1/2")


def f_fn(x, zp: ZParams, ctx=None):
    ctx = resolve(ctx)
    mp = ctx.mp
    z, zz, _ = zp.nums(ctx)
    x = ctx.num(x)
    h = mp.mpf(1) / 2
    return gamma_fn(x + zz + h, ctx) / _pos_root(ctx, gamma_fn(x + z + h, ctx) * gamma_fn(x + zz + h, ctx),
                                                 "Gamma(x+z+1/2)Gamma(x+z'+1/2)")


def f_logdx(x, zp: ZParams, ctx=None):
    """``f'(x)/f(x) = (digamma(x+z'+1/2) - digamma(x+z+1/2)) / 2``."""
    ctx = resolve(ctx)
    mp = ctx.mp
    z, zz, _ = zp.nums(ctx)
    x = ctx.num(x)
    h = mp.mpf(1) / 2
    return (digamma(x + zz + h, ctx) - digamma(x + z + h, ctx)) / 2


def g_fn(a, zp: ZParams, ctx=None):
    ctx = resolve(ctx)
    mp = ctx.mp
    z, zz, _ = zp.nums(ctx)
    a = _idx(ctx, a)
    h = mp.mpf(1) / 2
    root = _pos_root(ctx, gamma_fn(z - a + h, ctx) * gamma_fn(zz - a + h, ctx), "Gamma(z-a+1/2)Gamma(z'-a+1/2)")
    return root * gamma_fn(-z + a + h, ctx)


def h_fn(u, a, zp: ZParams, ctx=None):
    ctx = resolve(ctx)
    z, zz, _ = zp.nums(ctx)
    return gamma_fn(zz - z, ctx) / (f_fn(u, zp, ctx) * g_fn(a, zp, ctx))


def h_dx(u, a, zp: ZParams, ctx=None):
    ctx = resolve(ctx)
    return -h_fn(u, a, zp, ctx) * f_logdx(u, zp, ctx)


def phi(a, u, zp: ZParams, ctx=None):
    ctx = resolve(ctx)
    v, d = psi_pair(a, u, zp, ctx)
    return d - ctx.mp.log(ctx.num(zp.xi)) / 2 * v


def W(u, a, b, zp: ZParams, ctx=None):
    """Limit of ``(1-xi)^{-1} (psi_a psi_b' - psi_b psi_a')`` at the point ``u``."""
    ctx = resolve(ctx)
    sw = zp.swapped()
    h = lambda s, c: h_fn(u, c, s, ctx)  # noqa: E731
    hd = lambda s, c: h_dx(u, c, s, ctx)  # noqa: E731
    return (h(zp, a) * hd(sw, b) + h(sw, a) * hd(zp, b)
            - h(zp, b) * hd(sw, a) - h(sw, b) * hd(zp, a))


def Psi(x, y, a, b, zp: ZParams, ctx=None):
    """Limit of ``(1-xi)^{-1} (psi_a(x) psi_b(y) - psi_a(y) psi_b(x))``."""
    ctx = resolve(ctx)
    sw = zp.swapped()
    return (h_fn(x, a, zp, ctx) * h_fn(y, b, sw, ctx) + h_fn(x, a, sw, ctx) * h_fn(y, b, zp, ctx)
            - h_fn(x, b, zp, ctx) * h_fn(y, a, sw, ctx) - h_fn(x, b, sw, ctx) * h_fn(y, a, zp, ctx))


def Psi_gamma_only(x, y, a, b, zp: ZParams, ctx=None):
    """``Psi`` written with Gamma functions only, no ``h`` factors."""
    ctx = resolve(ctx)
    mp = ctx.mp
    z, zz, _ = zp.nums(ctx)
    x, y = ctx.num(x), ctx.num(y)
    a, b = _idx(ctx, a), _idx(ctx, b)
    hf = mp.mpf(1) / 2
    G = lambda w: gamma_fn(w, ctx)  # noqa: E731
    root = (_pos_root(ctx, G(x + z + hf) * G(x + zz + hf), "x-block") * _pos_root(ctx, G(y + z + hf) * G(y + zz + hf), "y-block")
            / (_pos_root(ctx, G(z - a + hf) * G(zz - a + hf), "a-block") * _pos_root(ctx, G(z - b + hf) * G(zz - b + hf), "b-block")))
    braces = (1 / (G(-z + a + hf) * G(-zz + b + hf) * G(x + zz + hf) * G(y + z + hf))
              + 1 / (G(-zz + a + hf) * G(-z + b + hf) * G(x + z + hf) * G(y + zz + hf))
              - 1 / (G(-zz + a + hf) * G(-z + b + hf) * G(x + zz + hf) * G(y + z + hf))
              - 1 / (G(-z + a + hf) * G(-zz + b + hf) * G(x + z + hf) * G(y + zz + hf)))
    return G(z - zz) * G(zz - z) * root * braces


def _combo_handle(gp, c0, cols0, c1, cols1, const, ctx, label, guarded=True):
    """Kernel ``const/|x-u||y-u| * sum_ij c0_i c1_j Psi(x, y; cols0_i, cols1_j) / (x - y)``.

    Because ``h(x, a)`` is a product of a point factor and an index factor the
    double sum collapses to two antisymmetrized products.
    """
    mp = ctx.mp
    zp = gp.zparams
    sw = zp.swapped()
    u = None if gp.u is None else ctx.num(gp.u)
    g0 = [(g_fn(a, zp, ctx), g_fn(a, sw, ctx)) for a in cols0]
    g1 = [(g_fn(b, zp, ctx), g_fn(b, sw, ctx)) for b in cols1]
    z, zz, _ = zp.nums(ctx)
    G1, G2 = gamma_fn(zz - z, ctx), gamma_fn(z - zz, ctx)
    S0 = G1 * mp.fsum(c / g[0] for c, g in zip(c0, g0))
    S0t = G2 * mp.fsum(c / g[1] for c, g in zip(c0, g0))
    S1 = G1 * mp.fsum(c / g[0] for c, g in zip(c1, g1))
    S1t = G2 * mp.fsum(c / g[1] for c, g in zip(c1, g1))

    def point_data(x):
        fx = f_fn(x, zp, ctx)
        ld = f_logdx(x, zp, ctx)
        p, pt = 1 / fx, fx  # point factors of h and h~
        pd, ptd = -ld / fx, ld * fx
        U, Ut, V, Vt = S0 * p, S0t * pt, S1 * p, S1t * pt
        Ud, Utd, Vd, Vtd = S0 * pd, S0t * ptd, S1 * pd, S1t * ptd
        s = mp.one if u is None else 1 / abs(x - u)
        return s, [(U, Vt, Ud, Vtd), (Ut, V, Utd, Vd)]

    prov = {"kernel": label, **zp.params(), "u": None if u is None else str(gp.u), "bits": ctx.mantissa_bits}
    guard = mp.ldexp(1, 40 - ctx.mantissa_bits) if guarded else None
    return KernelHandle(point_data, const, ctx, "Z+1/2", prov, complex_guard=guard)


def _W_minor(u, cols, zp, ctx):
    """Signed cofactors ``(-1)^i W(u; cols without i)`` of a three-column border."""
    out = []
    for i in range(3):
        rest = [c for j, c in enumerate(cols) if j != i]
        out.append((-1) ** i * W(u, rest[0], rest[1], zp, ctx))
    return out


def gamma_deformed_kernel(gp: GammaDeformParams, ctx=None):
    """Limit of ``(1-xi)^2 K^1`` as ``xi -> 1``, from the limits of the border cofactors."""
    ctx = resolve(ctx)
    mp = ctx.mp
    zp = gp.zparams
    z, zz, _ = zp.nums(ctx)
    u = ctx.num(gp.u)
    cols0 = [HalfInt(-0.5), HalfInt(-1.5), HalfInt(-2.5)]
    cols1 = [HalfInt(0.5), HalfInt(-0.5), HalfInt(-1.5)]
    WD = W(u, cols0[0], cols0[1], zp, ctx)
    if abs(WD) <= mp.ldexp(1, 16 - ctx.mantissa_bits):
        raise DegenerateDeformationError("the limit of D_1 vanishes at this u")
    c0 = _W_minor(u, cols0, zp, ctx)
    c1 = _W_minor(u, cols1, zp, ctx)
    root = _pos_root(ctx, pochhammer(z, 3, ctx) * pochhammer(zz, 3, ctx), "(z)_3 (z')_3")
    return _combo_handle(gp, c0, cols0, c1, cols1, root / WD ** 2, ctx, "gamma_deformed")


# index maps of the printed statement
_A = (-1, 0, 0)
_B = (-2, -2, -1)


def printed_Phi(u, ai, bi, zp, ctx):
    """The printed four-term ``Phi_{a,b}(u)`` transcribed literally, shifts included."""
    sw = zp.swapped()
    h = lambda s, c: h_fn(u, HalfInt(c), s, ctx)  # noqa: E731
    hd = lambda s, c: h_dx(u, HalfInt(c), s, ctx)  # noqa: E731
    return (h(zp, -0.5 + ai) * hd(sw, -0.5 + bi) + h(sw, -0.5 + ai) * hd(zp, 0.5 + bi)
            - h(zp, -0.5 + bi) * hd(sw, -0.5 + ai) - h(sw, 0.5 + bi) * hd(zp, -0.5 + ai))


def gamma_deformed_kernel_printed(gp: GammaDeformParams, ctx=None):
    """The closed form exactly as printed (constant, Phi shifts, index maps); for comparison only."""
    ctx = resolve(ctx)
    zp = gp.zparams
    z, zz, _ = zp.nums(ctx)
    u = ctx.num(gp.u)
    c0 = [printed_Phi(u, _A[i], _B[i], zp, ctx) for i in range(3)]
    c1 = [printed_Phi(u, _A[i] + 1, _B[i] + 1, zp, ctx) for i in range(3)]
    cols0 = [HalfInt(-0.5 + i) for i in range(3)]
    cols1 = [HalfInt(0.5 + j) for j in range(3)]
    const = (z + 3) * (z + 2) * (z + 1) * (zz + 2) * (zz + 1) * zz / printed_Phi(u, 0, -1, zp, ctx) ** 2
    # values may come out complex: the imaginary part is itself a diagnostic
    return _combo_handle(gp, c0, cols0, c1, cols1, const, ctx, "gamma_deformed_printed", guarded=False)


def gamma_kernel(zp: ZParams, ctx=None):
    """Undeformed limit ``sqrt(z z') Psi(x, y; -1/2, 1/2) / (x - y)``."""
    ctx = resolve(ctx)
    z, zz, _ = zp.nums(ctx)
    root = _pos_root(ctx, z * zz, "z z'")
    gp = _Undeformed(zp)
    return _combo_handle(gp, [1], [HalfInt(-0.5)], [1], [HalfInt(0.5)], root, ctx, "gamma")


@dataclass(frozen=True)
class _Undeformed:
    zparams: ZParams
    u: object = None


def psi_asymptotic_check(a, u, zp: ZParams, xi_list, ctx=None):
    """Residuals of the leading two-exponent asymptotics of ``psi_a`` and ``phi_a`` near ``xi = 1``.

    Returns rows ``(xi, res_psi, res_phi)`` and the two-point log-slopes of
    each residual against ``1 - xi``.
    """
    ctx = resolve(ctx)
    mp = ctx.mp
    rows = []
    for xi in xi_list:
        zx = ZParams(zp.z, zp.zp, xi)
        z, zz, x = zx.nums(ctx)
        e = 1 - x
        v, d = psi_pair(a, u, zx, ctx)
        ph = d - mp.log(x) / 2 * v
        sw = zx.swapped()
        p1, p2 = mp.power(e, (zz - z) / 2), mp.power(e, (z - zz) / 2)
        # the connection formula attaches h~ to (1-xi)^{(z'-z)/2} and h to the other power
        pred = h_fn(u, a, sw, ctx) * p1 + h_fn(u, a, zx, ctx) * p2
        predd = h_dx(u, a, sw, ctx) * p1 + h_dx(u, a, zx, ctx) * p2
        s = mp.power(e, -mp.mpf(1) / 2)
        rows.append((x, abs(s * v - pred), abs(s * ph - predd)))
    slopes = []
    for (x0, r0, q0), (x1, r1, q1) in zip(rows, rows[1:]):
        le = mp.log((1 - x1) / (1 - x0))
        slopes.append((mp.log(r1 / r0) / le, mp.log(q1 / q0) / le))
    return {"rows": rows, "slopes": slopes}


def scaled_deformed_zmeasure(gp: GammaDeformParams, xi, ctx=None):
    """``(1-xi)^2 K^1_{z,z',xi}`` as a kernel handle (the object whose limit is taken)."""
    ctx = resolve(ctx)
    zp = ZParams(gp.zparams.z, gp.zparams.zp, xi)
    K = zmeas_deformed_kernel(zp, [gp.u], ctx)
    K.const = K.const * (1 - ctx.num(xi)) ** 2
    K.provenance["scaled"] = "(1-xi)^2"
    return K


def unscaled_limit_estimate(gp: GammaDeformParams, points, gaps=(100, 140), ctx=None):
    """Values of the unscaled ``K^1`` at ``xi = 1 - 2^-gap`` for each gap, with their spread.

    The cofactor-limit kernel above is the limit of ``(1-xi)^2 K^1``; this
    estimates the limit of ``K^1`` itself by direct evaluation very close to
    ``xi = 1``.  The working precision must exceed the largest gap by a wide
    margin (the Gamma-type prefactors cancel across roughly ``gap`` bits).
    """
    ctx = resolve(ctx)
    mp = ctx.mp
    if ctx.mantissa_bits < 8 * max(gaps):
        raise ValueError("raise mantissa_bits to at least 8 * max(gaps)")
    runs = []
    for gap in gaps:
        xi = 1 - mp.ldexp(1, -gap)
        K = zmeas_deformed_kernel(ZParams(gp.zparams.z, gp.zparams.zp, xi), [gp.u], ctx)
        runs.append([K(x, y) for x, y in points])
    spread = max(abs(a - b) for a, b in zip(runs[0], runs[-1]))
    return runs[-1], spread
