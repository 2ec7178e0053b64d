"""Real-order Bessel functions ``J_x(2 sqrt(alpha))`` and their order derivative.

The primary route is the pair of contour integrals obtained from the
generating Laurent series: a periodic angular integral on ``|z| = r`` and
a radial integral over ``(0, r]`` that only contributes for non-integer
order.  The ascending series in the order is kept as an independent
oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .._dual import Dual
from ..errors import QuadratureError
from .gamma import rgamma
from .precision import get_context, resolve

MAX_TRAPEZOID_NODES = 2**16


@dataclass(frozen=True)
class BesselParams:
    alpha: object
    r: object = 1

    def __post_init__(self):
        if float(self.alpha) <= 0:
            raise ValueError("alpha must be positive")
        if float(self.r) <= 0:
            raise ValueError("contour radius r must be positive")


def _is_integer(mp, x):
    return x == mp.floor(x)


def _angular_parts(mp, x, sa, r):
    """Return functions giving the real and imaginary parts of the angular integrand."""
    amp = sa * (1 / r - r)
    freq = sa * (1 / r + r)
    rx = mp.power(r, x)

    def re_part(t):
        return mp.exp(amp * mp.cos(t)) * rx * mp.cos(x * t - freq * mp.sin(t))

    def im_part(t):
        return mp.exp(amp * mp.cos(t)) * rx * mp.sin(x * t - freq * mp.sin(t))

    scale = mp.exp(abs(amp)) * rx
    return re_part, im_part, scale, freq


def _trapezoid_periodic(ctx, f, scale):
    """Mean of ``f`` over one period by the doubling trapezoid rule."""
    mp = ctx.mp
    m = ctx.quad_nodes
    h = 2 * mp.pi / m
    est = mp.fsum(f(j * h) for j in range(m)) / m
    tol = ctx.tol_rel * scale
    while m < MAX_TRAPEZOID_NODES:
        h = 2 * mp.pi / (2 * m)
        mid = mp.fsum(f((2 * j + 1) * h) for j in range(m)) / m
        new = (est + mid) / 2
        m *= 2
        if abs(new - est) <= tol:
            return new
        est = new
    raise QuadratureError(f"trapezoid rule did not settle within {MAX_TRAPEZOID_NODES} nodes")


def _gauss_legendre(ctx, f, a, b, pieces, scale):
    mp = ctx.mp
    pts = [a + (b - a) * mp.mpf(i) / pieces for i in range(pieces + 1)]
    val, err = mp.quad(f, pts, method="gauss-legendre", error=True)
    if err > ctx.tol_rel * scale:
        raise QuadratureError(f"Gauss-Legendre error estimate {mp.nstr(err, 5)} exceeds tolerance")
    return val


def _angular_pieces(x, freq):
    return max(2, int(math.ceil((abs(float(x)) + 2 * float(freq)) / 6.0)))


def _radial_window(ctx, x, sa, r):
    """Interval ``[t0, T]`` in ``t = -log s`` carrying the radial integrand, and its peak."""
    mp = ctx.mp
    t0 = -mp.log(r)

    def phi(t):
        return sa * (mp.exp(-t) - mp.exp(t)) - x * t

    # interior maximum where cosh t = -x / (2 sa)
    tpk = t0
    if x < 0 and -x / (2 * sa) > 1:
        tpk = max(t0, mp.acosh(-x / (2 * sa)))
    peak = phi(tpk)
    drop = (mp.prec + 16) * mp.ln2
    t = tpk + 0.5
    while phi(t) > peak - drop - mp.log(2 + abs(t)):
        t += 0.5
    return t0, t, peak


def _radial(ctx, x, sa, r, log_weight=False):
    """``int_0^r exp(sa (s - 1/s)) s^x [log s] ds/s`` after ``s = exp(-t)``.

    The integrand is divided by its peak value before quadrature (the rule's
    stopping test is absolute) and the factor restored afterwards.
    """
    mp = ctx.mp
    t0, t1, peak = _radial_window(ctx, x, sa, r)

    if log_weight:
        def f(t):
            return -t * mp.exp(sa * (mp.exp(-t) - mp.exp(t)) - x * t - peak)
    else:
        def f(t):
            return mp.exp(sa * (mp.exp(-t) - mp.exp(t)) - x * t - peak)

    # the log-integrand has curvature of order |x| + 2 sa at its peak; keep each piece
    # narrower than a couple of widths so low-degree rules suffice
    per_unit = max(1, math.sqrt(abs(float(x)) + 2 * float(sa)) / 2)
    pieces = max(2, int(mp.ceil((t1 - t0) * per_unit)))
    scale = (1 + abs(t1)) if log_weight else mp.one
    return mp.exp(peak) * _gauss_legendre(ctx, f, t0, t1, pieces, scale)


def _lift(ctx, x, p, derivative=False):
    """Context whose absolute quadrature floor sits below ``|J_x|``.

    The contour pair is accurate relative to the integrand scale, while
    ``J_x(2 sqrt(alpha))`` decays like ``alpha^{|x|/2} / |x|!``; the gap is
    added to the working precision (rounded up to keep contexts shared).
    """
    ax = abs(float(x))
    sa = math.sqrt(float(p.alpha))
    if derivative and float(x) < 0:
        # the order derivative grows like |x|! on the negative side
        return ctx
    r = float(p.r)
    log_scale = sa * abs(1 / r - r) + float(x) * math.log(r)
    log_size = ax * math.log(sa) - math.lgamma(ax + 1) if ax > 2 * sa else 0.0
    gap = (log_scale - log_size) / math.log(2)
    if gap <= 8:
        return ctx
    bits = ctx.mantissa_bits + 64 * math.ceil((gap + 16) / 64)
    return get_context(bits, ctx.quad_nodes)


def bessel_J(x, p: BesselParams, ctx=None):
    """``J_x(2 sqrt(alpha))`` for real order ``x`` from the contour pair."""
    ctx = resolve(ctx)
    x = ctx.num(x)
    work = _lift(ctx, x, p)
    return ctx.mp.convert(_J(work.num(x), p, work))


def _J(x, p, ctx):
    mp = ctx.mp
    sa = mp.sqrt(ctx.num(p.alpha))
    r = ctx.num(p.r)
    re_part, _, scale, freq = _angular_parts(mp, x, sa, r)
    if _is_integer(mp, x):
        return _trapezoid_periodic(ctx, re_part, scale)
    ang = _gauss_legendre(ctx, re_part, mp.zero, mp.pi, _angular_pieces(x, freq), scale) / mp.pi
    return ang - mp.sinpi(x) / mp.pi * _radial(ctx, x, sa, r)


def bessel_L(x, p: BesselParams, ctx=None):
    """Order derivative ``d/dx J_x(2 sqrt(alpha))`` from the differentiated contour pair."""
    ctx = resolve(ctx)
    x = ctx.num(x)
    work = _lift(ctx, x, p, derivative=True)
    return ctx.mp.convert(_L(work.num(x), p, work))


def _L(x, p, ctx):
    mp = ctx.mp
    sa = mp.sqrt(ctx.num(p.alpha))
    r = ctx.num(p.r)
    re_part, im_part, scale, freq = _angular_parts(mp, x, sa, r)
    pieces = _angular_pieces(x, freq)
    # log(r e^{i t}) = log r + i t; the i t factor pairs with the imaginary part
    ang = _gauss_legendre(ctx, lambda t: -t * im_part(t), mp.zero, mp.pi, pieces, scale * mp.pi) / mp.pi
    if r != 1:
        ang += mp.log(r) * _gauss_legendre(ctx, re_part, mp.zero, mp.pi, pieces, scale) / mp.pi
    out = ang - mp.cospi(x) * _radial(ctx, x, sa, r)
    if not _is_integer(mp, x):
        out -= mp.sinpi(x) / mp.pi * _radial(ctx, x, sa, r, log_weight=True)
    return out


def bessel_J_series(x, alpha, ctx=None):
    """Ascending series ``sum_m (-1)^m alpha^{m + x/2} / (m! Gamma(m + x + 1))``.

    Accepts a dual order, in which case the order derivative comes along.
    """
    ctx = resolve(ctx)
    mp = ctx.mp
    xv = x.v if isinstance(x, Dual) else ctx.num(x)
    if not isinstance(x, Dual):
        x = xv
    lsa = mp.log(ctx.num(alpha)) / 2
    total = mp.mpf(0)
    m = 0
    small = 0
    while True:
        e = (2 * m + x) * lsa
        pw = Dual(mp.exp(e.v), mp.exp(e.v) * e.d) if isinstance(e, Dual) else mp.exp(e)
        term = rgamma(m + x + 1, ctx) * pw * ((-1) ** m / mp.factorial(m))
        total = total + term
        tv = abs(term.v) + abs(term.d) if isinstance(term, Dual) else abs(term)
        ref = abs(total.v) + abs(total.d) if isinstance(total, Dual) else abs(total)
        if m > abs(xv) + 2 and tv <= ctx.eps * ref:
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
        m += 1


def bessel_L_series(x, alpha, ctx=None):
    ctx = resolve(ctx)
    return bessel_J_series(Dual(ctx.num(x), 1), alpha, ctx).d
