"""Pochhammer symbols and Gamma-family functions."""

from __future__ import annotations

import math

from .._dual import Dual
from ..errors import PoleError
from .precision import resolve


def _nonpos_int(mp, w):
    """Return ``n`` when ``w == -n`` for a natural ``n``, else ``None``."""
    if mp.im(w) != 0:
        return None
    r = mp.re(w)
    if r <= 0 and r == mp.floor(r):
        return int(-r)
    return None


def pochhammer(a, n: int, ctx=None):
    """Rising factorial ``a (a+1) ... (a+n-1)`` by direct product."""
    if n < 0:
        raise ValueError("n must be a natural number")
    ctx = resolve(ctx)
    a = ctx.num(a) if not isinstance(a, Dual) else a
    out = ctx.mp.mpf(1)
    for j in range(n):
        out = (a + j) * out
    return out


def _parts(lam):
    parts = tuple(getattr(lam, "parts", lam))
    if any(p <= 0 for p in parts) or any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise ValueError(f"not a partition: {parts}")
    return parts


def gen_pochhammer(a, lam, ctx=None, route: str = "box"):
    """Generalized Pochhammer symbol over the boxes of a partition.

    ``route="box"`` multiplies ``a - i + j`` over boxes ``(i, j)``;
    ``route="row"`` multiplies ordinary Pochhammer symbols row by row.
    """
    ctx = resolve(ctx)
    parts = _parts(lam)
    a = ctx.num(a)
    out = ctx.mp.mpf(1)
    if route == "box":
        for i, li in enumerate(parts, start=1):
            for j in range(1, li + 1):
                out *= a - i + j
    elif route == "row":
        for i, li in enumerate(parts, start=1):
            out *= pochhammer(a - i + 1, li, ctx)
    else:
        raise ValueError(f"unknown route {route!r}")
    return out


def gamma_fn(w, ctx=None):
    ctx = resolve(ctx)
    mp = ctx.mp
    w = ctx.num(w)
    if _nonpos_int(mp, w) is not None:
        raise PoleError(f"Gamma has a pole at {w}")
    return mp.gamma(w)


def log_gamma(w, ctx=None):
    ctx = resolve(ctx)
    mp = ctx.mp
    w = ctx.num(w)
    if _nonpos_int(mp, w) is not None:
        raise PoleError(f"log Gamma has a pole at {w}")
    return mp.loggamma(w)


def rgamma(w, ctx=None):
    """``1/Gamma(w)``, entire; exactly zero at the poles of Gamma."""
    ctx = resolve(ctx)
    mp = ctx.mp
    if isinstance(w, Dual):
        n = _nonpos_int(mp, w.v)
        if n is not None:
            # d/dw 1/Gamma(w) at w = -n equals (-1)^n n!
            return Dual(mp.mpf(0), (-1) ** n * mp.factorial(n) * w.d)
        r = mp.rgamma(w.v)
        return Dual(r, -digamma(w.v, ctx) * r * w.d)
    return mp.rgamma(ctx.num(w))


def gamma_dual(w, ctx=None):
    """Gamma over plain scalars and duals."""
    ctx = resolve(ctx)
    if isinstance(w, Dual):
        g = gamma_fn(w.v, ctx)
        return Dual(g, g * digamma(w.v, ctx) * w.d)
    return gamma_fn(w, ctx)


def _asymptotic_threshold(bits: int) -> float:
    # smallest asymptotic term ~ exp(-2 pi |w|); push it below 2^-bits
    return bits * math.log(2) / (2 * math.pi) + 6


def digamma(w, ctx=None):
    """Digamma by reflection, upward recurrence and the Stirling-type series."""
    ctx = resolve(ctx)
    mp = ctx.mp
    w = ctx.num(w)
    if _nonpos_int(mp, w) is not None:
        raise PoleError(f"digamma has a pole at {w}")
    if mp.re(w) < 0.5:
        return digamma(1 - w, ctx) - mp.pi / mp.tan(mp.pi * w)
    shift = mp.mpf(0)
    big = _asymptotic_threshold(mp.prec)
    while mp.re(w) <= big:
        shift += 1 / w
        w = w + 1
    w2 = 1 / (w * w)
    out = mp.log(w) - 1 / (2 * w)
    wpow = w2
    k = 1
    eps = mp.ldexp(1, -mp.prec)
    while True:
        term = mp.bernoulli(2 * k) / (2 * k) * wpow
        out -= term
        if abs(term) < eps * abs(out):
            break
        k += 1
        wpow *= w2
        if k > 4 * mp.prec:
            break
    return out - shift
