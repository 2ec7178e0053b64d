"""Hypergeometric series in extended precision.

Parameters in the numerator list, the denominator list and the
regularized slot may be :class:`~christoffel_dpp._dual.Dual`, which gives
the derivative of the sum with respect to a parameter term by term.
"""

from __future__ import annotations

from .._dual import Dual, value
from ..errors import DivergenceError, PoleError
from .gamma import _nonpos_int, gamma_dual, gamma_fn, rgamma
from .precision import resolve

MAX_TERMS = 200_000


def _as_num(ctx, x):
    return x if isinstance(x, Dual) else ctx.num(x)


def _terminating_index(mp, params):
    """Smallest ``m`` with a plain parameter equal to ``-m``, or ``None``."""
    best = None
    for p in params:
        if isinstance(p, Dual):
            continue
        n = _nonpos_int(mp, p)
        if n is not None and (best is None or n < best):
            best = n
    return best


def _mag(mp, x):
    if isinstance(x, Dual):
        return max(abs(x.v), abs(x.d))
    return abs(x)


def _stagnated(mp, hist, tol):
    s = hist[-1]
    for prev in hist[:-1]:
        if isinstance(s, Dual):
            if abs(s.v - prev.v) > tol * abs(s.v) or abs(s.d - prev.d) > tol * abs(s.d):
                return False
        elif abs(s - prev) > tol * abs(s):
            return False
    return True


def _series(ctx, a_list, b_list, w, reg_c=None, radius_check=True):
    """Sum ``sum_n prod (a)_n / prod (b)_n * w^n / n! [* 1/Gamma(reg_c + n)]``."""
    mp = ctx.mp
    tol = ctx.eps
    for b in b_list:
        if _nonpos_int(mp, value(b)) is not None:
            raise PoleError(f"denominator parameter {value(b)} is a non-positive integer")
    stop = _terminating_index(mp, a_list)
    p, q = len(a_list), len(b_list) + (reg_c is not None)
    if stop is None and w != 0 and radius_check:
        if p > q + 1 or (p == q + 1 and abs(w) >= 1):
            raise DivergenceError(f"nonterminating {p}F{q} series diverges at |w| = {mp.nstr(abs(w), 8)}")
    params = [value(x) for x in list(a_list) + list(b_list)] + ([value(reg_c)] if reg_c is not None else [])
    n_min = int(max([abs(x) for x in params] + [0])) + 3

    coef = mp.mpf(1)  # prod (a)_n / prod (b)_n * w^n / n!
    rg = rgamma(reg_c, ctx) if reg_c is not None else None
    total = coef * rg if rg is not None else coef
    hist = [total]
    n = 0
    while True:
        if stop is not None and n >= stop:
            return total
        num = mp.mpf(1)
        for a in a_list:
            num = (a + n) * num
        den = mp.mpf(1)
        for b in b_list:
            den = (b + n) * den
        coef = coef * num / den * w / (n + 1)
        n += 1
        if rg is not None:
            cn = reg_c + n
            if mp.re(value(cn)) > 1:
                rg = rg / (cn - 1)
            else:
                rg = rgamma(cn, ctx)
            term = coef * rg
        else:
            term = coef
        total = total + term
        hist.append(total)
        if len(hist) > 3:
            hist.pop(0)
        if stop is None and n > n_min and _stagnated(mp, hist, tol):
            return total
        if n > MAX_TERMS:
            raise DivergenceError("series failed to stagnate within the term budget")


def hyp_pFq(a_list, b_list, w, ctx=None):
    """Generalized hypergeometric series by partial summation."""
    ctx = resolve(ctx)
    a_list = [_as_num(ctx, a) for a in a_list]
    b_list = [_as_num(ctx, b) for b in b_list]
    return _series(ctx, a_list, b_list, ctx.num(w))


def hyp2f1_regularized_series(a, b, c, w, ctx=None):
    """``2F1(a, b; c; w) / Gamma(c)`` by direct summation (``|w| < 1``)."""
    ctx = resolve(ctx)
    return _series(ctx, [_as_num(ctx, a), _as_num(ctx, b)], [], ctx.num(w), reg_c=_as_num(ctx, c))


PFAFF_SWITCH = 1  # |w| up to which the Pfaff image w/(w-1) stays in (0, 1/2]


def hyp2F1_neg(a, b, c, w, ctx=None, regularized: bool = False):
    """Gauss function on the negative real axis.

    Terminating series are summed directly.  Otherwise the Pfaff map
    ``w -> w/(w-1)`` is used for ``|w| <= 1`` and the connection formula
    in ``1/w`` beyond, falling back to Pfaff when ``b - a`` is an integer.
    """
    ctx = resolve(ctx)
    mp = ctx.mp
    w = ctx.num(w)
    if mp.im(w) != 0 or w > 0:
        raise ValueError("hyp2F1_neg needs a real argument w <= 0")
    a, b, c = (_as_num(ctx, x) for x in (a, b, c))
    if not regularized and _nonpos_int(mp, value(c)) is not None:
        raise PoleError("c is a non-positive integer; use regularized=True")

    def finish(reg_value):
        if regularized:
            return reg_value
        return reg_value * gamma_dual(c, ctx)

    if w == 0:
        return finish(rgamma(c, ctx))
    if _terminating_index(mp, [a, b]) is not None:
        return finish(_series(ctx, [a, b], [], w, reg_c=c))
    ba = value(b) - value(a)
    if abs(w) <= PFAFF_SWITCH or (mp.im(ba) == 0 and mp.re(ba) == mp.floor(mp.re(ba))):
        return finish(_pfaff(ctx, a, b, c, w))
    return finish(_connection(ctx, a, b, c, w))


def _pfaff(ctx, a, b, c, w):
    mp = ctx.mp
    t = w / (w - 1)
    return mp.power(1 - w, -a) * _series(ctx, [a, c - b], [], t, reg_c=c)


def _connection(ctx, a, b, c, w):
    """Regularized 2F1 through the 1/w connection formula (needs b - a not an integer)."""
    mp = ctx.mp
    iw = 1 / w
    lw = mp.log(-w)
    t1 = (gamma_fn(b - a, ctx) * mp.exp(-a * lw) * rgamma(b, ctx)) * rgamma(c - a, ctx)
    t1 = t1 * _series(ctx, [a, 1 - c + a], [1 - b + a], iw)
    t2 = (gamma_fn(a - b, ctx) * mp.exp(-b * lw) * rgamma(a, ctx)) * rgamma(c - b, ctx)
    t2 = t2 * _series(ctx, [b, 1 - c + b], [1 - a + b], iw)
    return t1 + t2
