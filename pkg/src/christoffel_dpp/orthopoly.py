"""Charlier and Meixner families on the nonnegative integers.

Charlier polynomials are normalized as ``a^{n/2}/sqrt(n!) 2F0(-n,-x;;-1/a)``
against the Poisson weight; Meixner polynomials are ``2F1(-n,-x;beta;1-1/xi)``
against the negative-binomial weight.  Every evaluator accepts a
:class:`~christoffel_dpp._dual.Dual` abscissa, so x-derivatives come from
the product rule over the linear factors of ``(-x)_j`` and stay exact at
integer points.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from ._dual import Dual, deriv, value
from .specfun.gamma import pochhammer
from .specfun.precision import resolve

DIRECT_MAX_DEGREE = 30
MAX_EXTRA_BITS = 1 << 14

CHARLIER = "charlier"
MEIXNER = "meixner"


@dataclass(frozen=True)
class WeightFamily:
    kind: str
    a: object = None
    beta: object = None
    xi: object = None

    def __post_init__(self):
        if self.kind == CHARLIER:
            if self.a is None or float(self.a) <= 0:
                raise ValueError("Charlier rate a must be positive")
        elif self.kind == MEIXNER:
            if self.beta is None or float(self.beta) <= 0:
                raise ValueError("Meixner beta must be positive")
            if self.xi is None or not 0 < float(self.xi) < 1:
                raise ValueError("Meixner xi must lie in (0, 1)")
        else:
            raise ValueError(f"unknown weight family {self.kind!r}")

    @classmethod
    def charlier(cls, a):
        return cls(CHARLIER, a=a)

    @classmethod
    def meixner(cls, beta, xi):
        return cls(MEIXNER, beta=beta, xi=xi)

    def params(self):
        if self.kind == CHARLIER:
            return {"kind": self.kind, "a": str(self.a)}
        return {"kind": self.kind, "beta": str(self.beta), "xi": str(self.xi)}

    # -- weights -------------------------------------------------------------

    def log_weight(self, x, ctx=None):
        """Natural log of the weight; real ``x`` allowed through the Gamma function."""
        ctx = resolve(ctx)
        mp = ctx.mp
        x = ctx.num(x)
        if self.kind == CHARLIER:
            a = ctx.num(self.a)
            return -a + x * mp.log(a) - mp.loggamma(x + 1)
        beta, xi = ctx.num(self.beta), ctx.num(self.xi)
        return mp.loggamma(beta + x) - mp.loggamma(beta) + x * mp.log(xi) - mp.loggamma(x + 1)

    def weight(self, x, ctx=None):
        ctx = resolve(ctx)
        mp = ctx.mp
        if isinstance(x, int) and x >= 0:
            if self.kind == CHARLIER:
                a = ctx.num(self.a)
                return mp.exp(-a) * mp.power(a, x) / mp.factorial(x)
            beta, xi = ctx.num(self.beta), ctx.num(self.xi)
            return pochhammer(beta, x, ctx) * mp.power(xi, x) / mp.factorial(x)
        return mp.exp(self.log_weight(x, ctx))

    def _log_weight_float(self, x):
        if self.kind == CHARLIER:
            a = float(self.a)
            return -a + x * math.log(a) - math.lgamma(x + 1)
        beta, xi = float(self.beta), float(self.xi)
        return math.lgamma(beta + x) - math.lgamma(beta) + x * math.log(xi) - math.lgamma(x + 1)

    def support_cutoff(self, bits, degree=0, shift=0.0):
        """Smallest X beyond which ``w(x) (1+|x-shift|)^(2 degree)`` sums to below ``2^-bits``.

        The summand is required to shrink by at least half per step from X on,
        so the discarded tail is bounded by twice its first term.
        """
        target = -(bits + 8) * math.log(2.0)

        def lt(x):
            return self._log_weight_float(x) + 2 * degree * math.log1p(abs(x - shift))

        x = 0
        while True:
            cur, nxt = lt(x), lt(x + 1)
            if cur < target and nxt - cur < -math.log(2.0):
                return x
            x += 1

    # -- polynomial metadata -------------------------------------------------

    def leading_coeff(self, n, ctx=None):
        ctx = resolve(ctx)
        mp = ctx.mp
        if self.kind == CHARLIER:
            a = ctx.num(self.a)
            return (-1) ** n * mp.power(a, -mp.mpf(n) / 2) / mp.sqrt(mp.factorial(n))
        beta, xi = ctx.num(self.beta), ctx.num(self.xi)
        return mp.power(1 - 1 / xi, n) / pochhammer(beta, n, ctx)

    def sq_norm(self, n, ctx=None):
        """Squared norm ``h_n``: closed form for Meixner, measured for Charlier."""
        ctx = resolve(ctx)
        if self.kind == CHARLIER:
            return measured_sq_norm(self, n, ctx)
        mp = ctx.mp
        beta, xi = ctx.num(self.beta), ctx.num(self.xi)
        return mp.factorial(n) / (mp.power(xi, n) * mp.power(1 - xi, beta) * pochhammer(beta, n, ctx))

    # -- evaluation ----------------------------------------------------------

    def eval(self, n, x, ctx=None):
        if self.kind == CHARLIER:
            return charlier_eval(n, x, self.a, ctx)
        return meixner_eval(n, x, self.beta, self.xi, ctx)

    def eval_dx(self, n, x, ctx=None):
        if self.kind == CHARLIER:
            return charlier_eval_dx(n, x, self.a, ctx)
        return meixner_eval_dx(n, x, self.beta, self.xi, ctx)


def weight_at(family: WeightFamily, x, ctx=None):
    return family.weight(x, ctx)


def _coerce_x(ctx, x):
    if isinstance(x, Dual):
        return Dual(ctx.num(x.v), ctx.num(x.d) if not isinstance(x.d, int) else x.d)
    return ctx.num(x)


def _terminating_sum(ctx, n, x, w, beta=None):
    """``sum_j (-n)_j (-x)_j w^j / (j! [(beta)_j])`` accumulated term by term."""
    total = 1
    term = 1
    for j in range(1, n + 1):
        fac = (-n + j - 1) * w / j
        if beta is not None:
            fac = fac / (beta + j - 1)
        term = term * ((j - 1) - x) * fac
        total = total + term
    return total


def _charlier_direct(ctx, n, x, a):
    mp = ctx.mp
    s = _terminating_sum(ctx, n, x, -1 / a)
    return s * (mp.power(a, mp.mpf(n) / 2) / mp.sqrt(mp.factorial(n)))


def _charlier_recurrence(ctx, n, x, a):
    """Normalized three-term recurrence, returns ``[P_0 .. P_n]``."""
    mp = ctx.mp
    out = [mp.one]
    if n == 0:
        return out
    out.append((a - x) / mp.sqrt(a))
    for m in range(1, n):
        nxt = ((m + a - x) * out[m] - mp.sqrt(a * m) * out[m - 1]) / mp.sqrt(a * (m + 1))
        out.append(nxt)
    return out


def _meixner_recurrence(ctx, n, x, beta, xi):
    out = [ctx.mp.one]
    if n == 0:
        return out
    out.append(1 + x * (xi - 1) / (xi * beta))
    for m in range(1, n):
        nxt = ((xi - 1) * x * out[m] + (m + (m + beta) * xi) * out[m] - m * out[m - 1]) / (xi * (m + beta))
        out.append(nxt)
    return out


def _magnitude(v):
    if isinstance(v, Dual):
        return abs(v.v) + abs(v.d)
    return abs(v)


def _guarded(ctx, compute):
    """Run ``compute`` at two working precisions until they agree to ``tol_rel``.

    Both the coefficient sum and the recurrence can cancel catastrophically
    (deep inside the region where the weighted polynomial is tiny); the
    disagreement between the two runs measures the loss and sets the boost.
    """
    mp = ctx.mp
    base = mp.prec
    extra = 0
    while True:
        with mp.workprec(base + extra):
            lo = compute()
        with mp.workprec(base + extra + 64):
            hi = compute()
        worst = 0
        for u, w in zip(lo, hi):
            scale = _magnitude(w)
            err = _magnitude(u - w)
            if err > ctx.tol_rel * scale:
                worst = max(worst, int(mp.log(err / scale, 2)) + ctx.mantissa_bits) if scale else 64
        if worst == 0:
            return [w * mp.one if not isinstance(w, Dual) else Dual(w.v * mp.one, w.d * mp.one) for w in hi]
        if extra > MAX_EXTRA_BITS:
            raise ArithmeticError("polynomial evaluation lost all precision")
        extra += worst + 64


def _family_seq(ctx, family, top, x):
    if family.kind == CHARLIER:
        return _charlier_recurrence(ctx, top, x, ctx.num(family.a))
    return _meixner_recurrence(ctx, top, x, ctx.num(family.beta), ctx.num(family.xi))


def _family_direct(ctx, family, n, x):
    if family.kind == CHARLIER:
        return _charlier_direct(ctx, n, x, ctx.num(family.a))
    return _terminating_sum(ctx, n, x, 1 - 1 / ctx.num(family.xi), ctx.num(family.beta))


def _eval(family, n, x, ctx, route=None):
    ctx = resolve(ctx)
    x = _coerce_x(ctx, x)
    if route is None:
        route = "direct" if n <= DIRECT_MAX_DEGREE else "recurrence"
    if route == "direct":
        return _guarded(ctx, lambda: [_family_direct(ctx, family, n, x)])[0]
    return _guarded(ctx, lambda: [_family_seq(ctx, family, n, x)[n]])[0]


def charlier_eval(n, x, a, ctx=None, route=None):
    """Normalized Charlier polynomial; ``route`` forces "direct" or "recurrence"."""
    return _eval(WeightFamily.charlier(a), n, x, ctx, route)


def charlier_eval_dx(n, x, a, ctx=None, route=None):
    ctx = resolve(ctx)
    return deriv(charlier_eval(n, Dual(ctx.num(x), 1), a, ctx, route))


def meixner_eval(n, x, beta, xi, ctx=None, route=None):
    return _eval(WeightFamily.meixner(beta, xi), n, x, ctx, route)


def meixner_eval_dx(n, x, beta, xi, ctx=None, route=None):
    ctx = resolve(ctx)
    return deriv(meixner_eval(n, Dual(ctx.num(x), 1), beta, xi, ctx, route))


def joint_eval(family: WeightFamily, n_range, x, ctx=None):
    """``[(P_m(x), P_m'(x)) for m in n_range]``.

    Low degrees use the terminating sums; once the range reaches past
    ``DIRECT_MAX_DEGREE`` the differentiated recurrence is run once from 0.
    """
    ctx = resolve(ctx)
    ns = list(n_range)
    if not ns:
        return []
    xd = Dual(ctx.num(x), 1)
    top = max(ns)
    if top <= DIRECT_MAX_DEGREE:
        vals = _guarded(ctx, lambda: [_family_direct(ctx, family, m, xd) for m in ns])
    else:
        vals = _guarded(ctx, lambda: [_family_seq(ctx, family, top, xd)[m] for m in ns])
    return [(value(v) * ctx.mp.one, deriv(v) * ctx.mp.one) for v in vals]


@functools.lru_cache(maxsize=4096)
def _measured_norm_cached(family, n, ctx):
    mp = ctx.mp
    total = mp.zero
    small = 0
    x = 0
    floor_x = n + 2 * float(family.a) + 10
    while True:
        p = family.eval(n, x, ctx)
        vals = family.weight(x, ctx) * p * p
        total += vals
        if x > floor_x and vals < ctx.eps * total:
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
        x += 1


def measured_sq_norm(family: WeightFamily, n, ctx=None):
    """``sum_x w(x) P_n(x)^2`` summed until the positive terms are negligible."""
    return _measured_norm_cached(family, n, resolve(ctx))
