"""Brute-force ground truth.

Partitions are enumerated outright and correlation functions summed over
them; finite ensembles are sampled by the sequential projection-DPP rule.
Nothing here calls a correlation kernel, so each routine is an independent
check on the kernel modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .christoffel import EnsembleSpec, deformed_kernel, deformed_weight, ope_kernel, support_cutoff
from .errors import GuardError, NonPositiveWeightError, TruncationError
from .specfun.gamma import gen_pochhammer
from .specfun.precision import resolve

MAX_PARTITION_SIZE = 30
SYT_CHECK_SIZE = 8
POSITIVITY_WINDOW = (-50, 50)
TRACE_TOL = 1e-6
DRIFT_TOL = 1e-9

Z_SHIFT = "Z_shift"
N_SHIFT = "N_shift"
HALFINT_SHIFT = "HalfInt_shift"


@dataclass(frozen=True)
class Partition:
    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError("parts must be positive")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError("parts must be weakly decreasing")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self):
        return sum(self.parts)

    @property
    def length(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)


def _guard(n, what):
    if n > MAX_PARTITION_SIZE:
        raise GuardError(f"{what} {n} exceeds the cap {MAX_PARTITION_SIZE}")


def _partitions_of(n, cap):
    if n == 0:
        yield ()
        return
    for first in range(min(n, cap), 0, -1):
        for rest in _partitions_of(n - first, first):
            yield (first,) + rest


def enumerate_partitions(max_size):
    """Every partition of size at most ``max_size``: by size, then reverse lexicographic."""
    _guard(max_size, "max_size")
    for n in range(max_size + 1):
        for parts in _partitions_of(n, n):
            yield Partition(parts)


# -- dimensions --------------------------------------------------------------------

def _conjugate(parts):
    return tuple(sum(1 for p in parts if p > j) for j in range(parts[0])) if parts else ()


def partition_dim(lam):
    """Number of standard Young tableaux, by the hook-length formula."""
    parts = tuple(lam)
    conj = _conjugate(parts)
    hooks = 1
    for i, row in enumerate(parts):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(sum(parts)) // hooks


def standard_tableaux(lam):
    """Yield every standard Young tableau of shape ``lam`` as a tuple of rows."""
    parts = tuple(lam)
    n = sum(parts)
    rows = [[] for _ in parts]

    def fill(k):
        if k > n:
            yield tuple(tuple(r) for r in rows)
            return
        for i, target in enumerate(parts):
            ok_row = len(rows[i]) < target
            ok_col = i == 0 or len(rows[i - 1]) > len(rows[i])
            if ok_row and ok_col:
                rows[i].append(k)
                yield from fill(k + 1)
                rows[i].pop()

    yield from fill(1)


def partition_dim_checked(lam):
    """Hook-length dimension, cross-checked by enumeration for small shapes."""
    d = partition_dim(lam)
    if sum(lam) <= SYT_CHECK_SIZE:
        count = sum(1 for _ in standard_tableaux(lam))
        if count != d:
            raise AssertionError(f"hook formula gives {d}, enumeration {count} for {tuple(lam)}")
    return d


# -- point configurations ------------------------------------------------------------

def _as_exact(x):
    return x if isinstance(x, Fraction) else Fraction(str(x)) if isinstance(x, float) else Fraction(x)


def config_of_partition(lam, convention, window=None, N=None):
    """Image of ``lam`` under one of the three embeddings, cut to ``window`` when infinite.

    ``Z_shift``: ``{lam_i - i}``; ``HalfInt_shift``: ``{lam_i - i + 1/2}``;
    ``N_shift``: the ``N`` points ``{lam_i - i + N}``.  Points are returned
    as a frozenset of Fractions.
    """
    parts = tuple(lam)
    if convention == N_SHIFT:
        if N is None or len(parts) > N:
            raise ValueError("N_shift needs N >= length of the partition")
        padded = parts + (0,) * (N - len(parts))
        pts = {Fraction(p - i + N) for i, p in enumerate(padded, start=1)}
        if window is not None:
            lo, hi = map(_as_exact, window)
            pts = {p for p in pts if lo <= p <= hi}
        return frozenset(pts)
    if window is None:
        raise ValueError(f"{convention} is infinite; a window is required")
    shift = {Z_SHIFT: Fraction(0), HALFINT_SHIFT: Fraction(1, 2)}.get(convention)
    if shift is None:
        raise ValueError(f"unknown convention {convention!r}")
    lo, hi = map(_as_exact, window)
    pts = set()
    i = 1
    while True:
        p = (parts[i - 1] if i <= len(parts) else 0) - i + shift
        if i > len(parts) and p < lo:
            break
        if lo <= p <= hi:
            pts.add(p)
        i += 1
    return frozenset(pts)


def _contains(parts, x, shift):
    """Whether ``x`` lies in ``{lam_i - i + shift, i >= 1}``."""
    m = x - shift
    if m.denominator != 1:
        return False
    m = int(m)
    if m <= -(len(parts) + 1):
        return True
    return any(p - i == m for i, p in enumerate(parts, start=1))


def _contains_all(parts, pts, shift):
    return all(_contains(parts, x, shift) for x in pts)


@dataclass(frozen=True)
class CorrResult:
    value: object
    tail: object
    partitions: int


# -- poissonized Plancherel -------------------------------------------------------

def brute_plancherel_corr(alpha, points, cutoff, ctx=None):
    """Truncated partition sum for the poissonized Plancherel correlation of ``points``.

    The sum over each size is carried in exact rationals (``alpha`` is read
    as an exact decimal); only the overall ``e^-alpha`` is rounded.  ``tail``
    is ``e^-alpha sum_{n > cutoff} alpha^n / n!``, a bound on the error.
    """
    _guard(cutoff, "cutoff")
    ctx = resolve(ctx)
    mp = ctx.mp
    a = _as_exact(alpha)
    if a < 0:
        raise ValueError("alpha must be nonnegative")
    pts = [_as_exact(x) for x in points]
    total = Fraction(0)
    count = 0
    for n in range(cutoff + 1):
        fact = math.factorial(n)
        s = 0
        for parts in _partitions_of(n, n):
            count += 1
            if _contains_all(parts, pts, 0):
                s += partition_dim(parts) ** 2
        total += a ** n * Fraction(s, fact * fact)
    e = mp.exp(-ctx.num(a))
    value = e * ctx.num(total)
    head = mp.fsum(mp.power(ctx.num(a), n) / mp.factorial(n) for n in range(cutoff + 1))
    tail = max(mp.zero, 1 - e * head)
    return CorrResult(value, tail, count)


# -- z-measures ---------------------------------------------------------------------

def kernel_side_deformation(zparams, u_list):
    """``(U_i, V_i)`` for which each row factor becomes ``(lam_j - j + 1/2 - u_i)^2``.

    The factors ``(lam_j - j - U + z)(lam_j - j - V + z')`` collapse to that
    square exactly when ``U = u + z - 1/2`` and ``V = u + z' - 1/2``.
    """
    def scalar(v):
        return v if isinstance(v, complex) else float(v)

    z, zz = scalar(zparams.z), scalar(zparams.zp)
    return [(float(u) + z - 0.5, float(u) + zz - 0.5) for u in u_list]


def _row_factor(ctx, pairs, z, zz, m):
    out = ctx.mp.one
    for U, V in pairs:
        out *= (m - ctx.num(U) + z) * (m - ctx.num(V) + zz)
    return out


def _check_positive(ctx, v, what):
    mp = ctx.mp
    v = mp.mpc(v)
    if abs(v.imag) > ctx.tol_rel * max(1, abs(v.real)) or v.real <= 0:
        raise NonPositiveWeightError(f"{what}: deformation factor {mp.nstr(v, 8)} is not positive")
    return v.real


def brute_zmeasure_corr(zparams, points, cutoff, deform=None, ctx=None):
    """Truncated partition sum for a (deformed) z-measure correlation on ``Z + 1/2``.

    ``deform`` is a list of ``(U_i, V_i)`` pairs entering the measure as
    ``prod_j prod_i F_i(lam_j - j) / F_i(-j)`` with
    ``F_i(m) = (m - U_i + z)(m - V_i + z')``; the normalization is the
    truncated total mass.  ``tail`` reports
    ``1 - sum_{|lam| <= cutoff} M(lam)`` for the undeformed measure: a raw
    remainder, not a bound on the deformed error.
    """
    _guard(cutoff, "cutoff")
    ctx = resolve(ctx)
    mp = ctx.mp
    z, zz, xi = zparams.nums(ctx)
    pairs = list(deform or [])
    if pairs:
        lo, hi = POSITIVITY_WINDOW
        for m in range(lo, hi + 1):
            _check_positive(ctx, _row_factor(ctx, pairs, z, zz, m), f"x = {m}")
    # each row factor is divided by its value on an empty row, so rows
    # beyond the length contribute 1 and the weight depends on lam alone
    empty = [None] + [_row_factor(ctx, pairs, z, zz, -j) for j in range(1, cutoff + 1)]
    pts = [_as_exact(x) for x in points]
    half = Fraction(1, 2)
    pref = mp.power(1 - xi, z * zz)
    plain = mp.zero
    mass = mp.zero
    hit = mp.zero
    count = 0
    for n in range(cutoff + 1):
        fact = mp.factorial(n)
        for parts in _partitions_of(n, n):
            count += 1
            w = (pref * mp.power(xi, n) * gen_pochhammer(z, parts, ctx) * gen_pochhammer(zz, parts, ctx)
                 * (partition_dim(parts) / fact) ** 2)
            plain += w
            if pairs:
                for j, p in enumerate(parts, start=1):
                    w *= _row_factor(ctx, pairs, z, zz, p - j) / empty[j]
                w = _check_positive(ctx, w, f"lambda = {parts}") if w != 0 else mp.zero
            mass += w
            if _contains_all(parts, pts, half):
                hit += w
    value = mp.re(hit / mass)
    return CorrResult(value, abs(1 - plain), count)


# -- finite ensembles ----------------------------------------------------------------

def squared_vandermonde_corr(spec: EnsembleSpec, points, ctx=None):
    """Correlation of ``points`` in the N-point ensemble by direct summation.

    Sums ``prod_{i<j} (x_i - x_j)^2 prod_i w(x_i)`` over all N-subsets of the
    truncated support; meant for N <= 3.
    """
    import itertools

    ctx = resolve(ctx)
    mp = ctx.mp
    X = support_cutoff(spec, ctx)
    w = [deformed_weight(spec.family, spec.deform, t, ctx) for t in range(X)]
    pts = set(int(p) for p in points)
    Z = mp.zero
    hit = mp.zero
    for c in itertools.combinations(range(X), spec.N):
        v = mp.one
        for i, j in itertools.combinations(c, 2):
            v *= (i - j) ** 2
        for t in c:
            v *= w[t]
        Z += v
        if pts.issubset(c):
            hit += v
    return hit / Z


def gram_schmidt_monic(spec: EnsembleSpec, n_max, ctx=None):
    """Monic orthogonal polynomials of the deformed weight from its moments.

    Returns ``(coeffs, norms)``: ``coeffs[n]`` lists the power-basis
    coefficients (constant first) of the degree-n monic polynomial and
    ``norms[n]`` its squared norm.  Hankel systems are badly conditioned, so
    the moments and solves run at three times the working precision.
    """
    ctx = resolve(ctx)
    mp = ctx.mp
    with mp.workprec(3 * mp.prec):
        X = spec.family.support_cutoff(3 * ctx.mantissa_bits, degree=n_max + spec.deform.k + 1,
                                       shift=max([0.0] + [float(u) for u in spec.deform.points]))
        w = [deformed_weight(spec.family, spec.deform, t, ctx) for t in range(X)]
        mom = [mp.fsum(w[t] * mp.mpf(t) ** j for t in range(X)) for j in range(2 * n_max + 2)]
        coeffs, norms = [], []
        for n in range(n_max + 1):
            if n == 0:
                c = [mp.one]
            else:
                H = mp.matrix([[mom[i + j] for j in range(n)] for i in range(n)])
                rhs = mp.matrix([-mom[i + n] for i in range(n)])
                c = list(mp.lu_solve(H, rhs)) + [mp.one]
            coeffs.append(c)
            norms.append(mp.fsum(c[j] * mom[j + n] for j in range(n + 1)))
    return [[+v for v in c] for c in coeffs], [+v for v in norms]


class OPESampler:
    """Sequential sampler for the projection DPP of a finite ensemble.

    The kernel is tabulated once on ``0 .. truncation-1``; each draw picks a
    point from the normalized diagonal, then conditions on it by the Schur
    complement ``K <- K - K[:, y] K[y, :] / K[y, y]``.
    """

    def __init__(self, spec: EnsembleSpec, truncation=None, ctx=None):
        ctx = resolve(ctx)
        self.spec = spec
        self.truncation = truncation or support_cutoff(spec, ctx)
        K = deformed_kernel(spec, ctx) if spec.deform.k else ope_kernel(spec, ctx)
        pts = list(range(self.truncation))
        self.K = np.array([[float(K(x, y)) for y in pts] for x in pts])
        trace = float(np.trace(self.K))
        if abs(trace - spec.N) > TRACE_TOL:
            raise TruncationError(f"kernel trace {trace!r} over the truncation misses N = {spec.N}")

    def draw(self, rng):
        K = self.K.copy()
        chosen = []
        for step in range(self.spec.N):
            d = np.clip(np.diag(K), 0.0, None)
            d[chosen] = 0.0
            mass = d.sum()
            if abs(mass - (self.spec.N - step)) > TRACE_TOL:
                raise TruncationError(f"conditional mass {mass!r} at step {step}")
            y = int(rng.choice(len(d), p=d / mass))
            col = K[:, y].copy()
            K -= np.outer(col, K[y, :]) / K[y, y]
            after = np.clip(np.diag(K), 0.0, None)
            after[chosen + [y]] = 0.0
            removed = mass - after.sum()
            if abs(removed - 1.0) > DRIFT_TOL:
                raise TruncationError(f"renormalization drift {removed - 1.0!r} at step {step}")
            chosen.append(y)
        return tuple(sorted(chosen))

    def draw_many(self, count, seed):
        rng = np.random.default_rng(seed)
        return [self.draw(rng) for _ in range(count)]


def sample_ope(spec: EnsembleSpec, seed, truncation=None, ctx=None):
    """One configuration of N distinct points, reproducible from ``seed``."""
    return OPESampler(spec, truncation, ctx).draw(np.random.default_rng(seed))
