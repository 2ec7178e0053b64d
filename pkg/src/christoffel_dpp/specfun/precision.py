"""Extended-precision context.

Every numerical routine receives a :class:`PrecisionContext` explicitly.
Each context owns a private :class:`mpmath.MPContext`, so two contexts at
different precisions never interfere and no routine touches ``mpmath.mp``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number

import mpmath

GUARD_BITS = 24


@dataclass(frozen=True)
class PrecisionContext:
    mantissa_bits: int = 256
    quad_nodes: int = 64
    mp: mpmath.ctx_mp.MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.mantissa_bits < 64:
            raise ValueError("mantissa_bits must be >= 64")
        if self.quad_nodes < 4:
            raise ValueError("quad_nodes must be >= 4")
        ctx = mpmath.MPContext()
        ctx.prec = self.mantissa_bits + GUARD_BITS
        object.__setattr__(self, "mp", ctx)

    def __reduce__(self):
        return (PrecisionContext, (self.mantissa_bits, self.quad_nodes))

    @property
    def tol_rel(self):
        """Relative tolerance for comparisons made at this precision."""
        return self.mp.ldexp(1, 8 - self.mantissa_bits)

    @property
    def eps(self):
        return self.mp.ldexp(1, -self.mantissa_bits)

    @property
    def digits(self):
        """Decimal digits carried by ``mantissa_bits``."""
        return int(self.mantissa_bits * math.log10(2))

    def num(self, x):
        """Coerce ints, floats, strings, Fractions and mpmath values."""
        mp = self.mp
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / x.denominator
        if isinstance(x, complex):
            return mp.mpc(x.real, x.imag)
        if isinstance(x, str):
            try:
                return mp.mpf(x)
            except ValueError:
                return mp.mpc(complex(x.replace(" ", "")))
        if isinstance(x, (mpmath.mpf, mpmath.mpc)) or hasattr(x, "_mpf_") or hasattr(x, "_mpc_"):
            return mp.convert(x)
        if isinstance(x, Number):
            return mp.convert(x)
        raise TypeError(f"cannot convert {type(x).__name__} to an extended-precision scalar")


@functools.lru_cache(maxsize=16)
def get_context(mantissa_bits: int = 256, quad_nodes: int = 64) -> PrecisionContext:
    """Shared immutable contexts; sharing keeps mpmath's quadrature node caches warm."""
    return PrecisionContext(mantissa_bits, quad_nodes)


def resolve(ctx):
    return get_context() if ctx is None else ctx
