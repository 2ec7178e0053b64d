"""First-order forward-mode differentiation over mpmath scalars.

A :class:`Dual` carries ``(value, derivative)``.  Only the handful of
operations used by the polynomial and hypergeometric code are provided;
the product rule applied factor by factor stays exact at zeros of the
factors, which is why it is used instead of logarithmic derivatives.
"""

from __future__ import annotations


class Dual:
    __slots__ = ("v", "d")

    def __init__(self, v, d=0):
        self.v = v
        self.d = d

    def __repr__(self):
        return f"Dual({self.v!r}, {self.d!r})"

    def __add__(self, o):
        if isinstance(o, Dual):
            return Dual(self.v + o.v, self.d + o.d)
        return Dual(self.v + o, self.d)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, Dual):
            return Dual(self.v - o.v, self.d - o.d)
        return Dual(self.v - o, self.d)

    def __rsub__(self, o):
        return Dual(o - self.v, -self.d)

    def __neg__(self):
        return Dual(-self.v, -self.d)

    def __mul__(self, o):
        if isinstance(o, Dual):
            return Dual(self.v * o.v, self.d * o.v + self.v * o.d)
        return Dual(self.v * o, self.d * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Dual):
            q = self.v / o.v
            return Dual(q, (self.d - q * o.d) / o.v)
        return Dual(self.v / o, self.d / o)

    def __rtruediv__(self, o):
        q = o / self.v
        return Dual(q, -q * self.d / self.v)


def value(x):
    return x.v if isinstance(x, Dual) else x


def deriv(x):
    return x.d if isinstance(x, Dual) else 0


def lift(fn, dfn):
    """Build a unary function acting on plain scalars and on duals."""

    def wrapped(x):
        if isinstance(x, Dual):
            return Dual(fn(x.v), dfn(x.v) * x.d)
        return fn(x)

    return wrapped
