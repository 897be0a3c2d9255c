"""Truncated Taylor series ("jets") for forward-mode differentiation.

A :class:`Jet` of order ``n`` carries the Taylor coefficients
``c[k] = f^(k)(x0) / k!`` for ``k = 0..n``.  Coefficients may be floats or
numpy arrays, so a single pass through an expression tree differentiates
at many points at once.  Order 1 is the usual dual number.
"""

from __future__ import annotations

import math

import numpy as np


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = list(coeffs)

    @classmethod
    def variable(cls, x0, order: int) -> "Jet":
        """The independent variable ``x`` expanded about ``x0``."""
        one = np.ones_like(x0, dtype=float) if isinstance(x0, np.ndarray) else 1.0
        zero = one * 0.0
        coeffs = [x0 * one, one] + [zero] * (order - 1)
        return cls(coeffs[: order + 1])

    @property
    def order(self) -> int:
        return len(self.c) - 1

    def derivative(self, k: int):
        return self.c[k] * math.factorial(k)

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        zero = self.c[0] * 0.0
        return Jet([other + zero] + [zero] * self.order)

    def __add__(self, other):
        other = self._lift(other)
        return Jet([a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return Jet([a - b for a, b in zip(self.c, other.c)])

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Jet([-a for a in self.c])

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet([a * other for a in self.c])
        n = self.order
        a, b = self.c, other.c
        return Jet([sum(a[j] * b[k - j] for j in range(k + 1)) for k in range(n + 1)])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet([a / other for a in self.c])
        n = self.order
        a, b = self.c, other.c
        out = []
        for k in range(n + 1):
            s = a[k] - sum(out[j] * b[k - j] for j in range(k))
            out.append(s / b[0])
        return Jet(out)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("jets only support integer powers")
        if exponent < 0:
            return 1.0 / (self ** (-exponent))
        result = self._lift(1.0)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __repr__(self) -> str:
        return f"Jet({self.c!r})"


def _paired(f: Jet, first, second, sign: float):
    # u = F(f), v = G(f) with u' = v f' and v' = sign * u f'
    n = f.order
    u, v = [first], [second]
    for k in range(1, n + 1):
        su = sum(j * f.c[j] * v[k - j] for j in range(1, k + 1)) / k
        sv = sign * sum(j * f.c[j] * u[k - j] for j in range(1, k + 1)) / k
        u.append(su)
        v.append(sv)
    return Jet(u), Jet(v)


def exp(x):
    if not isinstance(x, Jet):
        return np.exp(x)
    e0 = np.exp(x.c[0])
    out = [e0]
    for k in range(1, x.order + 1):
        out.append(sum(j * x.c[j] * out[k - j] for j in range(1, k + 1)) / k)
    return Jet(out)


def cosh(x):
    if not isinstance(x, Jet):
        return np.cosh(x)
    ch, _ = _paired(x, np.cosh(x.c[0]), np.sinh(x.c[0]), 1.0)
    return ch


def cos(x):
    if not isinstance(x, Jet):
        return np.cos(x)
    # (cos)' = -sin, (sin)' = cos
    c, _ = _paired(x, np.cos(x.c[0]), -np.sin(x.c[0]), -1.0)
    return c


FUNCTIONS = {"exp": exp, "cosh": cosh, "cos": cos}
