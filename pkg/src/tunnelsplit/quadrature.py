"""Tanh-sinh quadrature and bracketed root finding.

The integrand is called with numpy arrays of abscissae, one refinement
level at a time, so it must be written with ufuncs.  Endpoint singularities
up to inverse square roots are fine.  Abscissae near ``lo`` are exact to
full relative precision; a singular endpoint is best placed at ``lo`` (or
use ``complement=True``, which also hands the integrand the signed distance
to the nearer endpoint).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import InvalidParameter, NoBracket, NoConvergence, NonFiniteSample

T_MAX = 4.0
MIN_LEVELS = 3
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_levels: int = 12

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise InvalidParameter("quadrature tolerances must be positive")
        if self.max_levels < 4:
            raise InvalidParameter("max_levels must be at least 4")


DEFAULT = QuadratureConfig()


class QuadResult(NamedTuple):
    value: float
    error: float


def _nodes(level: int):
    """Abscissa complements and weights added at ``level`` (step ``2**-level``).

    Returns ``t``-ordered arrays for the positive half-line; the rule is
    symmetric, so each node stands for the pair ``x = +-(1 - c)``.
    """
    h = 2.0 ** (-level)
    if level == 0:
        k = np.arange(0, int(T_MAX) + 1)
    else:
        k = np.arange(1, int(T_MAX * 2**level) + 1, 2)
    t = k * h
    u = 0.5 * math.pi * np.sinh(t)
    c = 2.0 / (np.exp(2.0 * u) + 1.0)  # 1 - tanh(u), no cancellation
    w = 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
    keep = c > 0
    return t[keep], c[keep], w[keep]


def _level_sum(f, lo, hi, level, complement):
    t, c, w = _nodes(level)
    half = 0.5 * (hi - lo)
    d = half * c
    left = lo + d
    right = hi - d
    center = t == 0.0
    xs = np.concatenate([left, right[~center]])
    ws = np.concatenate([w, w[~center]])
    ds = np.concatenate([d, -d[~center]])
    inside = (xs > lo) & (xs < hi) if not complement else ds != 0.0
    if complement:
        fx = np.asarray(f(xs[inside], ds[inside]), dtype=float)
    else:
        fx = np.asarray(f(xs[inside]), dtype=float)
    fx = np.broadcast_to(fx, xs[inside].shape)
    if not np.all(np.isfinite(fx)):
        bad = xs[inside][~np.isfinite(fx)][0]
        raise NonFiniteSample(f"integrand not finite at x={bad!r}")
    return float(np.sum(ws[inside] * fx))


def integrate(
    f: Callable,
    lo: float,
    hi: float,
    cfg: QuadratureConfig = DEFAULT,
    *,
    complement: bool = False,
) -> QuadResult:
    """Integrate ``f`` over ``[lo, hi]`` by the double-exponential rule.

    The error estimate is the change between the last two refinement levels.
    Raises :class:`NoConvergence` if it still exceeds the tolerance after
    ``cfg.max_levels`` halvings of the step.
    """
    if lo == hi:
        return QuadResult(0.0, 0.0)
    if hi < lo:
        r = integrate(f, hi, lo, cfg, complement=complement)
        return QuadResult(-r.value, r.error)
    half = 0.5 * (hi - lo)
    total = _level_sum(f, lo, hi, 0, complement)
    estimate = half * total
    for level in range(1, cfg.max_levels + 1):
        total += _level_sum(f, lo, hi, level, complement)
        new = half * total * 2.0 ** (-level)
        err = abs(new - estimate)
        estimate = new
        if level >= MIN_LEVELS and err <= max(cfg.abs_tol, cfg.rel_tol * abs(new)):
            return QuadResult(new, err)
    raise NoConvergence(
        f"tanh-sinh did not converge on [{lo:g}, {hi:g}]: "
        f"error estimate {err:.3e} after {cfg.max_levels} levels"
    )


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 0.0,
    max_iter: int = 200,
) -> float:
    """Root of ``f`` in ``[lo, hi]``: bisection interleaved with secant steps.

    ``tol`` is the bracket width to stop at; zero asks for machine precision.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if not (flo * fhi < 0):
        raise NoBracket(f"f({lo:g})={flo:.3e} and f({hi:g})={fhi:.3e} have the same sign")
    use_secant = True
    for _ in range(max_iter):
        width = hi - lo
        if width <= max(tol, 4.0 * _EPS * max(abs(lo), abs(hi))):
            break
        x = None
        if use_secant:
            x = hi - fhi * (hi - lo) / (fhi - flo)
            if not (lo < x < hi):
                x = None
        if x is None:
            x = lo + 0.5 * width
        fx = f(x)
        if fx == 0.0:
            return x
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        # fall back to bisection whenever the secant step fails to halve the bracket
        use_secant = (hi - lo) < 0.5 * width
    else:
        raise NoConvergence(f"root finding did not converge in {max_iter} iterations")
    return lo if abs(flo) < abs(fhi) else hi
