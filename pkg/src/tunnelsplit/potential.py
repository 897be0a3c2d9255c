"""Symmetric double-well potentials: derivatives and profile analysis."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .errors import (
    AsymmetricPotential,
    DomainError,
    InvalidParameter,
    MultipleBarriers,
    NotDoubleWell,
)
from .jets import Jet
from .quadrature import find_root

TOL_SYM = 1e-10
TOL_ZERO = 1e-12
TOL_CURVATURE = 1e-12
N_SYMMETRY_POINTS = 64
N_SCAN = 256


@dataclass(frozen=True)
class PhysicalContext:
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise InvalidParameter("mass>0 required")
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise InvalidParameter("hbar>0 required")


def _checked(value):
    coeffs = value.c if isinstance(value, Jet) else [value]
    for c in coeffs:
        if not np.all(np.isfinite(c)):
            raise DomainError("potential evaluation overflowed or produced NaN")
    return value


def evaluate_jet(expr: ex.Node, q, order: int) -> Jet:
    """Taylor jet of ``expr`` about ``q`` (scalar or array) up to ``order``."""
    q = np.asarray(q, dtype=float)
    with np.errstate(all="ignore"):
        out = ex.evaluate(expr, Jet.variable(q, order))
    if not isinstance(out, Jet):  # constant expression
        out = Jet([np.asarray(out, dtype=float) + 0.0 * q] + [0.0 * q] * order)
    return _checked(out)


def evaluate_value(expr: ex.Node, q):
    q = np.asarray(q, dtype=float)
    with np.errstate(all="ignore"):
        out = np.asarray(ex.evaluate(expr, q), dtype=float) + 0.0 * q
    return _checked(out)


def eval_with_derivatives(expr: ex.Node, q: float) -> tuple[float, float, float]:
    """``(V, V', V'')`` at ``q`` by forward-mode propagation through the tree."""
    j = evaluate_jet(expr, q, 2)
    return float(j.c[0]), float(j.derivative(1)), float(j.derivative(2))


@dataclass(frozen=True)
class PotentialProfile:
    """A validated double well, shifted so that the well bottoms sit at zero.

    ``a`` is the right minimum, ``v_max`` the barrier height at ``q = 0``.
    """

    expr: ex.Node
    ctx: PhysicalContext
    shift: float
    a: float
    v_max: float
    d2_at_well: float
    omega: float
    p_central: float
    text: str = field(default="", compare=False)

    @property
    def mass(self) -> float:
        return self.ctx.mass

    @property
    def hbar(self) -> float:
        return self.ctx.hbar

    def V(self, q):
        return evaluate_value(self.expr, q) - self.shift

    def jet(self, q, order: int) -> Jet:
        j = evaluate_jet(self.expr, q, order)
        j.c[0] = j.c[0] - self.shift
        return j

    def with_hbar(self, hbar: float) -> "PotentialProfile":
        return analyze_profile(self.expr, PhysicalContext(self.mass, hbar), text=self.text)


def chebyshev_points(lo: float, hi: float, n: int) -> np.ndarray:
    k = np.arange(n)
    return lo + (hi - lo) * 0.5 * (1.0 - np.cos(np.pi * (k + 1) / n))


def _check_symmetry(expr: ex.Node, hi: float) -> None:
    q = chebyshev_points(0.0, hi, N_SYMMETRY_POINTS)
    right = evaluate_value(expr, q)
    left = evaluate_value(expr, -q)
    scale = np.maximum(np.maximum(np.abs(right), np.abs(left)), 1e-300)
    bad = np.abs(right - left) > TOL_SYM * scale
    if np.any(bad):
        worst = float(q[np.argmax(np.abs(right - left) / scale)])
        raise AsymmetricPotential(f"V(q) != V(-q) near q={worst:.6g}")


def analyze_profile(
    expr: ex.Node,
    ctx: PhysicalContext,
    q_search_max: float = 10.0,
    text: str = "",
) -> PotentialProfile:
    """Locate the wells, shift them to zero and validate the double-well shape."""
    grid = np.linspace(0.0, q_search_max, N_SCAN + 1)[1:]
    try:
        slope = evaluate_jet(expr, grid, 1).c[1]
    except DomainError:
        # the far end of the scan may overflow; keep the finite prefix
        finite = []
        for q in grid:
            try:
                finite.append(float(evaluate_jet(expr, q, 1).c[1]))
            except DomainError:
                break
        grid = grid[: len(finite)]
        slope = np.array(finite)
    if len(grid) < 2:
        raise DomainError("potential is not finite on the search interval")

    rising = np.nonzero((slope[:-1] < 0) & (slope[1:] >= 0))[0]
    if len(rising) == 0:
        _check_symmetry(expr, float(grid[-1]))
        raise NotDoubleWell("no interior minimum with V' changing sign from - to +")
    if len(rising) > 1:
        _check_symmetry(expr, float(grid[-1]))
        raise MultipleBarriers(f"{len(rising)} minima found on (0, {q_search_max:g}]")

    i = int(rising[0])

    def dV(q: float) -> float:
        return float(evaluate_jet(expr, q, 1).c[1])

    if slope[i + 1] == 0.0:
        a = float(grid[i + 1])
    else:
        a = find_root(dV, float(grid[i]), float(grid[i + 1]), 0.0)

    _check_symmetry(expr, 2.0 * a)

    v_a, _, d2 = eval_with_derivatives(expr, a)
    v_0 = float(evaluate_value(expr, 0.0))
    shift = v_a
    v_max = v_0 - shift
    if not v_max > TOL_ZERO * max(1.0, abs(v_0)):
        raise NotDoubleWell(f"V(0) - V(a) = {v_max:.3e} is not positive")
    if not d2 > TOL_CURVATURE:
        raise NotDoubleWell(f"V''(a) = {d2:.3e}: flat-bottomed wells are unsupported")

    inner = np.linspace(0.0, a, N_SCAN + 2)[1:-1]
    inner_slope = evaluate_jet(expr, inner, 1).c[1]
    if np.any(inner_slope >= 0):
        where = float(inner[np.argmax(inner_slope >= 0)])
        raise MultipleBarriers(f"V' >= 0 at q={where:.6g} inside (0, a)")

    m = ctx.mass
    return PotentialProfile(
        expr=expr,
        ctx=ctx,
        shift=shift,
        a=a,
        v_max=v_max,
        d2_at_well=d2,
        omega=math.sqrt(d2 / m),
        p_central=math.sqrt(2.0 * m * v_max),
        text=text,
    )


def scaled(expr: ex.Node, factor: float) -> ex.Node:
    return ex.BinOp("*", ex.Num(float(factor)), expr)
