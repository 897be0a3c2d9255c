"""Explicit semiclassical ground-state splitting of a symmetric double well.

The chain is

* ``S0``: area of the separatrix of the upturned potential,
* ``defect``: finite difference between the separatrix traversal time of
  the true upturned orbit and of the matched upturned oscillator, taken
  over momenta ``0..P``,
* ``epsilon = (2 P^2 / m) exp(2 omega defect)``,
* ``S(E) = S0 + (2E/omega) ln(E/epsilon)`` at ``E = hbar omega / 2``,
* ``dE = sqrt(pi/e) (hbar omega / pi) exp(-S / 2 hbar)``.

The defect integral over momentum is evaluated in the position variable,
where it needs only ``V`` and ``V'``::

    defect = int_0^a [ sqrt(m / 2V) - |V'| / (2 omega V) ] dq

The integrand is finite at both ends; at ``q = a`` the two terms cancel to
the limit ``V'''(a) / (3 omega V''(a))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import BarrierTooLow, EnergyOutOfRange, MatchPointOutsideWell
from .potential import PotentialProfile
from .quadrature import DEFAULT, QuadratureConfig, find_root, integrate

# the last END_FRACTION * a before the well bottom is integrated by Simpson's
# rule on two panels, using the analytic limit at q = a, because V - 0 loses
# all significant digits there
END_FRACTION = 1e-3


@dataclass(frozen=True)
class SemiclassicalReport:
    s0: float
    epsilon: float
    e_ground_ref: float
    s_action: float
    period: float
    delta_e: float
    e_minus: float
    e_plus: float
    flip_rate: float


@dataclass(frozen=True)
class TimeBudget:
    q_match: float
    t1_leading: float
    t1_exact_harmonic: float
    defect: float
    period_eq7: float


@dataclass(frozen=True)
class WkbTail:
    norm_sq: float
    k_integral: float
    delta_e_herring: float


@lru_cache(maxsize=512)
def separatrix_area(profile: PotentialProfile, cfg: QuadratureConfig = DEFAULT) -> float:
    m = profile.mass

    def momentum(q):
        return np.sqrt(2.0 * m * np.maximum(profile.V(q), 0.0))

    # 2 * int_{-a}^{a} = 4 * int_0^a by symmetry
    return 4.0 * integrate(momentum, 0.0, profile.a, cfg).value


def defect_integral(
    v_and_slope: Callable,
    mass: float,
    omega: float,
    a: float,
    end_limit: float,
    cfg: QuadratureConfig = DEFAULT,
) -> float:
    """Separatrix time defect for a potential given as ``q -> (V, V')``.

    ``end_limit`` is the value of the integrand at ``q = a``.
    """

    def g(q):
        v, dv = v_and_slope(q)
        return np.sqrt(mass / (2.0 * v)) - np.abs(dv) / (2.0 * omega * v)

    xc = END_FRACTION * a
    body = integrate(g, 0.0, a - 2.0 * xc, cfg).value
    inner = g(np.array([a - 2.0 * xc, a - xc]))
    tail = xc / 3.0 * (inner[0] + 4.0 * inner[1] + end_limit)
    return body + float(tail)


@lru_cache(maxsize=512)
def time_defect(profile: PotentialProfile, cfg: QuadratureConfig = DEFAULT) -> float:
    jet = profile.jet(profile.a, 3)
    d2, d3 = float(jet.derivative(2)), float(jet.derivative(3))
    end_limit = d3 / (3.0 * profile.omega * d2)

    def v_and_slope(q):
        j = profile.jet(q, 1)
        return j.c[0], j.c[1]

    return defect_integral(v_and_slope, profile.mass, profile.omega, profile.a, end_limit, cfg)


def epsilon_from_defect(p_central: float, mass: float, omega: float, defect: float) -> float:
    return 2.0 * p_central**2 / mass * math.exp(2.0 * omega * defect)


def epsilon_constant(profile: PotentialProfile, cfg: QuadratureConfig = DEFAULT) -> float:
    return epsilon_from_defect(profile.p_central, profile.mass, profile.omega, time_defect(profile, cfg))


def _check_energy(profile: PotentialProfile, E: float, upper: float, name: str) -> None:
    if not (0.0 < E < upper):
        raise EnergyOutOfRange(f"need 0 < E < {name} = {upper:.6g}, got E = {E!r}")


def action_S(profile: PotentialProfile, E: float, cfg: QuadratureConfig = DEFAULT) -> float:
    """Tunnelling action at energy ``E`` below the upturned peaks."""
    _check_energy(profile, E, profile.v_max, "v_max")
    eps = epsilon_constant(profile, cfg)
    return separatrix_area(profile, cfg) + 2.0 * E / profile.omega * math.log(E / eps)


def action_S_integrated(profile: PotentialProfile, E: float, cfg: QuadratureConfig = DEFAULT) -> float:
    """``S0 - int_0^E T dE'`` with ``T`` from :func:`period_T`.

    Differs from :func:`action_S` by ``-2E/omega``; this is the form whose
    energy derivative is exactly ``-period_T``.
    """
    return action_S(profile, E, cfg) - 2.0 * E / profile.omega


def period_T(profile: PotentialProfile, E: float, cfg: QuadratureConfig = DEFAULT) -> float:
    eps = epsilon_constant(profile, cfg)
    _check_energy(profile, E, eps, "epsilon")
    return -2.0 / profile.omega * math.log(E / eps)


def time_budget(profile: PotentialProfile, cfg: QuadratureConfig = DEFAULT) -> TimeBudget:
    m, w, hbar, P = profile.mass, profile.omega, profile.hbar, profile.p_central
    Q = math.sqrt(hbar / (m * w))
    if Q >= profile.a:
        raise MatchPointOutsideWell(
            f"matching point Q = {Q:.6g} is not inside the well (a = {profile.a:.6g})"
        )
    t1 = math.log(2.0 * P / (m * w * Q)) / w
    t1_exact = math.asinh(P / (m * w * Q)) / w
    defect = time_defect(profile, cfg)
    return TimeBudget(
        q_match=Q,
        t1_leading=t1,
        t1_exact_harmonic=t1_exact,
        defect=defect,
        period_eq7=4.0 * (t1 + defect),
    )


def _ground_energy(profile: PotentialProfile) -> float:
    E = 0.5 * profile.hbar * profile.omega
    if E >= profile.v_max:
        raise BarrierTooLow(
            f"hbar*omega/2 = {E:.6g} is not below the barrier v_max = {profile.v_max:.6g}"
        )
    return E


def splitting_from_action(hbar: float, omega: float, action: float) -> float:
    return math.sqrt(math.pi / math.e) * hbar * omega / math.pi * math.exp(-action / (2.0 * hbar))


def ground_splitting(profile: PotentialProfile, cfg: QuadratureConfig = DEFAULT) -> SemiclassicalReport:
    E = _ground_energy(profile)
    hbar, w = profile.hbar, profile.omega
    s = action_S(profile, E, cfg)
    de = splitting_from_action(hbar, w, s)
    return SemiclassicalReport(
        s0=separatrix_area(profile, cfg),
        epsilon=epsilon_constant(profile, cfg),
        e_ground_ref=E,
        s_action=s,
        period=period_T(profile, E, cfg),
        delta_e=de,
        e_minus=E - 0.5 * de,
        e_plus=E + 0.5 * de,
        flip_rate=de / (2.0 * math.pi * hbar),
    )


def splitting_closed_form(profile: PotentialProfile, cfg: QuadratureConfig = DEFAULT) -> float:
    """Same splitting, rearranged as ``sqrt(2 eps hbar omega / (pi e)) exp(-S0 / 2 hbar)``."""
    _ground_energy(profile)
    hbar, w = profile.hbar, profile.omega
    eps = epsilon_constant(profile, cfg)
    s0 = separatrix_area(profile, cfg)
    return math.sqrt(2.0 * eps * hbar * w / (math.pi * math.e)) * math.exp(-s0 / (2.0 * hbar))


def splitting_integrated(profile: PotentialProfile, cfg: QuadratureConfig = DEFAULT) -> float:
    """Splitting with :func:`action_S_integrated` in the exponent (diagnostic)."""
    E = _ground_energy(profile)
    return splitting_from_action(profile.hbar, profile.omega, action_S_integrated(profile, E, cfg))


# --- Herring / WKB route -------------------------------------------------

def norm_sq(mass: float, omega: float, hbar: float) -> float:
    return mass * omega / (hbar * math.sqrt(4.0 * math.pi * math.e))


def k_integral(
    potential_at: Callable,
    mass: float,
    hbar: float,
    energy: float,
    lower: float,
    upper: float,
    cfg: QuadratureConfig = DEFAULT,
) -> float:
    """``int k du`` with ``k = sqrt(2m (V(u) - energy)) / hbar``.

    ``potential_at`` takes the distance ``u`` from the well minimum.  Where
    ``V < energy`` the integrand is taken as zero.
    """

    def k(u):
        return np.sqrt(2.0 * mass * np.maximum(potential_at(u) - energy, 0.0)) / hbar

    return integrate(k, lower, upper, cfg).value


def harmonic_k_integral(mass: float, omega: float, hbar: float, upper: float) -> float:
    """Closed form of :func:`k_integral` for ``V = m omega^2 u^2 / 2`` from ``u = Q``."""
    Q = math.sqrt(hbar / (mass * omega))
    X = upper
    return mass * omega / (2.0 * hbar) * (
        X * math.sqrt(X * X - Q * Q) - Q * Q * math.acosh(X / Q)
    )


def splitting_wkb_direct(
    profile: PotentialProfile,
    lower_limit: str = "literal",
    cfg: QuadratureConfig = DEFAULT,
) -> WkbTail:
    """Splitting from Herring's formula with the matched WKB tail.

    ``lower_limit="literal"`` starts the ``k`` integral a distance
    ``Q = sqrt(hbar / m omega)`` from the well bottom; ``"turning_point"``
    starts it at the inner turning point where ``V = hbar omega / 2``.
    """
    E = _ground_energy(profile)
    m, w, hbar, a = profile.mass, profile.omega, profile.hbar, profile.a

    def potential_at(u):
        return profile.V(a - u)

    # inner turning point, measured from the well bottom
    q_turn = find_root(lambda q: float(profile.V(q)) - E, 0.0, a)
    u_turn = a - q_turn
    if lower_limit == "literal":
        Q = math.sqrt(hbar / (m * w))
        if Q >= a:
            raise MatchPointOutsideWell(f"matching point Q = {Q:.6g} is not inside the well")
        # k vanishes identically on [Q, u_turn] when the turning point lies further in
        lower = max(Q, u_turn)
    elif lower_limit == "turning_point":
        lower = u_turn
    else:
        raise ValueError(f"unknown lower_limit {lower_limit!r}")

    kint = k_integral(potential_at, m, hbar, E, lower, a, cfg)
    n2 = norm_sq(m, w, hbar)
    return WkbTail(
        norm_sq=n2,
        k_integral=kint,
        delta_e_herring=2.0 * hbar**2 / m * n2 * math.exp(-2.0 * kint),
    )
