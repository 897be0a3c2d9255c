"""Brute-force references for the semiclassical chain.

Quantum side: the two lowest levels of ``-(hbar^2/2m) d^2/dq^2 + V`` on a
uniform Dirichlet grid (three-point Laplacian), each eigenvalue isolated by
Sturm-sequence bisection, then Richardson-extrapolated over grid doublings.

Classical side: exact action, period and quarter period of the upturned
orbit at energy ``E`` by quadrature between turning points, and the energy
constant recovered from the logarithmic asymptote of the period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.linalg import solve_banded

from . import semiclassical as sc
from .errors import (
    BoxTooSmall,
    EnergyOutOfRange,
    InvalidParameter,
    NoSeparation,
    NotConverging,
)
from .potential import PotentialProfile
from .quadrature import DEFAULT, QuadratureConfig, find_root, integrate

_EPS = np.finfo(float).eps

# Taylor expansion about the turning point is used within this fraction of q_t
TAYLOR_REACH = 1e-2
TAYLOR_ORDER = 8
# rounding noise floor for the splitting, in units of eps * ||H||
NOISE_FACTOR = 8.0


@dataclass(frozen=True)
class GridConfig:
    """``n_points`` intervals on the coarsest grid, ``refinement_levels`` grids."""

    box_half_width: float | None = None
    n_points: int = 4096
    refinement_levels: int = 3

    def __post_init__(self):
        if self.n_points < 64:
            raise InvalidParameter("n_points >= 64 required")
        if self.refinement_levels < 1:
            raise InvalidParameter("refinement_levels >= 1 required")
        if self.box_half_width is not None and not self.box_half_width > 0:
            raise InvalidParameter("box_half_width > 0 required")


class LevelPair(NamedTuple):
    e0: float
    e1: float
    delta_e: float
    error: float


@dataclass(frozen=True)
class Eigenvectors:
    grid: np.ndarray
    ground: np.ndarray
    excited: np.ndarray


# --- eigenvalues -------------------------------------------------------------

def sturm_count(diag: list, off_sq: float, lam: float) -> int:
    """Number of eigenvalues below ``lam`` of a tridiagonal matrix with
    constant squared off-diagonal ``off_sq``."""
    count = 0
    pivot = math.inf
    for d in diag:
        pivot = d - lam - off_sq / pivot
        if pivot < 0.0:
            count += 1
        elif pivot == 0.0:
            pivot = -_EPS * math.sqrt(off_sq)
            count += 1
    return count


def lowest_two(diag: list, off_sq: float, lower: float, upper_guess: float) -> tuple[float, float]:
    """The two smallest eigenvalues, bisected to adjacent floating point numbers."""
    step = max(upper_guess - lower, _EPS * max(abs(lower), 1.0))
    hi = lower + step
    while sturm_count(diag, off_sq, hi) < 2:
        step *= 2.0
        hi = lower + step
    brackets = [[lower, hi], [lower, hi]]
    for index in (0, 1):
        b = brackets[index]
        while True:
            lo, up = b
            mid = 0.5 * (lo + up)
            if not (lo < mid < up):
                break
            c = sturm_count(diag, off_sq, mid)
            # every count narrows both brackets while they are still shared
            for j, other in enumerate(brackets):
                if other[0] <= mid <= other[1] and j >= index:
                    if c > j:
                        other[1] = mid
                    else:
                        other[0] = mid
    return 0.5 * sum(brackets[0]), 0.5 * sum(brackets[1])


def _romberg(values: Sequence[float]) -> tuple[float, float]:
    """Extrapolate a sequence with error ``c1 h^2 + c2 h^4 + ...`` as ``h`` halves."""
    table = [list(values)]
    for j in range(1, len(values)):
        prev = table[-1]
        f = 4.0**j
        table.append([(f * prev[i + 1] - prev[i]) / (f - 1.0) for i in range(len(prev) - 1)])
    best = table[-1][0]
    if len(values) == 1:
        return best, math.inf
    return best, abs(best - table[-2][-1])


def _hamiltonian(potential: Callable, mass: float, hbar: float, half_width: float, n: int):
    h = 2.0 * half_width / n
    x = -half_width + h * np.arange(1, n)
    kin = hbar**2 / (mass * h * h)
    diag = kin + np.asarray(potential(x), dtype=float)
    off = -0.5 * kin
    return x, diag, off


def lowest_levels(
    potential: Callable,
    mass: float,
    hbar: float,
    half_width: float,
    n_points: int = 4096,
    refinement_levels: int = 3,
    upper_guess: float | None = None,
) -> tuple[LevelPair, list[tuple[float, float]]]:
    """Extrapolated ``(e0, e1)`` of ``V`` on ``[-half_width, half_width]``.

    Returns the extrapolated pair and the raw per-grid eigenvalues.  The
    error bar is the larger of the Romberg estimate for the splitting and
    the disagreement between extrapolating the difference and differencing
    the extrapolations.
    """
    raw = []
    norm = 0.0
    for k in range(refinement_levels):
        n = n_points * 2**k
        _, diag, off = _hamiltonian(potential, mass, hbar, half_width, n)
        lower = float(np.min(diag - 2.0 * abs(off)))
        guess = upper_guess if upper_guess is not None else lower + abs(off) * 1e-3
        raw.append(lowest_two(diag.tolist(), off * off, lower, guess))
        norm = float(np.max(np.abs(diag)) + 2.0 * abs(off))
    e0, err0 = _romberg([r[0] for r in raw])
    e1, err1 = _romberg([r[1] for r in raw])
    de, err_de = _romberg([r[1] - r[0] for r in raw])
    if len(raw) == 1:
        err_de = 0.0
    error = max(err_de, abs(de - (e1 - e0)))
    noise = NOISE_FACTOR * _EPS * norm
    if not de > max(error, noise):
        raise NoSeparation(
            f"splitting {de:.3e} is not resolved: error estimate {error:.3e}, "
            f"rounding floor {noise:.3e}"
        )
    return LevelPair(e0, e1, de, error), raw


def default_box(profile: PotentialProfile) -> float:
    return profile.a + 6.0 / math.sqrt(profile.mass * profile.omega / profile.hbar)


def _check_box(profile: PotentialProfile, half_width: float, e1: float) -> None:
    if half_width <= profile.a:
        raise BoxTooSmall(f"box half width {half_width:.6g} does not enclose the wells (a = {profile.a:.6g})")
    edge = float(profile.V(half_width))
    if edge < 10.0 * e1:
        raise BoxTooSmall(f"V(box edge) = {edge:.6g} is below 10 * e1 = {10.0 * e1:.6g}")


def eigen_splitting(profile: PotentialProfile, grid: GridConfig = GridConfig()) -> LevelPair:
    half_width = grid.box_half_width or default_box(profile)
    estimate = 0.5 * profile.hbar * profile.omega
    _check_box(profile, half_width, estimate)
    pair, _ = lowest_levels(
        profile.V,
        profile.mass,
        profile.hbar,
        half_width,
        grid.n_points,
        grid.refinement_levels,
        upper_guess=2.0 * estimate,
    )
    _check_box(profile, half_width, pair.e1)
    return pair


def eigenvectors(
    potential: Callable,
    mass: float,
    hbar: float,
    half_width: float,
    n_points: int,
    upper_guess: float | None = None,
    iterations: int = 4,
) -> Eigenvectors:
    """Ground and first excited eigenvectors on one grid by inverse iteration.

    Signs are fixed so that the largest component on the left half is positive.
    """
    x, diag, off = _hamiltonian(potential, mass, hbar, half_width, n_points)
    lower = float(np.min(diag - 2.0 * abs(off)))
    guess = upper_guess if upper_guess is not None else lower + abs(off) * 1e-3
    energies = lowest_two(diag.tolist(), off * off, lower, guess)
    vecs = []
    rng = np.random.default_rng(0)
    for e in energies:
        banded = np.zeros((3, len(x)))
        banded[0, 1:] = off
        banded[1] = diag - e * (1.0 + 4.0 * _EPS)
        banded[2, :-1] = off
        v = rng.standard_normal(len(x))
        for _ in range(iterations):
            v = solve_banded((1, 1), banded, v)
            v /= np.linalg.norm(v)
        if v[np.argmax(np.abs(v[: len(v) // 2]))] < 0:
            v = -v
        vecs.append(v)
    return Eigenvectors(x, vecs[0], vecs[1])


# --- classical orbits of the upturned potential ------------------------------

def turning_point(profile: PotentialProfile, E: float) -> float:
    """Root of ``V(q) = E`` between the barrier centre and the right well."""
    if not (0.0 < E < profile.v_max):
        raise EnergyOutOfRange(f"need 0 < E < v_max = {profile.v_max:.6g}, got E = {E!r}")
    return find_root(lambda q: float(profile.V(q)) - E, 0.0, profile.a)


def _excess(profile: PotentialProfile, E: float, qt: float) -> Callable:
    """``V(q) - E`` on ``[0, q_t]`` in the integration variable ``x = q_t - q``.

    Meant for ``integrate(..., complement=True)``: close to the turning point
    the difference is summed from the Taylor series about ``q_t`` so that it
    keeps full relative precision.
    """
    coeffs = [float(c) for c in profile.jet(qt, TAYLOR_ORDER).c]
    reach = TAYLOR_REACH * qt

    def excess(x, d):
        dist = np.where(d >= 0, d, x)
        q = np.where(d >= 0, qt - d, -d)
        out = np.asarray(profile.V(q) - E, dtype=float)
        near = dist < reach
        if np.any(near):
            s = -dist[near]
            acc = np.zeros_like(s)
            for c in reversed(coeffs[1:]):
                acc = (acc + c) * s
            out[near] = acc
        return np.maximum(out, 0.0)

    return excess


def action_exact(profile: PotentialProfile, E: float, cfg: QuadratureConfig = DEFAULT) -> float:
    qt = turning_point(profile, E)
    excess = _excess(profile, E, qt)
    m = profile.mass
    r = integrate(lambda x, d: np.sqrt(2.0 * m * excess(x, d)), 0.0, qt, cfg, complement=True)
    return 4.0 * r.value


def quarter_time_exact(profile: PotentialProfile, E: float, cfg: QuadratureConfig = DEFAULT) -> float:
    """Time from the turning point to the barrier centre on the upturned orbit."""
    qt = turning_point(profile, E)
    excess = _excess(profile, E, qt)
    r = integrate(lambda x, d: 1.0 / np.sqrt(excess(x, d)), 0.0, qt, cfg, complement=True)
    return math.sqrt(profile.mass / 2.0) * r.value


def period_exact(profile: PotentialProfile, E: float, cfg: QuadratureConfig = DEFAULT) -> float:
    return 4.0 * quarter_time_exact(profile, E, cfg)


def t1_exact(profile: PotentialProfile, E: float) -> float:
    """Matched upturned-oscillator duration over momenta ``0..P`` at energy ``E``."""
    m, w = profile.mass, profile.omega
    q_e = math.sqrt(2.0 * E / m) / w
    return math.asinh(profile.p_central / (m * w * q_e)) / w


@dataclass(frozen=True)
class EpsilonFit:
    epsilon: float
    samples: tuple[tuple[float, float], ...]
    converged: bool
    diagnostic: str


def fit_epsilon(
    profile: PotentialProfile,
    energies: Sequence[float],
    cfg: QuadratureConfig = DEFAULT,
    settle_tol: float = 0.01,
) -> EpsilonFit:
    """Energy constant from exact periods: ``eps_k = E_k exp(omega T(E_k) / 2)``.

    The samples are extrapolated to ``E -> 0`` with the residual model
    ``eps_k = eps + alpha E ln E + beta E`` (fewer terms for fewer samples).
    """
    energies = [float(e) for e in energies]
    if not energies:
        raise InvalidParameter("at least one energy is required")
    if any(b >= a for a, b in zip(energies, energies[1:])):
        raise InvalidParameter("energies must decrease toward 0")
    w = profile.omega
    samples = tuple((E, E * math.exp(w * period_exact(profile, E, cfg) / 2.0)) for E in energies)
    eps_k = np.array([s[1] for s in samples])
    E = np.array(energies)
    if len(samples) == 1:
        return EpsilonFit(float(eps_k[0]), samples, False, "single sample: no extrapolation")

    steps = np.abs(np.diff(eps_k))
    if len(steps) > 1 and np.any(steps[1:] >= steps[:-1]):
        raise NotConverging(f"epsilon samples are not settling: {eps_k.tolist()}")

    columns = [np.ones_like(E), E * np.log(E), E][: len(samples)]
    A = np.stack(columns, axis=1)
    coef, *_ = np.linalg.lstsq(A, eps_k, rcond=None)
    eps = float(coef[0])
    gap = abs(eps - eps_k[-1]) / abs(eps)
    converged = bool(len(samples) >= 3 and gap <= settle_tol)
    diagnostic = f"last sample differs from extrapolation by {gap:.3e} (relative)"
    return EpsilonFit(eps, samples, converged, diagnostic)


@dataclass(frozen=True)
class OracleReport:
    e0: float
    e1: float
    delta_e_exact: float
    delta_e_error: float
    epsilon_fit: float
    s_exact_samples: tuple[tuple[float, float], ...]
    t_exact_samples: tuple[tuple[float, float], ...]
    quarter_defect_samples: tuple[tuple[float, float], ...]
    epsilon_fit_converged: bool = field(default=False)


def default_energies(profile: PotentialProfile) -> list[float]:
    return [profile.v_max * f for f in (1e-2, 1e-3, 1e-4)]


def oracle_report(
    profile: PotentialProfile,
    grid: GridConfig = GridConfig(),
    energies: Sequence[float] | None = None,
    cfg: QuadratureConfig = DEFAULT,
) -> OracleReport:
    energies = list(energies) if energies is not None else default_energies(profile)
    pair = eigen_splitting(profile, grid)
    fit = fit_epsilon(profile, energies, cfg)
    s_samples = tuple((E, action_exact(profile, E, cfg)) for E in energies)
    t_samples = tuple((E, period_exact(profile, E, cfg)) for E in energies)
    q_samples = tuple((E, T / 4.0 - t1_exact(profile, E)) for E, T in t_samples)
    return OracleReport(
        e0=pair.e0,
        e1=pair.e1,
        delta_e_exact=pair.delta_e,
        delta_e_error=pair.error,
        epsilon_fit=fit.epsilon,
        s_exact_samples=s_samples,
        t_exact_samples=t_samples,
        quarter_defect_samples=q_samples,
        epsilon_fit_converged=fit.converged,
    )


def action_residuals(profile: PotentialProfile, s_samples, cfg: QuadratureConfig = DEFAULT) -> list[tuple[float, float]]:
    """``|S_exact - S0 - (2E/omega) ln(E/eps)| / E`` for each sample."""
    s0 = sc.separatrix_area(profile, cfg)
    eps = sc.epsilon_constant(profile, cfg)
    w = profile.omega
    return [(E, abs(S - s0 - 2.0 * E / w * math.log(E / eps)) / E) for E, S in s_samples]
