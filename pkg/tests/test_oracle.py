import math

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from tunnelsplit import oracle
from tunnelsplit import semiclassical as sc
from tunnelsplit.errors import BoxTooSmall, EnergyOutOfRange, InvalidParameter, NoSeparation

from conftest import make


def agm_elliptic(m):
    """Complete elliptic integrals K(m), E(m) (parameter m = k^2) by the AGM."""
    a, b = 1.0, math.sqrt(1.0 - m)
    c_sum, power = 0.5 * m, 0.5
    for _ in range(40):
        c = 0.5 * (a - b)
        if c <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        power *= 2.0
        c_sum += power * c * c
    K = math.pi / (2.0 * a)
    return K, K * (1.0 - c_sum)


def quartic_action_elliptic(E):
    b2, c2 = 1.0 - math.sqrt(E), 1.0 + math.sqrt(E)
    K, Ek = agm_elliptic(b2 / c2)
    return 4.0 * math.sqrt(2.0) * math.sqrt(c2) / 3.0 * ((c2 + b2) * Ek - (c2 - b2) * K)


def test_agm_against_known_values():
    K, E = agm_elliptic(0.5)
    assert K == pytest.approx(1.8540746773013719, rel=1e-15)
    assert E == pytest.approx(1.3506438810476755, rel=1e-15)


@pytest.mark.parametrize("E", [0.5, 0.1, 0.01])
def test_action_matches_elliptic(quartic, E):
    assert oracle.action_exact(quartic, E) == pytest.approx(quartic_action_elliptic(E), rel=1e-10)


def test_action_tends_to_separatrix_area(quartic):
    assert oracle.action_exact(quartic, 1e-9) == pytest.approx(sc.separatrix_area(quartic), rel=1e-7)


def test_harmonic_levels():
    pair, _ = oracle.lowest_levels(lambda q: 0.5 * q * q, 1.0, 1.0, 12.0, 4096, 3, upper_guess=2.0)
    assert pair.e0 == pytest.approx(0.5, abs=1e-8)
    assert pair.e1 == pytest.approx(1.5, abs=1e-8)


def test_sturm_against_lapack():
    x, diag, off = oracle._hamiltonian(lambda q: (q * q - 1) ** 2, 1.0, 0.3, 3.0, 512)
    ref = eigh_tridiagonal(diag, np.full(len(diag) - 1, off), eigvals_only=True)
    for lam in (ref[0] - 1e-3, 0.5 * (ref[0] + ref[1]), 0.5 * (ref[4] + ref[5]), ref[-1] + 1.0):
        assert oracle.sturm_count(diag.tolist(), off * off, lam) == int(np.sum(ref < lam))
    lower = float(np.min(diag - 2 * abs(off)))
    e0, e1 = oracle.lowest_two(diag.tolist(), off * off, lower, 1.0)
    assert (e0, e1) == pytest.approx(tuple(ref[:2]), rel=1e-12)


def test_second_order_grid_convergence(quartic):
    p = quartic.with_hbar(0.3)
    L = oracle.default_box(p)
    _, raw = oracle.lowest_levels(p.V, 1.0, 0.3, L, 256, 4, upper_guess=1.0)
    e0 = [r[0] for r in raw]
    ratio = (e0[1] - e0[0]) / (e0[2] - e0[1])
    assert 3.0 <= ratio <= 5.0


def test_quartic_splitting_and_error_bar(quartic):
    pair = oracle.eigen_splitting(quartic)
    assert pair.delta_e == pytest.approx(3.4229880887627e-4, rel=1e-8)
    assert pair.error < 1e-9 * 1e3 * pair.delta_e


def test_no_separation_at_tiny_hbar(quartic):
    with pytest.raises(NoSeparation):
        oracle.eigen_splitting(quartic.with_hbar(0.05))


def test_box_checks(quartic):
    with pytest.raises(BoxTooSmall):
        oracle.eigen_splitting(quartic, oracle.GridConfig(box_half_width=0.9))
    with pytest.raises(BoxTooSmall):
        oracle.eigen_splitting(quartic, oracle.GridConfig(box_half_width=1.2))
    with pytest.raises(InvalidParameter):
        oracle.GridConfig(n_points=8)


def test_parity(quartic):
    p = quartic.with_hbar(0.3)
    vec = oracle.eigenvectors(p.V, 1.0, 0.3, oracle.default_box(p), 2048, upper_guess=1.0)
    g, e = vec.ground, vec.excited
    assert np.allclose(g, g[::-1], atol=1e-8)
    assert np.allclose(e, -e[::-1], atol=1e-8)
    assert abs(float(g @ e)) < 1e-8
    assert np.all(g > -1e-12)


def test_period_derivative_of_action(sextic):
    E, h = 0.1, 1e-5
    dS = (oracle.action_exact(sextic, E + h) - oracle.action_exact(sextic, E - h)) / (2 * h)
    assert -dS == pytest.approx(oracle.period_exact(sextic, E), rel=1e-7)


def test_period_at_barrier_top(quartic):
    # near the top of the upturned barrier the orbit is a small harmonic oscillation
    w_top = math.sqrt(4.0)
    assert oracle.period_exact(quartic, 0.999999) == pytest.approx(2 * math.pi / w_top, rel=1e-5)


def test_turning_point(quartic):
    E = 0.3
    assert oracle.turning_point(quartic, E) == pytest.approx(math.sqrt(1 - math.sqrt(E)), rel=1e-14)
    with pytest.raises(EnergyOutOfRange):
        oracle.turning_point(quartic, 1.0)


@pytest.mark.parametrize("text, eps", [("(q^2-1)^2", 64.0), ("(q^2-1)^2*(1+q^2/2)", 216.0)])
def test_fit_epsilon(text, eps):
    p = make(text)
    fit = oracle.fit_epsilon(p, oracle.default_energies(p))
    assert fit.converged is True
    assert fit.epsilon == pytest.approx(eps, rel=1e-4)


def test_fit_single_sample(quartic):
    fit = oracle.fit_epsilon(quartic, [1e-4])
    assert fit.converged is False
    assert fit.epsilon == pytest.approx(64.0, rel=1e-2)


def test_fit_input_validation(quartic):
    with pytest.raises(InvalidParameter):
        oracle.fit_epsilon(quartic, [])
    with pytest.raises(InvalidParameter):
        oracle.fit_epsilon(quartic, [1e-4, 1e-3])


def test_oracle_report(quartic):
    rep = oracle.oracle_report(quartic)
    assert rep.delta_e_exact == pytest.approx(rep.e1 - rep.e0, rel=1e-6)
    assert rep.epsilon_fit_converged
    gaps = [abs(d - sc.time_defect(quartic)) for _, d in rep.quarter_defect_samples]
    assert gaps == sorted(gaps, reverse=True)
