import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tunnelsplit import semiclassical as sc
from tunnelsplit.errors import BarrierTooLow, EnergyOutOfRange, MatchPointOutsideWell

from conftest import make

LN2 = math.log(2.0)


def test_quartic_constants(quartic):
    assert sc.separatrix_area(quartic) == pytest.approx(8 * math.sqrt(2) / 3, rel=1e-13)
    assert sc.time_defect(quartic) == pytest.approx(LN2 / math.sqrt(2), rel=1e-9)
    assert sc.epsilon_constant(quartic) == pytest.approx(64.0, rel=1e-9)


@pytest.mark.parametrize("L", [0.5, 2.0])
def test_length_scale(L):
    p = make(f"(q^2-{L}^2)^2")
    assert sc.time_defect(p) == pytest.approx(LN2 / (math.sqrt(2) * L), rel=1e-9)
    assert sc.epsilon_constant(p) == pytest.approx(64.0 * L**4, rel=1e-9)


def test_sextic_epsilon(sextic):
    assert sc.epsilon_constant(sextic) == pytest.approx(216.0, rel=1e-9)


def test_expanded_polynomial_agrees():
    p = make("q^4-2*q^2+1")
    assert sc.epsilon_constant(p) == pytest.approx(64.0, abs=1e-8)


def test_straight_separatrix_has_no_defect():
    m, w, a = 1.3, 2.1, 0.8

    def v_and_slope(q):
        return 0.5 * m * w * w * (a - q) ** 2, -m * w * w * (a - q)

    assert sc.defect_integral(v_and_slope, m, w, a, 0.0) == pytest.approx(0.0, abs=1e-10)


def test_quartic_time_budget(quartic):
    tb = sc.time_budget(quartic)
    w = math.sqrt(8.0)
    Q = math.sqrt(0.2 / w)
    assert tb.q_match == pytest.approx(Q, rel=1e-14)
    assert tb.t1_leading == pytest.approx(math.log(2 * math.sqrt(2) / (w * Q)) / w, rel=1e-14)
    assert tb.t1_leading == pytest.approx(0.468310, abs=5e-7)
    assert tb.period_eq7 == pytest.approx(3.833754, abs=5e-7)
    assert tb.t1_exact_harmonic > tb.t1_leading


def test_ground_splitting_chain(quartic):
    r = sc.ground_splitting(quartic)
    w = math.sqrt(8.0)
    E = 0.1 * w
    S = 8 * math.sqrt(2) / 3 + 2 * E / w * math.log(E / 64.0)
    de = math.sqrt(math.pi / math.e) * 0.2 * w / math.pi * math.exp(-S / 0.4)
    assert r.s_action == pytest.approx(S, rel=1e-10)
    assert r.delta_e == pytest.approx(de, rel=1e-9)
    assert r.e_plus - r.e_minus == pytest.approx(r.delta_e, rel=1e-9)
    assert r.flip_rate == pytest.approx(r.delta_e / (2 * math.pi * 0.2), rel=1e-14)
    assert r.period == pytest.approx(sc.time_budget(quartic).period_eq7, rel=1e-12)
    assert sc.splitting_closed_form(quartic) == pytest.approx(r.delta_e, rel=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.floats(1e-4, 0.5))
def test_integrated_action_derivative_is_period(E):
    p = make("(q^2-1)^2*(1+q^2/2)")
    h = 1e-6 * E
    dS = (sc.action_S_integrated(p, E + h) - sc.action_S_integrated(p, E - h)) / (2 * h)
    assert -dS == pytest.approx(sc.period_T(p, E), rel=1e-6)


def test_literal_and_integrated_actions_differ_by_2E_over_omega(quartic):
    E = 0.05
    diff = sc.action_S(quartic, E) - sc.action_S_integrated(quartic, E)
    assert diff == pytest.approx(2 * E / quartic.omega, rel=1e-12)


@pytest.mark.parametrize("upper", [0.5, 1.0, 3.0])
def test_harmonic_k_integral_closed_form(upper):
    m, w, hbar = 1.0, 2.0, 0.3
    Q = math.sqrt(hbar / (m * w))
    got = sc.k_integral(lambda u: 0.5 * m * w * w * u * u, m, hbar, 0.5 * hbar * w, Q, upper)
    assert got == pytest.approx(sc.harmonic_k_integral(m, w, hbar, upper), rel=1e-8)


def test_herring_lower_limits(quartic):
    lit = sc.splitting_wkb_direct(quartic, "literal")
    tp = sc.splitting_wkb_direct(quartic, "turning_point")
    # the quartic is softer than its harmonic fit, so the turning point lies
    # beyond Q and both choices start the integral there
    assert lit.k_integral == tp.k_integral
    assert lit.norm_sq == pytest.approx(tp.norm_sq)
    with pytest.raises(ValueError):
        sc.splitting_wkb_direct(quartic, "bogus")


def test_energy_and_barrier_errors(quartic):
    with pytest.raises(EnergyOutOfRange):
        sc.action_S(quartic, 1.5)
    with pytest.raises(EnergyOutOfRange):
        sc.period_T(quartic, 0.0)
    with pytest.raises(BarrierTooLow):
        sc.ground_splitting(quartic.with_hbar(10.0))
    with pytest.raises(MatchPointOutsideWell):
        sc.time_budget(quartic.with_hbar(3.0))


def test_splitting_decreases_with_hbar(quartic):
    values = [sc.ground_splitting(quartic.with_hbar(h)).delta_e for h in (0.4, 0.3, 0.2, 0.1)]
    assert all(b < a for a, b in zip(values, values[1:]))
