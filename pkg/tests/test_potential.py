import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tunnelsplit import PhysicalContext, analyze_profile, eval_with_derivatives, parse_potential
from tunnelsplit.errors import (
    AsymmetricPotential,
    InvalidParameter,
    MultipleBarriers,
    NotDoubleWell,
)
from tunnelsplit.potential import scaled

from conftest import make


def test_unit_quartic_profile(quartic):
    assert quartic.a == pytest.approx(1.0, rel=1e-14)
    assert quartic.v_max == pytest.approx(1.0, rel=1e-14)
    assert quartic.shift == pytest.approx(0.0, abs=1e-14)
    assert quartic.omega == pytest.approx(math.sqrt(8.0), rel=1e-13)
    assert quartic.p_central == pytest.approx(math.sqrt(2.0), rel=1e-14)


def test_shifted_minimum_is_moved_to_zero():
    p = make("(q^2-1)^2 + 3")
    assert p.shift == pytest.approx(3.0)
    assert p.v_max == pytest.approx(1.0, rel=1e-12)
    assert float(p.V(p.a)) == pytest.approx(0.0, abs=1e-12)


def test_eval_with_derivatives():
    v, d1, d2 = eval_with_derivatives(parse_potential("(q^2-1)^2"), 0.5)
    assert (v, d1, d2) == pytest.approx((0.5625, 4 * 0.5 * (0.25 - 1), 12 * 0.25 - 4))


@pytest.mark.parametrize(
    "text, exc",
    [
        ("q^2", NotDoubleWell),
        ("q^3", AsymmetricPotential),
        ("(q^2-1)^2 + q", AsymmetricPotential),
        ("(q^2-1)^2*(q^2-4)^2", MultipleBarriers),
    ],
)
def test_rejections(text, exc):
    with pytest.raises(exc):
        make(text)


@pytest.mark.parametrize("mass, hbar", [(0.0, 1.0), (1.0, -1.0), (float("nan"), 1.0)])
def test_context_validation(mass, hbar):
    with pytest.raises(InvalidParameter):
        PhysicalContext(mass, hbar)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 5.0))
def test_scaling_invariants(c):
    base = make("(q^2-1)^2")
    p = analyze_profile(scaled(parse_potential("(q^2-1)^2"), c), PhysicalContext(1.0, 0.2))
    assert p.a == pytest.approx(base.a, rel=1e-12)
    assert p.v_max == pytest.approx(c * base.v_max, rel=1e-12)
    assert p.omega == pytest.approx(math.sqrt(c) * base.omega, rel=1e-12)
    assert p.p_central == pytest.approx(math.sqrt(c) * base.p_central, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.3, 3.0))
def test_well_position_tracks_length_scale(L):
    p = make(f"(q^2-{L!r}^2)^2")
    assert p.a == pytest.approx(L, rel=1e-12)
    assert p.v_max == pytest.approx(L**4, rel=1e-11)


def test_reanalysis_is_idempotent(sextic):
    again = analyze_profile(parse_potential(str(sextic.expr)), PhysicalContext(1.0, 0.2))
    for name in ("a", "v_max", "omega", "p_central", "shift"):
        assert getattr(again, name) == pytest.approx(getattr(sextic, name), rel=1e-14, abs=1e-15)


def test_with_hbar(quartic):
    p = quartic.with_hbar(0.05)
    assert p.hbar == 0.05 and p.a == quartic.a and p.omega == quartic.omega


def test_vectorized_V(quartic):
    q = np.linspace(-1.5, 1.5, 7)
    assert np.allclose(quartic.V(q), (q * q - 1) ** 2)
