import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tunnelsplit.errors import ExpressionSyntaxError, NonIntegerExponent, UnknownFunction
from tunnelsplit.expr import evaluate, parse_potential, polynomial
from tunnelsplit.jets import Jet


@pytest.mark.parametrize(
    "text, q, expected",
    [
        ("(q^2-1)^2", 0.5, 0.5625),
        ("q^4-2*q^2+1", 2.0, 9.0),
        ("-q^2", 3.0, -9.0),
        ("2^-1", 0.0, 0.5),
        ("exp(q)*cosh(q)-cos(q)", 0.3, math.exp(0.3) * math.cosh(0.3) - math.cos(0.3)),
        ("1.5e-1*q", 2.0, 0.3),
        ("q/2/2", 8.0, 2.0),
        ("1-2-3", 0.0, -4.0),
    ],
)
def test_evaluate(text, q, expected):
    assert evaluate(parse_potential(text), q) == pytest.approx(expected, rel=1e-15)


def test_unary_minus_binds_looser_than_power():
    assert evaluate(parse_potential("-q^2"), 2.0) == -4.0


@pytest.mark.parametrize(
    "text, exc",
    [("q^^2", ExpressionSyntaxError), ("sin(q)", UnknownFunction), ("q^0.5", NonIntegerExponent),
     ("(q", ExpressionSyntaxError), ("q $", ExpressionSyntaxError), ("", ExpressionSyntaxError)],
)
def test_errors(text, exc):
    with pytest.raises(exc):
        parse_potential(text)


def test_error_position():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_potential("q^^2")
    assert info.value.position == 2


def test_str_round_trip():
    node = parse_potential("(q^2-1)^2*(1+q^2/2)-exp(-q)")
    again = parse_potential(str(node))
    xs = np.linspace(-2, 2, 17)
    assert np.array_equal(evaluate(node, xs), evaluate(again, xs))


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6), st.floats(-2, 2))
def test_polynomial_matches_horner(coeffs, q):
    expected = 0.0
    for c in reversed(coeffs):
        expected = expected * q + c
    got = evaluate(polynomial(coeffs), q)
    assert got == pytest.approx(expected, rel=1e-12, abs=1e-12)


@given(st.floats(-1.5, 1.5))
def test_jet_derivatives_match_finite_differences(q0):
    node = parse_potential("(q^2-1)^2*(1+q^2/2)+cosh(q)/exp(q^2)")
    jet = evaluate(node, Jet.variable(q0, 2))
    h = 1e-4
    f = lambda x: evaluate(node, x)
    d1 = (f(q0 + h) - f(q0 - h)) / (2 * h)
    d2 = (f(q0 + h) - 2 * f(q0) + f(q0 - h)) / h**2
    assert float(jet.derivative(0)) == pytest.approx(f(q0), rel=1e-14, abs=1e-14)
    assert float(jet.derivative(1)) == pytest.approx(d1, rel=1e-6, abs=1e-6)
    assert float(jet.derivative(2)) == pytest.approx(d2, rel=1e-4, abs=1e-4)
