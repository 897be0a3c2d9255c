import pytest

from tunnelsplit import PhysicalContext, analyze_profile, parse_potential


def make(text, hbar=0.2, mass=1.0):
    return analyze_profile(parse_potential(text), PhysicalContext(mass, hbar), text=text)


@pytest.fixture
def quartic():
    return make("(q^2-1)^2")


@pytest.fixture
def sextic():
    return make("(q^2-1)^2*(1+q^2/2)")
