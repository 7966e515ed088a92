import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from giantqed.core import (
    IncidentPair,
    PoleLabel,
    ThreeLevelParams,
    TwoLevelParams,
    gamma_pm,
    gamma_prime,
    lambda_pair,
    poles,
    principal_sqrt,
    two_level_pole,
)
from giantqed.errors import DegenerateParameters, RequiresResonance

PI = math.pi


def unordered_close(pair, expected, tol):
    a, b = pair
    e1, e2 = expected

    def close(z, w):
        return abs(z.real - w.real) <= tol and abs(z.imag - w.imag) <= tol

    return (close(a, e1) and close(b, e2)) or (close(a, e2) and close(b, e1))


@pytest.mark.parametrize(
    "theta, expected",
    [(0.0, 2 + 0j), (PI, 0j), (PI / 2, 1 + 1j)],
)
def test_gamma_prime_examples(theta, expected):
    assert abs(gamma_prime(TwoLevelParams(100, 1, theta)) - expected) < 1e-15


@given(st.floats(-20, 20), st.floats(0.01, 10))
def test_gamma_prime_bounds(theta, gamma):
    gp = gamma_prime(TwoLevelParams(0.0, gamma, theta))
    assert gp.real >= -1e-15
    assert abs(gp) <= 2 * gamma * (1 + 1e-15)


def test_principal_sqrt_examples():
    assert principal_sqrt(4) == 2
    assert principal_sqrt(-4 + 0j) == 2j
    assert principal_sqrt(complex(-4, -0.0)) == 2j
    # exact value 1.06432 - 0.93956i; the 4-decimal reference is rounded loosely
    r = principal_sqrt(0.25 - 2j)
    assert abs(r.real - 1.0644) < 2e-4 and abs(r.imag + 0.9394) < 2e-4


@given(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False))
def test_principal_sqrt_branch(z):
    r = principal_sqrt(z)
    assert abs(r * r - z) <= 1e-12 * max(abs(z), 1)
    assert r.real >= 0
    if r.real == 0:
        assert r.imag >= 0


@pytest.mark.parametrize(
    "theta, expected",
    [(0.0, (100, 2)), (PI / 2, (101, 1)), (PI, (100, 0))],
)
def test_two_level_pole(theta, expected):
    w, g = two_level_pole(TwoLevelParams(100, 1, theta))
    assert w == pytest.approx(expected[0], abs=1e-12)
    assert g == pytest.approx(expected[1], abs=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.3, PI / 2, 2.0])
def test_lambda_pair_without_control(theta):
    p = ThreeLevelParams(100, 1, theta, omega_rabi=0.0)
    gp = gamma_prime(p)
    assert unordered_close(lambda_pair(p), (100 + 0j, 100 - 1j * gp), 1e-12)


@pytest.mark.parametrize(
    "theta, expected, tol",
    [
        (0.5 * PI, (101.032 - 0.970j, 99.968 - 0.030j), 0.0005),
        (0.85 * PI, (100.56 - 0.091j, 99.89 - 0.017j), 0.005),
    ],
)
def test_lambda_pair_reference_values(theta, expected, tol):
    p = ThreeLevelParams(100, 1, theta, omega_rabi=0.5)
    assert unordered_close(lambda_pair(p), expected, tol)


def test_lambda_branch_swaps_labels():
    p = ThreeLevelParams(100, 1, 0.4, omega_rabi=0.7, delta=0.3)
    l1, l2 = lambda_pair(p)
    m1, m2 = lambda_pair(p, branch=-1)
    assert (l1, l2) == (m2, m1)


def test_gamma_pm_matches_lambda_at_resonance():
    p = ThreeLevelParams(100, 1, 0.5 * PI, omega_rabi=0.5)
    assert np.allclose(gamma_pm(p), lambda_pair(p), atol=1e-13)


def test_gamma_pm_reference_075():
    p = ThreeLevelParams(100, 1, 0.75 * PI, omega_rabi=0.5)
    assert unordered_close(gamma_pm(p), (100.78 - 0.27j, 99.928 - 0.025j), 0.005)


def test_gamma_pm_without_control():
    assert unordered_close(gamma_pm(ThreeLevelParams(100, 1, 0.0, 0.0)), (100 + 0j, 100 - 2j), 1e-12)


def test_gamma_pm_errors():
    with pytest.raises(RequiresResonance):
        gamma_pm(ThreeLevelParams(100, 1, 0.0, 0.5, delta=0.1))
    with pytest.raises(DegenerateParameters):
        gamma_pm(ThreeLevelParams(100, 1, 0.0, omega_rabi=2.0))


@given(st.floats(0, 2 * PI), st.floats(0, 10))
def test_pole_sum_rule(theta, rabi):
    p = ThreeLevelParams(100, 1, theta, rabi)
    try:
        gp, gm = gamma_pm(p)
    except DegenerateParameters:
        return
    assert abs(gp + gm - (200 - 1j * gamma_prime(p))) < 1e-12 * 200


@given(st.floats(0, 2 * PI).filter(lambda t: abs(t - PI) > 1e-6), st.floats(0, 10))
def test_poles_lie_in_lower_half_plane(theta, rabi):
    p = ThreeLevelParams(100, 1, theta, rabi)
    try:
        for pole in gamma_pm(p):
            assert pole.imag <= 1e-12
    except DegenerateParameters:
        pass


def test_large_rabi_limit():
    p = ThreeLevelParams(100, 1, 0.3, omega_rabi=100.0)
    gp = gamma_prime(p)
    plus, minus = gamma_pm(p)
    for pole, sign in ((plus, 1), (minus, -1)):
        target = 100 + sign * 50 - 0.5j * gp
        assert abs(pole.real - target.real) < 5e-2
        assert abs(pole.imag - target.imag) < 5e-2


@settings(max_examples=50)
@given(st.floats(-10, 10), st.floats(0, 5))
def test_two_pi_periodicity(theta, rabi):
    a = ThreeLevelParams(100, 1, theta, rabi)
    b = ThreeLevelParams(100, 1, theta + 2 * PI, rabi)
    assert abs(gamma_prime(a) - gamma_prime(b)) <= 1e-12 * 2
    try:
        pa, pb = gamma_pm(a), gamma_pm(b)
    except DegenerateParameters:
        return
    # on the branch cut (rabi^2 - Gamma'^2 real and negative) rounding in
    # sin(theta) may swap the labels, so compare the pole pair as a set
    assert unordered_close(pa, pb, 1e-12 * 100)


def test_incident_pair_derived():
    pair = IncidentPair(100.3, 99.1)
    assert pair.E == 100.3 + 99.1
    assert pair.delta1 == (100.3 - 99.1) / 2
    assert IncidentPair.equal(3.0) == IncidentPair(3.0, 3.0)


def test_param_validation():
    with pytest.raises(ValueError):
        TwoLevelParams(100, 0.0, 0.0)
    with pytest.raises(ValueError):
        TwoLevelParams(100, 1.0, math.inf)
    with pytest.raises(ValueError):
        ThreeLevelParams(100, 1.0, 0.0, omega_rabi=-1)
    p = ThreeLevelParams(100, 1.0, 0.2, 0.5)
    assert p.two_level() == TwoLevelParams(100, 1.0, 0.2)
    assert p.coupling == pytest.approx(math.sqrt(2))


def test_pole_records():
    two = poles(TwoLevelParams(100, 1, PI / 2))
    assert two[0].label is PoleLabel.TWO_LEVEL
    assert two[0].location == pytest.approx(101 - 1j)
    three = poles(ThreeLevelParams(100, 1, 0.5, 0.5))
    assert [p.label for p in three] == [PoleLabel.GAMMA_PLUS, PoleLabel.GAMMA_MINUS]
    detuned = poles(ThreeLevelParams(100, 1, 0.5, 0.5, delta=0.2))
    assert [p.label for p in detuned] == [PoleLabel.LAMBDA1, PoleLabel.LAMBDA2]
    assert cmath.isfinite(detuned[0].location)
