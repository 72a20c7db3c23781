import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from steklovqc.errors import DivergentIntegral, DomainError, PossiblyDivergent
from steklovqc.geometry import conformal_weight
from steklovqc.numerics import (PeriodicSamples, SingularityTag, beta_fn, elliptic_E, gamma_fn,
                                graded_quadrature, integrate_periodic, periodic_trapezoid)


def agm_E(k):
    """Complete elliptic integral E(k) by the arithmetic-geometric mean."""
    a, b = 1.0, math.sqrt(1.0 - k * k)
    c2sum, power = 0.5 * k * k, 0.5
    while abs(a - b) > 4e-16 * a:
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        power *= 2.0
        c2sum += power * c * c
    return math.pi / (2.0 * a) * (1.0 - c2sum)


def test_trapezoid_constant():
    assert periodic_trapezoid(PeriodicSamples(np.ones(16))) == pytest.approx(2 * math.pi, abs=1e-14)


def test_trapezoid_cos_squared():
    f = PeriodicSamples.from_function(lambda t: np.cos(t) ** 2, 64)
    assert periodic_trapezoid(f) == pytest.approx(math.pi, abs=1e-14)


def test_trapezoid_hippopede_perimeter_vs_adaptive():
    f = lambda t: np.sqrt(np.sin(t) ** 2 + 0.25 * np.cos(t) ** 2)
    ref, _ = integrate.quad(f, 0, 2 * math.pi, epsabs=1e-14, epsrel=1e-14, limit=200)
    assert periodic_trapezoid(PeriodicSamples.from_function(f, 2048)) == pytest.approx(ref, abs=1e-10)


@given(st.integers(1, 15), st.lists(st.floats(-3, 3), min_size=32, max_size=32))
def test_trapezoid_exact_on_trig_polynomials(deg, coef):
    a = np.array(coef[: deg + 1])
    b = np.array(coef[16: 16 + deg + 1])
    k = np.arange(deg + 1)
    f = lambda t: np.cos(np.outer(t, k)) @ a + np.sin(np.outer(t, k)) @ b
    assert periodic_trapezoid(PeriodicSamples.from_function(f, 32)) == pytest.approx(2 * math.pi * a[0], abs=1e-13)


def test_samples_validation():
    with pytest.raises(ValueError):
        PeriodicSamples(np.ones(4))
    with pytest.raises(ValueError):
        PeriodicSamples(np.array([1.0] * 7 + [np.nan]))


def test_graded_sqrt_endpoint():
    tag = SingularityTag((0.0,), -0.5)
    assert graded_quadrature(lambda t: t**-0.5, tag, interval=(0.0, 1.0)) == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("alpha", [-0.8, -0.5, -0.2, 0.3])
def test_graded_reaches_eight_digits(alpha):
    tag = SingularityTag((0.0,), alpha)
    val = graded_quadrature(lambda t: t**alpha * np.exp(t), tag, interval=(0.0, 1.0), n_max=4096)
    ref = _lower(alpha)
    assert val == pytest.approx(ref, rel=1e-8)


def _lower(alpha):
    # int_0^1 t^alpha e^t dt = sum_k 1 / (k! (k + alpha + 1))
    return sum(1.0 / (math.factorial(k) * (k + alpha + 1)) for k in range(40))


def test_polygon_weight_mean_is_beta():
    p = conformal_weight("polygon", 5)
    tag = p.singularity
    raw = lambda t: np.abs(np.sin(2.5 * t)) ** (-0.4)
    mean = graded_quadrature(raw, tag) / (2 * math.pi)
    assert mean == pytest.approx(beta_fn(0.3, 0.5) / math.pi, rel=1e-10)


def test_polygon_weight_square_diverges_for_square():
    tag = SingularityTag(tuple(2 * math.pi * k / 4 for k in range(4)), -1.0)
    with pytest.raises(DivergentIntegral):
        graded_quadrature(lambda t: np.abs(np.sin(2 * t)) ** -1.0, tag)


@pytest.mark.parametrize("alpha, diverges", [(-1.2, True), (-1.0, True), (-0.9, False)])
def test_divergence_flag_exactly_at_minus_one(alpha, diverges):
    tag = SingularityTag((0.0,), alpha)
    f = lambda t: t**alpha
    if diverges:
        with pytest.raises(DivergentIntegral):
            graded_quadrature(f, tag, interval=(0.0, 1.0))
    else:
        assert graded_quadrature(f, tag, interval=(0.0, 1.0)) == pytest.approx(1 / (alpha + 1), rel=1e-8)


def test_untagged_growth_reported_as_possibly_divergent():
    f = lambda t: 1.0 / np.abs(np.sin((t - 0.1234567) / 2))
    with pytest.raises(PossiblyDivergent):
        integrate_periodic(f)


@pytest.mark.parametrize("f", [lambda t: np.exp(np.cos(t)), lambda t: 1 / (2 + np.sin(3 * t)),
                               lambda t: np.sqrt(np.sin(t) ** 2 + 0.1 * np.cos(t) ** 2)])
def test_graded_matches_trapezoid_on_smooth(f):
    a = graded_quadrature(f, None)
    b = periodic_trapezoid(PeriodicSamples.from_function(f, 4096))
    assert a == pytest.approx(b, abs=1e-10)


def test_special_values():
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert elliptic_E(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert elliptic_E(1 / math.sqrt(2)) == pytest.approx(1.3506438810476755, rel=1e-13)
    assert elliptic_E(1 / math.sqrt(2)) == pytest.approx(agm_E(1 / math.sqrt(2)), rel=1e-13)


@given(st.floats(0.0, 0.999))
def test_elliptic_E_matches_agm(k):
    assert elliptic_E(k) == pytest.approx(agm_E(k), rel=1e-12)


def test_beta_gamma_identity_on_grid():
    grid = np.linspace(0.1, 5.0, 25)
    for a in grid:
        for b in grid:
            assert beta_fn(a, b) == pytest.approx(gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b), rel=1e-12)


@pytest.mark.parametrize("call", [lambda: gamma_fn(0.0), lambda: gamma_fn(-1.5), lambda: beta_fn(0.0, 1.0),
                                  lambda: beta_fn(1.0, -2.0), lambda: elliptic_E(1.0), lambda: elliptic_E(-0.1)])
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()
