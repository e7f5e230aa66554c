import math
import warnings

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from relheat.errors import DegreeError, DomainError
from relheat.specfun import (
    PolyFamily,
    bessel_k1,
    bessel_poly,
    bessel_poly_coefficients,
    levy_smirnov,
    orth_poly,
    orth_poly_table,
    tilted_levy_density,
)


def quad_inf(f, **kw):
    return integrate.quad(f, 0, np.inf, limit=200, epsabs=1e-14, epsrel=1e-13, **kw)[0]


# -- Levy-Smirnov density ------------------------------------------------------


def test_levy_smirnov_values():
    assert levy_smirnov(0.0) == 0.0
    np.testing.assert_allclose(levy_smirnov(0.25), 4 * math.exp(-1) / math.sqrt(math.pi), rtol=1e-15)
    with pytest.raises(DomainError):
        levy_smirnov(-1e-3)


def test_levy_smirnov_mode_at_one_sixth():
    xi = np.linspace(0.01, 1.0, 99001)
    assert abs(xi[np.argmax(levy_smirnov(xi))] - 1 / 6) < 1e-5


def test_levy_smirnov_normalized():
    # substitution xi = 1/(4 s^2) removes the essential singularity
    val = quad_inf(lambda s: levy_smirnov(0.25 / s**2) * 0.5 / s**3)
    assert abs(val - 1.0) < 1e-10


@pytest.mark.parametrize("p", [0.25, 1.0, 4.0, 9.0])
def test_laplace_identity(p):
    val = quad_inf(lambda xi: levy_smirnov(xi) * math.exp(-p * xi), points=None)
    assert abs(val - math.exp(-math.sqrt(p))) < 1e-9


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0, 5.0])
def test_tilted_density_normalized(t):
    val = quad_inf(lambda y: tilted_levy_density(y, t))
    assert abs(val - 1.0) < 1e-9


def test_tilted_density_mean_and_domain():
    mean = quad_inf(lambda y: y * tilted_levy_density(y, 1.0))
    np.testing.assert_allclose(mean, 0.5, rtol=1e-10)
    assert tilted_levy_density(0.0, 1.0) == 0.0
    with pytest.raises(DomainError):
        tilted_levy_density(1.0, 0.0)


def test_tilted_density_large_t_no_overflow():
    assert np.isfinite(tilted_levy_density(1 / 1600, 800.0))


# -- Bessel polynomials --------------------------------------------------------


def test_bessel_poly_low_degrees():
    t = np.linspace(-2, 3, 11)
    np.testing.assert_array_equal(bessel_poly(0, t), np.ones_like(t))
    np.testing.assert_allclose(bessel_poly(1, t), t, rtol=0, atol=1e-15)
    np.testing.assert_allclose(bessel_poly(2, t), t + t**2, rtol=1e-15, atol=1e-15)
    np.testing.assert_allclose(bessel_poly(3, t), 3 * t + 3 * t**2 + t**3, rtol=1e-14, atol=1e-14)


def _generating_coefficients(n_max):
    t, z = sp.symbols("t z")
    series = sp.series(sp.exp(t * (1 - sp.sqrt(1 - 2 * z))), z, 0, n_max + 1).removeO()
    return [sp.Poly(sp.expand(series.coeff(z, n) * sp.factorial(n)), t) for n in range(n_max + 1)], t


def test_carlitz_matches_generating_function():
    polys, t = _generating_coefficients(10)
    for n, poly in enumerate(polys):
        for tv in (0.3, 1.0, 2.5):
            expected = float(poly.eval(tv))
            assert abs(bessel_poly(n, tv) - expected) <= 1e-10 * max(1.0, abs(expected))


@pytest.mark.parametrize("t", [0.5, 1.0])
@pytest.mark.parametrize("z", [0.05, 0.1])
def test_generating_function_sum(t, z):
    total = sum(z**n * bessel_poly(n, t) / math.factorial(n) for n in range(41))
    assert abs(total - math.exp(t * (1 - math.sqrt(1 - 2 * z)))) < 1e-10


@pytest.mark.parametrize("n", [0, 1, 2, 3])
@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_moment_identity(n, t):
    moment = quad_inf(lambda y: y**n * tilted_levy_density(y, t))
    expected = bessel_poly(n, t) / (2 * t * t) ** n
    assert abs(moment - expected) < 1e-8 * max(1.0, expected)


def test_bessel_coefficients_exact_and_cached():
    assert bessel_poly_coefficients(3) == (0, 3, 3, 1)
    assert bessel_poly_coefficients(40) is bessel_poly_coefficients(40)
    with pytest.raises(DegreeError):
        bessel_poly(201, 1.0)
    with pytest.raises(DegreeError):
        bessel_poly(-1, 1.0)


# -- orthogonal polynomials ----------------------------------------------------


def test_orth_poly_degree_zero_and_two():
    for fam in ("HermitePhysicists", "ChebyshevU", "LegendreP"):
        assert orth_poly(PolyFamily(fam, 0), 0.3) == 1.0
    assert orth_poly(PolyFamily("HermitePhysicists", 2), 0.0) == -2.0
    assert orth_poly(PolyFamily("LegendreP", 2), 0.0) == -0.5
    assert orth_poly(PolyFamily("ChebyshevU", 2), 0.0) == -1.0


@given(st.floats(-1, 1))
def test_recurrences_match_closed_forms(x):
    h = orth_poly_table("HermitePhysicists", 4, x)
    u = orth_poly_table("ChebyshevU", 4, x)
    p = orth_poly_table("LegendreP", 4, x)
    np.testing.assert_allclose(h, special.eval_hermite(np.arange(5), x), rtol=1e-14, atol=1e-14)
    np.testing.assert_allclose(u, special.eval_chebyu(np.arange(5), x), rtol=1e-14, atol=1e-14)
    np.testing.assert_allclose(p, special.eval_legendre(np.arange(5), x), rtol=1e-14, atol=1e-14)


def test_hermite_derivative_identity():
    x, h = 0.7, 1e-3

    def g(v):
        return orth_poly_table("HermitePhysicists", 1, v)[1] * np.exp(-v * v)

    second = (-g(x + 2 * h) + 16 * g(x + h) - 30 * g(x) + 16 * g(x - h) - g(x - 2 * h)) / (12 * h * h)
    expected = orth_poly_table("HermitePhysicists", 3, x)[3] * math.exp(-x * x)
    np.testing.assert_allclose(second, expected, rtol=1e-8)


def test_outside_unit_interval_is_flagged():
    with pytest.warns(RuntimeWarning):
        orth_poly_table("LegendreP", 3, 1.5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        orth_poly_table("HermitePhysicists", 3, 5.0)


def test_poly_family_validation():
    with pytest.raises(ValueError):
        PolyFamily("Laguerre", 2)
    with pytest.raises(DegreeError):
        PolyFamily("LegendreP", 300)


# -- K1 ------------------------------------------------------------------------


def _k1_integral(z):
    # the integrand is below 1e-300 once z cosh(u) exceeds ~700
    upper = math.acosh(max(1.0, 720.0 / z))
    return integrate.quad(
        lambda u: math.exp(-z * math.cosh(u)) * math.cosh(u), 0, upper, limit=200, epsabs=0, epsrel=1e-13
    )[0]


@pytest.mark.parametrize("z", [0.05, 0.5, 1.0, 1.99, 2.01, 5.0, 30.0])
def test_k1_against_integral_representation(z):
    np.testing.assert_allclose(bessel_k1(z), _k1_integral(z), rtol=1e-10)


def test_k1_reference_value():
    np.testing.assert_allclose(bessel_k1(1.0), 0.6019072302, rtol=1e-10)


def test_k1_range_against_scipy():
    z = np.geomspace(1e-6, 700, 5000)
    np.testing.assert_allclose(bessel_k1(z), special.k1(z), rtol=1e-10)


def test_k1_limits():
    np.testing.assert_allclose(1e-8 * bessel_k1(1e-8), 1.0, rtol=1e-12)
    z = 50.0
    assert abs(bessel_k1(z) * math.sqrt(2 * z / math.pi) * math.exp(z) - 1) < 1e-2
    assert abs(bessel_k1(z) * math.sqrt(2 * z / math.pi) * math.exp(z) - (1 + 3 / (8 * z))) < 1e-3
    assert bessel_k1(1e-310) == np.inf
    assert bessel_k1(800.0) == 0.0
    with pytest.raises(DomainError):
        bessel_k1(0.0)


@settings(max_examples=200)
@given(st.floats(1e-6, 700))
def test_k1_positive_and_decreasing(z):
    a, b = bessel_k1(z), bessel_k1(z * 1.01)
    assert a > 0 and b < a
