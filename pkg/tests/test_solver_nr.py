import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from relheat.conditions import InitialCondition, SolutionField
from relheat.errors import DomainError, GridError
from relheat.solver_nr import gw_transform, hermite_expansion, nr_closed_gaussian, nr_closed_hermite


def convolve(f, x, t):
    """Brute-force heat-kernel convolution."""
    k = lambda u: math.exp(-((x - u) ** 2) / (2 * t)) * f(u) / math.sqrt(2 * math.pi * t)
    s = 12 * math.sqrt(t)
    return integrate.quad(k, x - s, x + s, limit=400, epsabs=1e-14, epsrel=1e-12)[0]


def test_initial_conditions_normalized():
    for ic in (InitialCondition.gaussian(), InitialCondition.cauchy(), InitialCondition.levy()):
        np.testing.assert_allclose(ic.mass(), 1.0, atol=1e-8)
    for r in (1, 2, 5):
        np.testing.assert_allclose(InitialCondition.hermite(r).mass(), 1.0, atol=1e-8)
    assert not InitialCondition.invsqrt().normalizable
    with pytest.raises(ValueError):
        InitialCondition.hermite(0)
    with pytest.raises(ValueError):
        InitialCondition("triangle")


def test_glaisher_value():
    np.testing.assert_allclose(gw_transform(InitialCondition.gaussian(), 0.0, 1.0), 1 / math.sqrt(3 * math.pi), rtol=1e-15)


def test_t_zero_returns_profile():
    for ic in (InitialCondition.gaussian(), InitialCondition.cauchy(), InitialCondition.levy(), InitialCondition.invsqrt()):
        xs = np.array([-1.0, 0.3, 2.0])
        np.testing.assert_array_equal(gw_transform(ic, xs, 0.0), ic(xs))
    with pytest.raises(DomainError):
        gw_transform(InitialCondition.gaussian(), 0.0, -1.0)


def test_small_time_limit():
    for ic in (InitialCondition.cauchy(), InitialCondition.invsqrt(), InitialCondition.levy()):
        np.testing.assert_allclose(gw_transform(ic, 0.7, 1e-8), ic(0.7), rtol=1e-6)


def test_levy_spreads_to_negative_x():
    assert gw_transform(InitialCondition.levy(), -1.0, 0.5) > 0


@pytest.mark.parametrize("ic", [InitialCondition.cauchy(), InitialCondition.invsqrt(), InitialCondition.levy()])
@pytest.mark.parametrize("x", [-1.5, 0.0, 0.4, 3.0])
def test_adaptive_convolution_against_brute_force(ic, x):
    np.testing.assert_allclose(gw_transform(ic, x, 0.8), convolve(ic, x, 0.8), rtol=1e-9, atol=1e-14)


def test_closed_hermite_value():
    np.testing.assert_allclose(nr_closed_hermite(2, 0.0, 0.5), -2 / (2 * math.sqrt(2)), rtol=1e-14)
    xs = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(
        nr_closed_hermite(0, xs, 0.7), math.sqrt(math.pi) * nr_closed_gaussian(xs, 0.7), rtol=1e-14
    )


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("x", [-1.0, 0.0, 2.0])
def test_closed_hermite_against_convolution(p, x):
    f = lambda u: special.eval_hermite(p, u) * math.exp(-u * u)
    assert abs(nr_closed_hermite(p, x, 1.0) - convolve(f, x, 1.0)) < 1e-8


def test_hermite_expansion_reproduces_profile():
    for r in (1, 2, 3, 6):
        xs = np.linspace(-2, 2, 13)
        rebuilt = sum(c * special.eval_hermite(p, xs) for p, c in hermite_expansion(r)) * np.exp(-xs * xs)
        np.testing.assert_allclose(rebuilt, InitialCondition.hermite(r)(xs), rtol=1e-13, atol=1e-15)


def test_tabulated_matches_analytic():
    grid = np.linspace(-10, 10, 20001)
    ic = InitialCondition.tabulated(grid, np.exp(-grid**2) / math.sqrt(math.pi))
    xs = np.array([-1.0, 0.0, 0.5, 2.0])
    np.testing.assert_allclose(gw_transform(ic, xs, 0.5), nr_closed_gaussian(xs, 0.5), atol=1e-8)


def test_tabulated_validation():
    with pytest.raises(GridError):
        InitialCondition.tabulated([0, 1, 1], [0, 1, 0])
    with pytest.raises(GridError):
        InitialCondition.tabulated([0, 1, 2], [0, np.nan, 0])


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_mass_and_second_moment(t):
    xs = np.linspace(-30, 30, 6001)
    for ic in (InitialCondition.gaussian(), InitialCondition.cauchy(), InitialCondition.levy()):
        if ic.kind == "gaussian":
            vals = gw_transform(ic, xs, t)
            np.testing.assert_allclose(np.trapezoid(xs**2 * vals, xs), 0.5 + t, atol=1e-6)
        fld = SolutionField(xs, gw_transform(ic, xs, t), t, "NR", ic, "closed")
        # mass of the initial profile outside the grid; diffusion moves little more out
        tail = {"gaussian": 0.0, "cauchy": 1 - 2 * math.atan(30) / math.pi, "levy": math.erf(math.sqrt(1 / 120))}
        assert abs(fld.mass() - (1.0 - tail[ic.kind])) < 1e-4
    # Hermite-Gauss r = 2 is even, so its whole-line mass is 2 and <x^2> = 3/2 + t
    h = InitialCondition.hermite(2)
    vals = gw_transform(h, xs, t)
    np.testing.assert_allclose(np.trapezoid(xs**2 * vals, xs) / np.trapezoid(vals, xs), 1.5 + t, atol=1e-6)


def test_semigroup():
    ic = InitialCondition.gaussian()
    u = np.linspace(-15, 15, 30001)
    step = gw_transform(ic, u, 0.4)
    twice = InitialCondition.tabulated(u, step)
    for x in (-1.0, 0.0, 0.8):
        assert abs(gw_transform(twice, x, 0.6) - gw_transform(ic, x, 1.0)) < 1e-7


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 6), st.floats(0.05, 5))
def test_positivity(x, t):
    for ic in (InitialCondition.gaussian(), InitialCondition.cauchy(), InitialCondition.levy()):
        assert gw_transform(ic, x, t) > 0


def test_solution_field_validation():
    ic = InitialCondition.gaussian()
    with pytest.raises(GridError):
        SolutionField([0, 1, 3], [1, 1, 1], 0.0, "R", ic, "closed")
    with pytest.raises(GridError):
        SolutionField([0, 1, 2], [1, np.inf, 1], 0.0, "R", ic, "closed")
    with pytest.raises(ValueError):
        SolutionField([0, 1, 2], [1, 1, 1], 0.0, "X", ic, "closed")
    with pytest.raises(DomainError):
        SolutionField([0, 1, 2], [1, 1, 1], -1.0, "R", ic, "closed")
    fld = SolutionField(np.linspace(-1, 1, 5), np.ones(5), 0.0, "R", ic, "closed")
    with pytest.raises(GridError):
        fld.check_mass()
