import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from relheat.errors import AccuracyError, DomainError
from relheat.quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    geometric_edges,
    integrate_semi_infinite,
    panel_integrate,
    subordinate,
    subordination_nodes,
)
from relheat.specfun import tilted_levy_density


def direct(F, t):
    """Plain adaptive integration of the tilted weight against F, in y."""
    mean = 0.5 / t
    f = lambda y: tilted_levy_density(y, t) * F(y)
    parts = [(0, mean), (mean, 20 * mean), (20 * mean, np.inf)]
    return sum(integrate.quad(f, a, b, limit=200, epsabs=1e-14, epsrel=1e-12)[0] for a, b in parts)


@pytest.mark.parametrize("t", [1e-3, 0.1, 0.5, 1.0, 3.0, 20.0])
def test_normalization(t):
    assert abs(subordinate(lambda y: np.ones_like(y), t) - 1.0) < 1e-12


def test_first_and_second_moment():
    np.testing.assert_allclose(subordinate(lambda y: y, 1.0), 0.5, rtol=1e-12)
    np.testing.assert_allclose(subordinate(lambda y: y**2, 1.0), 0.5, rtol=1e-12)
    # E[Y^2] = (t + 1) / (4 t^3) in general
    np.testing.assert_allclose(subordinate(lambda y: y**2, 0.3), 1.3 / (4 * 0.3**3), rtol=1e-10)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_agrees_with_direct_integration(t):
    F = lambda y: 1.0 / (1.0 + y)
    assert abs(subordinate(F, t) - direct(F, t)) < 1e-7


@pytest.mark.parametrize("t", [0.05, 0.5, 2.0, 8.0])
def test_node_doubling_consistency(t):
    F = lambda y: np.exp(-y) * np.cos(y)
    a = subordinate(F, t)
    b = subordinate(F, t, DEFAULT_CONFIG.with_(gauss_nodes=2 * DEFAULT_CONFIG.gauss_nodes))
    assert abs(a - b) <= 10 * DEFAULT_CONFIG.adaptive_rel_tol * abs(b)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.05, 10))
def test_linearity(a, b, t):
    F = lambda y: 1.0 / (1.0 + y)
    G = lambda y: np.exp(-y)
    lhs = subordinate(lambda y: a * F(y) + b * G(y), t)
    rhs = a * subordinate(F, t) + b * subordinate(G, t)
    assert abs(lhs - rhs) <= 1e-14 * (abs(a) + abs(b) + 1)


def test_vector_valued_integrand():
    out = subordinate(lambda y: np.stack([np.ones_like(y), y], axis=1), 2.0)
    np.testing.assert_allclose(out, [1.0, 0.25], rtol=1e-12)


def test_laguerre_scheme_accurate_at_large_t():
    cfg = DEFAULT_CONFIG.with_(scheme="laguerre")
    np.testing.assert_allclose(subordinate(lambda y: y, 5.0, cfg), 0.1, rtol=1e-9)


def test_fallback_to_adaptive_on_rough_integrand():
    # a kink the trapezoid cannot resolve forces the adaptive branch
    F = lambda y: np.abs(y - 0.5)
    val, err = subordinate(F, 1.0, full_output=True)
    assert abs(val - direct(lambda y: abs(y - 0.5), 1.0)) < 1e-8


def test_nodes_are_positive():
    y, w = subordination_nodes(1.0, 80)
    assert np.all(y > 0) and np.all(w >= 0)
    np.testing.assert_allclose(w.sum(), 1.0, rtol=1e-12)


def test_domain_and_config_errors():
    with pytest.raises(DomainError):
        subordinate(lambda y: y, 0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(gauss_nodes=4)
    with pytest.raises(ValueError):
        QuadratureConfig(adaptive_rel_tol=0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=0)


def test_non_convergence_raises_accuracy_error():
    cfg = DEFAULT_CONFIG.with_(max_subdivisions=1, adaptive_rel_tol=1e-15, adaptive_abs_tol=1e-300)
    with pytest.raises(AccuracyError) as info:
        subordinate(lambda y: np.sin(50 / (y + 1e-3)), 1.0, cfg)
    assert info.value.best is not None


# -- semi-infinite integrals ---------------------------------------------------


def test_semi_infinite_examples():
    np.testing.assert_allclose(integrate_semi_infinite(lambda u: math.exp(-u)), 1.0, rtol=1e-12)
    np.testing.assert_allclose(
        integrate_semi_infinite(lambda u: math.exp(-u) / math.sqrt(u)), math.sqrt(math.pi), rtol=1e-10
    )
    np.testing.assert_allclose(
        integrate_semi_infinite(lambda u: math.exp(-u * u), singular_at_zero=False),
        math.sqrt(math.pi) / 2,
        rtol=1e-12,
    )
    cfg = DEFAULT_CONFIG.with_(tail_cutoff=10.0)
    np.testing.assert_allclose(integrate_semi_infinite(lambda u: math.exp(-u), cfg), 1.0, rtol=1e-12)


def test_semi_infinite_divergent_raises():
    with pytest.raises(AccuracyError):
        integrate_semi_infinite(lambda u: 1.0 / (1.0 + u))


def test_panel_integrate_batched():
    edges = geometric_edges(0.0, 40.0)
    rates = np.array([0.5, 1.0, 2.0])
    out = panel_integrate(lambda u: np.exp(-rates[:, None] * u[None, :]), edges)
    np.testing.assert_allclose(out, -np.expm1(-40.0 * rates) / rates, rtol=1e-12)


def test_panel_integrate_detects_unresolved():
    with pytest.raises(AccuracyError):
        panel_integrate(lambda u: np.sin(200 * u), np.array([0.0, 10.0]))


def test_geometric_edges():
    e = geometric_edges(0.0, 10.0, first=1.0)
    np.testing.assert_array_equal(e, [0, 1, 3, 7, 10])
    with pytest.raises(ValueError):
        geometric_edges(1.0, 1.0)
