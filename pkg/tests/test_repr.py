import math

import numpy as np
import pytest

from geoperiod import geom
from geoperiod.errors import DomainError
from geoperiod.repr import (RepParams, act, bump, bump_mass, casimir_apply, casimir_eigenvalue,
                            dilate, integrate_over_support, lambda_nu_convert,
                            norm_complementary_sq, norm_unitary_sq, nu_lambda_convert,
                            spherical_vector)


def test_rep_params_validation():
    p = RepParams(4, 0.5)
    assert p.rho == 1.5 and p.N == 3 and isinstance(p.nu, complex)
    with pytest.raises(DomainError):
        RepParams(1, 0.0)
    with pytest.raises(DomainError):
        RepParams(2.5, 0.0)


def test_spherical_vector_values():
    p = RepParams(3, 0.3 + 0.5j)
    psi = spherical_vector(p)
    x = np.array([[0.0, 0.0], [1.0, 2.0]])
    np.testing.assert_allclose(psi(x), [1.0, 6.0 ** -(p.nu + p.rho)], rtol=1e-14)
    with pytest.raises(DomainError):
        psi(np.zeros((1, 3)))


def test_spherical_vector_is_k_invariant():
    rng = np.random.default_rng(3)
    p = RepParams(4, 0.7j)
    psi = spherical_vector(p)
    k = geom.make_rotation(geom.random_orthogonal(4, rng))
    x = rng.normal(size=(6, 3))
    np.testing.assert_allclose(act(k, psi, p)(x), psi(x), rtol=1e-12)


def test_bump_mass_and_dilation():
    f = bump(np.array([0.2, -0.1]), 0.5)
    m = integrate_over_support(f.func, *f.support, 2, tol=1e-12).value
    assert abs(m - bump_mass(2, 0.5)) < 1e-11
    g = dilate(f, 3.0, np.array([0.0, 0.0]))
    c, R = g.support
    np.testing.assert_allclose(c, [0.2 / 3, -0.1 / 3])
    assert abs(R - 0.5 / 3) < 1e-15
    # T^N f(T x) keeps the integral
    m3 = integrate_over_support(g.func, c, R, 2, tol=1e-12).value
    assert abs(m3 - m) < 1e-10
    with pytest.raises(DomainError):
        bump(np.zeros(2), 0.0)


@pytest.mark.parametrize("n", [3, 4])
def test_unitary_norm_of_spherical_vector(n):
    p = RepParams(n, 1.3j)
    assert abs(norm_unitary_sq(spherical_vector(p), p).value - 1.0) < 1e-10
    with pytest.raises(DomainError):
        norm_unitary_sq(spherical_vector(RepParams(n, 0.2)), RepParams(n, 0.2))


@pytest.mark.parametrize("n,nu", [(3, 0.3), (3, 0.8), (4, 1.2)])
def test_complementary_norm_of_spherical_vector(n, nu):
    p = RepParams(n, nu)
    assert abs(norm_complementary_sq(spherical_vector(p), p).value - 1.0) < 1e-7
    with pytest.raises(DomainError):
        norm_complementary_sq(spherical_vector(p), RepParams(n, p.rho + 0.1))


def test_lambda_nu_round_trip():
    for lam, rho in [(10.0, 1.0), (0.5, 1.0), (1.0, 1.0), (3.25, 1.5)]:
        nu = lambda_nu_convert(lam, rho)
        assert nu.real >= 0
        assert abs(nu_lambda_convert(nu, rho) - lam) < 1e-12
    assert lambda_nu_convert(10.0, 1.0) == 3j


@pytest.mark.parametrize("x", [[0.0, 0.0], [0.3, -0.5], [1.0, 0.2]])
def test_casimir_on_spherical_vector(x):
    p = RepParams(3, 0.4 + 0.9j)
    x = np.array(x)
    psi = spherical_vector(p)
    val = casimir_apply(psi, p, x)
    assert abs(val - casimir_eigenvalue(p) * psi(x[None, :])[0]) < 1e-5


def test_casimir_trivial_case_and_translate():
    p = RepParams(3, 0.0)
    assert abs(casimir_apply(spherical_vector(p), p, np.zeros(2)) + 1.0) < 1e-5
    rng = np.random.default_rng(5)
    p = RepParams(4, 0.3)
    g = geom.random_element(4, rng, t_scale=0.5)
    f = act(g, spherical_vector(p), p)
    x = np.array([0.2, 0.1, -0.3])
    assert abs(casimir_apply(f, p, x) - casimir_eigenvalue(p) * f(x[None, :])[0]) < 1e-5
