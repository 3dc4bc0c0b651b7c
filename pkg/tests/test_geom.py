import math

import numpy as np
import pytest

from geoperiod import geom
from geoperiod.errors import DomainError


@pytest.fixture
def rng():
    return np.random.default_rng(12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_generators_in_lie_algebra(n):
    eta = geom.eta(n)
    gens = geom.generators(n)
    for X in (gens.H0,) + gens.N + gens.Nbar:
        np.testing.assert_allclose(X.T @ eta + eta @ X, 0.0, atol=1e-15)
    assert geom.kappa(gens.H0, gens.H0) == 1.0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_random_elements_are_lorentz(n, rng):
    for _ in range(20):
        g = geom.random_element(n, rng)
        assert geom.lorentz_defect(g.mat) < 1e-12 * np.linalg.norm(g.mat) ** 2
        assert g.mat[0, 0] > 0
        np.testing.assert_allclose((g @ g.inverse()).mat, np.eye(n + 1), atol=1e-12)


def test_group_element_validation():
    with pytest.raises(DomainError):
        geom.GroupElement(np.diag([1.0, 2.0, 1.0]))
    with pytest.raises(DomainError):
        geom.GroupElement(np.diag([-1.0, 1.0, 1.0]))
    with pytest.raises(DomainError):
        geom.make_rotation(np.array([[1.0, 0.1], [0.0, 1.0]]))


def test_flat_action_of_standard_subgroups():
    x, y = np.array([0.3, -0.2]), np.array([0.5, 0.1])
    np.testing.assert_allclose(geom.rational_action(geom.make_nbar(y), x), x + y, atol=1e-15)
    t = 0.7
    np.testing.assert_allclose(geom.rational_action(geom.make_a(t, 3), x), math.exp(-t) * x,
                               rtol=1e-15)
    assert abs(geom.conformal_factor(geom.make_a(t, 3), x) - math.exp(-t)) < 1e-15
    np.testing.assert_allclose(geom.rational_action(geom.weyl_w0(3), x), x / (x @ x), rtol=1e-14)
    np.testing.assert_allclose(geom.rational_action(geom.make_n(y), np.zeros(2)), 0.0, atol=1e-15)


def test_undefined_point():
    w = geom.weyl_w0(3)
    assert geom.rational_action(w, np.zeros(2)) is geom.UNDEFINED
    assert not geom.UNDEFINED
    out = geom.rational_action(w, np.array([[0.0, 0.0], [1.0, 0.0]]))
    assert np.isnan(out[0]).all() and np.allclose(out[1], [1.0, 0.0])
    with pytest.raises(DomainError):
        geom.rational_action(w, np.zeros(3))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_action_composes_and_cocycle(n, rng):
    for _ in range(10):
        g, h = geom.random_element(n, rng), geom.random_element(n, rng)
        x = rng.normal(size=n - 1)
        hx = geom.rational_action(h, x)
        np.testing.assert_allclose(geom.rational_action(g, hx), geom.rational_action(g @ h, x),
                                   rtol=1e-9, atol=1e-11)
        j = geom.conformal_factor(g @ h, x)
        assert abs(j - geom.conformal_factor(g, hx) * geom.conformal_factor(h, x)) < 1e-10 * j


@pytest.mark.parametrize("n", [3, 4, 5])
def test_conformal_factor_is_jacobian(n, rng):
    for _ in range(5):
        g = geom.random_element(n, rng, t_scale=0.5)
        x = rng.normal(size=n - 1) * 0.5
        j = geom.conformal_factor(g, x)
        assert abs(geom.jacobian_factor(g, x) / j - 1) < 1e-7


@pytest.mark.parametrize("n", [3, 4, 5])
def test_iwasawa_fast_matches_dense(n, rng):
    for _ in range(20):
        g = geom.random_element(n, rng)
        res = geom.iwasawa_residual(g)
        assert max(res.values()) < 1e-10


def test_iwasawa_t_of_a():
    assert abs(geom.iwasawa_t(geom.make_a(0.4, 3)) - 0.4) < 1e-15


@pytest.mark.parametrize("n", [3, 4, 5])
def test_bruhat_fast_matches_dense(n, rng):
    for _ in range(20):
        g = geom.random_element(n, rng)
        res = geom.bruhat_residual(g)
        assert res is not None and max(res.values()) < 1e-9
    # the Bruhat coordinate y is g . 0
    g = geom.random_element(n, rng)
    np.testing.assert_allclose(geom.bruhat_factor(g).y, geom.rational_action(g, np.zeros(n - 1)),
                               rtol=1e-12, atol=1e-14)


def test_bruhat_lower_cell():
    w = geom.weyl_w0(3)
    assert geom.bruhat_residual(w) is None
    assert not geom.bruhat_factor(w).defined


def test_subgroup_preserves_split(rng):
    n, m = 4, 2
    for _ in range(5):
        g = geom.random_subgroup_element(n, m, rng)
        x = np.concatenate([rng.normal(size=m - 1), np.zeros(n - m)])
        gx = geom.rational_action(g, x)
        np.testing.assert_allclose(gx[m - 1:], 0.0, atol=1e-13)
    with pytest.raises(DomainError):
        geom.embed_subgroup(np.eye(3))
