import math

import mpmath
import numpy as np
import pytest

from geoperiod import geom
from geoperiod.errors import ConvergenceRegionError, DomainError, PoleError
from geoperiod.forms import (FormParams, chain_verify, classify, direct_converges,
                             ell_mod_closed, ell_mod_direct, ell_mod_ft_spherical, ft_converges,
                             ft_prefactor, ft_spherical, intertwiner_at_origin, invariance_check,
                             is_limit_convention)
from geoperiod.bessel import bessel_k
from geoperiod.quad import integrate_nd, radial_fourier
from geoperiod.repr import RepParams, bump, dilate, spherical_vector, zero_function
from geoperiod.verify import invariance_bumps


def _closed_literal(n, m, nu, nup):
    rho, rhop = 0.5 * (n - 1), 0.5 * (m - 1)
    g = math.gamma
    return (math.pi ** (rho + rhop) * g(rhop) * g((nu + rho + nup - rhop) / 2)
            * g((nu + rho - nup - rhop) / 2) / (g(2 * rhop) * g(rho - rhop) * g(nu + rho)))


def test_form_params_derived():
    p = FormParams(5, 3, 2.0 + 1j, 0.5)
    assert p.rho == 2 and p.rhop == 1 and p.N == 4 and p.M == 2
    assert p.alpha == 0.5 - 1
    assert p.beta == 0.5 * ((2 + 1j - 2) - (0.5 - 1))
    with pytest.raises(DomainError):
        FormParams(3, 3, 0, 0)
    with pytest.raises(DomainError):
        FormParams(3, 0, 0, 0)


def test_classify():
    assert classify(FormParams(3, 2, 3, 1)).in_convergence_region
    assert not classify(FormParams(3, 2, 0.5, 1)).in_convergence_region
    assert not classify(FormParams(3, 2, 3, 0.2)).in_convergence_region
    v = classify(FormParams(3, 2, -0.5, 0))
    assert v.at_pole and len(v.pole_factors) == 2
    assert not classify(FormParams(3, 2, -0.5 + 1e-6, 0)).at_pole


@pytest.mark.parametrize("n,m,nu,nup", [(3, 2, 3.0, 1.0), (4, 2, 3.5, 1.0), (3, 2, 4.0, 1.5),
                                        (5, 3, 1.2, 0.7), (5, 4, 0.5, 0.3)])
def test_closed_matches_literal_gamma_product(n, m, nu, nup):
    assert abs(ell_mod_closed(FormParams(n, m, nu, nup)) / _closed_literal(n, m, nu, nup) - 1) < 1e-13


def test_closed_spec_example_value():
    g = math.gamma
    ref = math.pi ** 1.5 * g(9 / 4) * g(5 / 4) / (g(1) * g(0.5) * g(4)) * g(0.5)
    assert abs(ell_mod_closed(FormParams(3, 2, 3, 1)) - ref) < 1e-14 * ref


def test_closed_poles_and_zero():
    with pytest.raises(PoleError) as exc:
        ell_mod_closed(FormParams(3, 2, -2.5, 0.0))
    assert "Gamma" in exc.value.factor
    # nu + rho at a pole of the denominator: the value vanishes
    assert ell_mod_closed(FormParams(4, 2, -1.5, 2.0)) == 0


def test_closed_m1_limit_convention():
    p = FormParams(3, 1, 0.7, 0.2)
    assert is_limit_convention(p) and not is_limit_convention(FormParams(3, 2, 0.7, 0.2))
    g = math.gamma
    ref = 2 * math.pi * g((0.7 + 1 + 0.2) / 2) * g((0.7 + 1 - 0.2) / 2) / (g(1) * g(1.7))
    assert abs(ell_mod_closed(p) - ref) < 1e-13 * ref


def test_closed_conjugation_symmetry():
    a = ell_mod_closed(FormParams(4, 2, 0.3j, 2j))
    b = ell_mod_closed(FormParams(4, 2, -0.3j, -2j))
    assert abs(a - b.conjugate()) < 1e-14 * abs(a)
    # even in nu'
    assert abs(ell_mod_closed(FormParams(4, 2, 0.3j, -2j)) - a) < 1e-14 * abs(a)


@pytest.mark.parametrize("n,m,nu,nup", [(3, 2, 3.0, 1.0), (4, 2, 3.5, 1.0)])
def test_direct_matches_closed_in_region(n, m, nu, nup):
    p = FormParams(n, m, nu, nup)
    f1, f2 = spherical_vector(p.rep()), spherical_vector(p.rep_prime())
    d = ell_mod_direct(f1, f2, p).value
    assert abs(d / ell_mod_closed(p) - 1) < 1e-4
    # bilinearity through the amplitude tag
    d2 = ell_mod_direct(f1.scaled(2.0), f2, p).value
    assert abs(d2 - 2 * d) < 1e-12 * abs(d)


def test_direct_m1_is_half_the_limit_convention():
    p = FormParams(3, 1, 1.3, 0.4)
    d = ell_mod_direct(spherical_vector(p.rep()), None, p, override=True).value
    assert abs(d / ell_mod_closed(p) - 0.5) < 1e-7


def test_direct_region_guard_and_override():
    p = FormParams(3, 2, 1.0, 0.5j)
    f1, f2 = spherical_vector(p.rep()), spherical_vector(p.rep_prime())
    with pytest.raises(ConvergenceRegionError):
        ell_mod_direct(f1, f2, p)
    assert direct_converges(p)
    d = ell_mod_direct(f1, f2, p, tol=1e-4, override=True).value
    assert abs(d / ell_mod_closed(p) - 1) < 1e-4


def test_direct_zero_and_bump_bilinearity():
    p = FormParams(3, 2, 3.0, 1.0)
    f1, f2 = invariance_bumps(p)
    z = zero_function(p.M)
    assert ell_mod_direct(f1, bump(np.zeros(1), 0.5, amplitude=0.0), p).value == 0
    a = ell_mod_direct(f1, f2, p).value
    b = ell_mod_direct(f1.scaled(2.0), f2, p).value
    c = ell_mod_direct(f1, f2.scaled(-3.0), p).value
    assert abs(b - 2 * a) < 1e-10 * abs(a) and abs(c + 3 * a) < 1e-10 * abs(a)
    assert ell_mod_direct(f1, z, p).value == 0
    with pytest.raises(DomainError):
        ell_mod_direct(f1, spherical_vector(p.rep()), p)


def test_ft_spherical_examples():
    p = RepParams(3, 1.0)
    assert abs(ft_spherical(p, 2.0) - bessel_k(1.0, 2.0)) < 1e-13
    # symmetric in nu through K_nu = K_-nu
    q = RepParams(4, 0.6 + 0.4j)
    r = 1.7
    alt = (r ** q.nu * bessel_k(-q.nu, r)
           / (2 ** (q.nu + 0.5 * (q.N - 2)) * complex(mpmath.gamma(q.nu + 1.5))))
    assert abs(ft_spherical(q, r) - alt) < 1e-12 * abs(alt)
    with pytest.raises(DomainError):
        ft_spherical(p, -1.0)


def test_ft_spherical_large_r_log_derivative():
    p = RepParams(4, 0.8)
    r = np.array([60.0, 61.0])
    v = np.array([ft_spherical(p, x).real for x in r])
    slope = np.diff(np.log(v))[0]
    # d/dr log(r^nu K_nu(r)) = -1 + (nu - 1/2) / r + O(r^-2)
    assert abs(slope + 1) < 0.01


@pytest.mark.parametrize("n,nu", [(3, 0.5j), (4, 0.7), (5, 1.2 + 0.3j)])
def test_ft_spherical_matches_radial_fourier(n, nu):
    p = RepParams(n, nu)
    s = p.nu + 0.5 * p.N
    for r in (0.3, 1.0, 4.0):
        ref = radial_fourier(lambda x: (1 + np.asarray(x) ** 2) ** (-s), p.N, r, tol=1e-12)
        assert abs(ft_spherical(p, r) - ref) < 1e-8 * abs(ref)


def test_ft_route_overlap_and_divergence():
    p = FormParams(4, 2, 1.5, 0.1)
    assert ft_converges(p)
    v = ell_mod_ft_spherical(p).value
    assert abs(v / ell_mod_closed(p) - 1) < 1e-8
    with pytest.raises(ConvergenceRegionError):
        ell_mod_ft_spherical(FormParams(3, 2, 3, 1))


def test_ft_prefactor_pole_at_alpha_zero():
    with pytest.raises(PoleError) as exc:
        ft_prefactor(FormParams(4, 2, 2.0, 0.5))
    assert exc.value.factor == "Gamma(-alpha)"
    with pytest.raises(PoleError):
        ell_mod_ft_spherical(FormParams(4, 2, 2.0, 0.5))


@pytest.mark.parametrize("pt", [(4, 2, 0.2, 0.2), (3, 2, 0.1, 0.1)])
def test_chain_small_residuals(pt):
    steps = chain_verify(FormParams(*pt))
    assert len(steps) == 4
    assert all(s.residual < 1e-8 and s.converged for s in steps)
    assert abs(steps[-1].value_to - ell_mod_closed(FormParams(*pt))) < 1e-14 * abs(steps[-1].value_to)


def test_chain_divergent_spec_examples():
    for pt in [(3, 2, 3, 1), (3, 2, 4, 1.5)]:
        with pytest.raises(ConvergenceRegionError):
            chain_verify(FormParams(*pt))


def _intertwiner_params():
    return FormParams(4, 2, 2.4 + 0.3j, 0.9)


def test_intertwiner_zero_and_scaling():
    p = _intertwiner_params()
    f = bump(np.array([0.3, 1.2, -0.4]), 0.5)
    assert intertwiner_at_origin(f.scaled(0.0), p).value == 0
    v = intertwiner_at_origin(f, p).value
    for doubled, k in ((False, 1), (True, 2)):
        v = intertwiner_at_origin(f, p, doubled=doubled).value
        for s in (0.5, 2.0):
            # f_s(x) = f(s x) = s^-N dilate(f, s, 0)
            fs = dilate(f, s, np.zeros(3)).scaled(s ** -p.N)
            vs = intertwiner_at_origin(fs, p, doubled=doubled).value
            pred = s ** -(p.N + k * (p.alpha + p.beta)) * v
            assert abs(vs - pred) < 1e-9 * abs(pred)


def test_intertwiner_matches_cartesian_oracle():
    p = _intertwiner_params()
    c, R = np.array([0.2, 1.5, 0.1]), 0.4
    f = bump(c, R)
    v = intertwiner_at_origin(f, p).value

    def h(x0, x1, x2):
        X = np.stack(np.broadcast_arrays(x0, x1, x2), axis=-1)
        r2 = np.sum(X * X, axis=-1)
        s2 = x1 ** 2 + x2 ** 2
        return r2 ** (p.alpha / 2) * s2 ** (p.beta / 2) * f.func(X)

    ref = integrate_nd(h, [(ci - R, ci + R) for ci in c], tol=1e-8).value
    assert abs(v - ref) < 1e-6 * abs(ref)
    with pytest.raises(DomainError):
        intertwiner_at_origin(spherical_vector(p.rep()), p)


def test_invariance_examples():
    p = FormParams(3, 2, 1.5, 0.4)
    f1, f2 = invariance_bumps(p)
    assert invariance_check(p, geom.identity(3), f1, f2, tol=1e-5, override=True) < 1e-12
    nbar = geom.embed_subgroup(geom.make_nbar(np.array([0.3])), n=3)
    assert invariance_check(p, nbar, f1, f2, tol=1e-5, override=True) < 1e-4
    a = geom.embed_subgroup(geom.make_a(0.2, 2), n=3)
    assert invariance_check(p, a, f1, f2, tol=1e-5, override=True) < 1e-4
    with pytest.raises(DomainError):
        invariance_check(p, geom.identity(4), f1, f2)
