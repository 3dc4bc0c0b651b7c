import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geoperiod.complexfn import gamma, is_pole, log_gamma, pole_distance, rgamma, stirling_abs
from geoperiod.errors import DomainError, PoleError


def _rel(a, b):
    return abs(complex(a) - complex(b)) / abs(complex(b))


@pytest.mark.parametrize("z", [0.5, 1.0, 2.5, 10.3, -0.5, -3.7, 1 + 1j, -2.5 + 0.3j,
                               0.2 - 4j, 30 + 20j, 3 + 40j])
def test_gamma_matches_mpmath(z):
    assert _rel(gamma(z), complex(mp.gamma(z))) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(-20, 30), st.floats(-30, 30))
def test_gamma_random_complex(x, y):
    z = complex(x, y)
    if pole_distance(z) < 1e-3:
        return
    ref = complex(mp.gamma(mp.mpc(x, y)))
    if abs(ref) < 1e-280 or abs(ref) > 1e280:
        return
    assert _rel(gamma(z), ref) < 1e-12


def test_gamma_vectorised():
    z = np.array([0.5, 1.5 + 2j, -1.5])
    out = gamma(z)
    assert out.shape == (3,)
    np.testing.assert_allclose(out, [complex(mp.gamma(complex(v))) for v in z], rtol=1e-13)


def test_gamma_poles():
    with pytest.raises(PoleError):
        gamma(-3.0)
    with pytest.raises(PoleError):
        gamma(0.0)
    assert is_pole(-2 + 1e-10)
    assert not is_pole(-2 + 1e-6)
    assert rgamma(-4.0) == 0
    np.testing.assert_allclose(rgamma(np.array([-1.0, 2.0])), [0.0, 1.0])


def test_rgamma_near_pole_is_small_and_finite():
    z = -3 + 1e-7
    assert abs(rgamma(z)) < 1e-5
    assert _rel(rgamma(z), complex(mp.rgamma(z))) < 1e-7


@pytest.mark.parametrize("z", [0.3, 5.0, 2 + 3j, 0.1 + 50j, 100 - 100j, 0.7j + 0.2])
def test_log_gamma_principal_branch(z):
    assert abs(log_gamma(z) - complex(mp.loggamma(z))) < 1e-12 * max(1.0, abs(z) * math.log(abs(z) + 2))


def test_log_gamma_left_half_plane_mod_2pi():
    z = -2.3 + 1.1j
    d = log_gamma(z) - complex(mp.loggamma(z))
    assert abs(d.real) < 1e-12
    k = d.imag / (2 * math.pi)
    assert abs(k - round(k)) < 1e-12


@pytest.mark.parametrize("a", [-1.0, 0.5, 2.0])
def test_stirling_envelope_asymptotic(a):
    for b in (50.0, 200.0):
        ratio = abs(complex(mp.gamma(mp.mpc(a, b)))) / stirling_abs(a, b)
        assert abs(ratio - 1) < 2.0 / b
    with pytest.raises(DomainError):
        stirling_abs(1.0, 0.0)


@pytest.mark.parametrize("z", [3.87e-10, -1 + 1e-9, -3 - 2e-12j, 1e-20])
def test_rgamma_accurate_next_to_poles(z):
    assert _rel(rgamma(z), complex(mp.rgamma(z))) < 1e-13
