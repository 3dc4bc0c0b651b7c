import math

import mpmath as mp
import numpy as np
import pytest

from geoperiod.bessel import bessel_j
from geoperiod.errors import DimensionError, NoConvergence
from geoperiod.quad import (DecayProfile, de_rule, integrate_1d, integrate_nd,
                            integrate_oscillatory, radial_fourier, wynn_epsilon)


def test_finite_interval_smooth():
    r = integrate_1d(np.exp, (0.0, 1.0), tol=1e-14)
    assert r.converged
    assert abs(r.value - (math.e - 1)) < 1e-14


def test_endpoint_singularities():
    # int_0^1 x^-0.9 (1-x)^-0.8 dx = B(0.1, 0.2)
    r = integrate_1d(lambda x, s: x ** -0.9 * s ** -0.8, (0.0, 1.0), tol=1e-12,
                     complement=True)
    assert abs(r.value / float(mp.beta(0.1, 0.2)) - 1) < 1e-11


def test_half_line_and_breakpoints():
    r = integrate_1d(lambda x: 1.0 / (1.0 + x * x), (0.0, math.inf), tol=1e-13)
    assert abs(r.value - math.pi / 2) < 1e-13
    r = integrate_1d(lambda x: np.abs(x - 0.3), (0.0, 1.0), points=(0.3,), tol=1e-13)
    assert abs(r.value - (0.045 + 0.245)) < 1e-13
    r = integrate_1d(np.exp, (1.0, 0.0))
    assert abs(r.value + (math.e - 1)) < 1e-13


def test_complex_integrand():
    r = integrate_1d(lambda x: np.exp(1j * x) * np.exp(-x), (0.0, math.inf), tol=1e-13)
    assert abs(r.value - 1 / (1 - 1j)) < 1e-13


def test_strict_raises_on_budget():
    with pytest.raises(NoConvergence):
        integrate_1d(lambda x: np.sin(1.0 / x), (1e-8, 1.0), tol=1e-14, max_evals=200,
                     strict=True)


def test_de_rule_weights_sum():
    x, w = de_rule((0.0, 2.0), 5)
    assert abs(np.sum(w) - 2.0) < 1e-13


def test_integrate_nd_gaussian_box():
    def f(x, y, z):
        return np.exp(-(x * x + y * y + z * z))

    r = integrate_nd(f, [(-math.inf, math.inf)] * 3, tol=1e-10,
                     decay=[DecayProfile("exponential", 1.0)] * 3)
    assert abs(r.value - math.pi ** 1.5) < 1e-9


def test_integrate_nd_dimension_guard():
    with pytest.raises(DimensionError):
        integrate_nd(lambda *a: 1.0, [(0, 1)] * 5)


def test_wynn_epsilon_alternating_series():
    partial = np.cumsum([(-1) ** k / (k + 1) for k in range(15)])
    assert abs(wynn_epsilon(partial) - math.log(2)) < 1e-10


def test_oscillatory_sine_integral():
    r = integrate_oscillatory(lambda x: np.sin(x) / x,
                              0.0, math.pi, math.pi, tol=1e-11)
    assert r.converged
    assert abs(r.value - math.pi / 2) < 1e-10


def test_oscillatory_bessel_weber():
    # int_0^inf J_0(b x) exp(-a x) dx = 1 / sqrt(a^2 + b^2)
    a, b = 0.1, 2.0
    r = integrate_oscillatory(lambda x: bessel_j(0.0, b * x) * np.exp(-a * x), 0.0,
                              0.75 * math.pi / b, math.pi / b, tol=1e-11)
    assert abs(r.value - 1 / math.hypot(a, b)) < 1e-10


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_radial_fourier_gaussian(dim):
    # the unitary transform of exp(-|x|^2 / 2) is itself
    for r in (0.0, 0.5, 2.0, 5.0):
        v = radial_fourier(lambda s: np.exp(-0.5 * s * s), dim, r, tol=1e-12)
        assert abs(v - math.exp(-0.5 * r * r)) < 1e-11
