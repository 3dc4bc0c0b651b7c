"""Complex Gamma function, its logarithm and the Stirling envelope.

The evaluation uses the Lanczos approximation with ``g = 7`` and nine
coefficients, combined with the reflection formula for ``Re z < 1/2``.
All functions accept scalars or numpy arrays; scalar input gives a Python
``complex`` (or ``float`` for :func:`stirling_abs`).
"""

import math

import numpy as np

from .errors import DomainError, PoleError

POLE_TOL = 1e-8

_G = 7.0
_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def pole_distance(z):
    """Distance from ``z`` to the pole set ``{0, -1, -2, ...}`` of Gamma."""
    z = np.asarray(z, dtype=complex)
    k = np.minimum(np.round(z.real), 0.0)
    return np.abs(z - k)


def is_pole(z, tol=POLE_TOL):
    return pole_distance(z) < tol


def _check_poles(z, name="gamma"):
    bad = is_pole(z)
    if np.any(bad):
        zb = np.asarray(z)[bad].ravel()[0]
        raise PoleError(f"{name}: argument {complex(zb)} is within {POLE_TOL} of a pole")


def _lanczos_series(z):
    # A(z) for the shifted argument z - 1
    zm1 = z - 1.0
    acc = np.full_like(z, _COEF[0])
    for k in range(1, len(_COEF)):
        acc = acc + _COEF[k] / (zm1 + k)
    return acc


def _gamma_right(z):
    # valid for Re z >= 1/2
    t = z - 0.5 + _G
    return math.sqrt(2.0 * math.pi) * np.exp((z - 0.5) * np.log(t) - t) * _lanczos_series(z)


def _lgamma_right(z):
    t = z - 0.5 + _G
    return _HALF_LOG_2PI + (z - 0.5) * np.log(t) - t + np.log(_lanczos_series(z))


def _sinpi(z):
    # sin(pi z) on the argument reduced by the nearest integer: exact zeros at
    # the integers and full relative accuracy next to them
    k = np.round(z.real)
    sign = np.where(np.mod(k, 2.0) == 0.0, 1.0, -1.0)
    return sign * np.sin(np.pi * (z - k))


def _out(arr, scalar):
    if scalar:
        return complex(arr.reshape(-1)[0])
    return arr


def gamma(z):
    """Gamma function for complex ``z``.

    Raises
    ------
    PoleError
        If ``z`` is within ``POLE_TOL`` of a non-positive integer.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_poles(z)
    out = np.empty_like(z)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = _gamma_right(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        out[left] = np.pi / (_sinpi(zl) * _gamma_right(1.0 - zl))
    return _out(out, scalar)


def log_gamma(z):
    """Logarithm of the Gamma function.

    On ``Re z > 0`` this is the branch that is continuous along every path
    (the one with ``log_gamma(x)`` real for real ``x > 0``). For
    ``Re z <= 0`` the reflection formula with principal logarithms is used;
    the result is then only guaranteed modulo ``2*pi*i``.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_poles(z, "log_gamma")
    out = np.empty_like(z)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = _lgamma_right(z[right])
    mid = (z.real > 0.0) & ~right
    if np.any(mid):
        zm = z[mid]
        out[mid] = _lgamma_right(zm + 1.0) - np.log(zm)
    left = z.real <= 0.0
    if np.any(left):
        zl = z[left]
        out[left] = math.log(math.pi) - np.log(np.sin(np.pi * zl)) - _lgamma_right(1.0 - zl)
    return _out(out, scalar)


def rgamma(z):
    """Reciprocal Gamma function; entire, exactly 0 at the poles."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty_like(z)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = 1.0 / _gamma_right(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        out[left] = _sinpi(zl) * _gamma_right(1.0 - zl) / np.pi
    return _out(out, scalar)


def stirling_abs(a, b):
    """Leading Stirling envelope ``sqrt(2 pi) |b|^(a - 1/2) exp(-pi |b| / 2)``.

    This approximates ``|Gamma(a + i b)|`` for large ``|b|``.
    """
    if b == 0:
        raise DomainError("stirling_abs requires b != 0")
    ab = abs(b)
    return math.sqrt(2.0 * math.pi) * ab ** (a - 0.5) * math.exp(-0.5 * math.pi * ab)
