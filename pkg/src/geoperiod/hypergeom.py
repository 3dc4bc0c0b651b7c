"""Gauss hypergeometric function 2F1(a, b; c; x) for complex parameters and
real argument x < 1.

Strategy by argument:

* ``|x| <= 1/2``: power series.
* ``x < -1/2``: Pfaff transformation to ``z = x / (x - 1)`` in ``(1/3, 1)``.
* ``z`` in ``(1/2, 1)``: the linear transformation ``z -> 1 - z``. When
  ``c - a - b`` is (nearly) an integer that transformation degenerates; the
  series is then used up to ``z = 0.9`` and beyond it the Euler integral if
  its parameters allow it, or a symmetric, Richardson-extrapolated parameter
  perturbation otherwise.
"""

import numpy as np

from .complexfn import gamma, is_pole, rgamma
from .errors import DomainError, NoConvergence, PoleError

X_MIN = -1e6
_DEGENERATE_TOL = 1e-4
_SERIES_Z_MAX = 0.9
_SERIES_Z_SWITCH = 0.5
_MAX_TERMS = 20000


def _series(a, b, c, z):
    """Power series; z is a real array with |z| < 1."""
    real = a.imag == 0 and b.imag == 0 and c.imag == 0
    if real:
        a, b, c = a.real, b.real, c.real
    dt = float if real else complex
    term = np.ones(z.shape, dtype=dt)
    total = np.ones(z.shape, dtype=dt)
    small = np.zeros(z.shape, dtype=int)
    for k in range(_MAX_TERMS):
        term = term * ((a + k) * (b + k) / ((c + k) * (k + 1.0))) * z
        total = total + term
        tiny = np.abs(term) < 1e-16 * np.abs(total)
        small = np.where(tiny, small + 1, 0)
        if np.all(small >= 3) or not np.any(term):
            return total
    raise NoConvergence("hyp2f1: power series did not converge", result=total)


def _near_integer(w):
    return abs(w - round(w.real)) < _DEGENERATE_TOL


def _one_minus_z(a, b, c, w):
    """Linear transformation z -> 1 - z, non-degenerate case; ``w = 1 - z``."""
    d = c - a - b
    g1 = gamma(c) * gamma(d) * rgamma(c - a) * rgamma(c - b)
    g2 = gamma(c) * gamma(-d) * rgamma(a) * rgamma(b)
    out = g1 * _series(a, b, 1.0 - d, w)
    if g2 != 0:
        out = out + g2 * np.exp(d * np.log(w)) * _series(c - a, c - b, d + 1.0, w)
    return out


def _euler(a, b, c, wz, tol=1e-13, max_level=12):
    """Euler integral on a tanh-sinh grid shared by all arguments ``z = 1 - wz``.

    The factor ``(1 - t)`` is taken from the endpoint distance computed by
    the quadrature map, and ``1 - z t = (1 - t) + wz t``, which keeps full
    relative accuracy near ``t = 1`` and ``z = 1``.
    """
    from .quad import _map_nodes, _t_grid

    pref = gamma(c) * rgamma(b) * rgamma(c - b)
    wz = np.asarray(wz, dtype=float)
    if len(wz) > 64:
        return np.concatenate([_euler(a, b, c, wc, tol, max_level)
                               for wc in np.array_split(wz, -(-len(wz) // 64))])
    total = np.zeros(wz.shape, dtype=complex)
    prev = None
    for level in range(max_level + 1):
        t_par, h = _t_grid(level, odd_only=level > 0)
        t, w, dl, dr = _map_nodes("finite", 0.0, 1.0, t_par)
        keep = (dl > 0) & (dr > 0) & (w > 1e-300)
        t, w, dl, dr = t[keep], w[keep], dl[keep], dr[keep]
        with np.errstate(all="ignore"):
            vals = np.exp((b - 1.0) * np.log(dl)[None, :] + (c - b - 1.0) * np.log(dr)[None, :]
                          - a * np.log(dr[None, :] + wz[:, None] * t[None, :]))
        vals = np.where(np.isfinite(vals), vals, 0.0)
        part = vals @ w
        total = h * part if level == 0 else 0.5 * total + h * part
        if prev is not None and level >= 4:
            if np.all(np.abs(total - prev) <= tol * np.maximum(np.abs(total), 1e-300)):
                return pref * total
        prev = total.copy()
    if np.all(np.abs(total - prev) <= 1e-9 * np.maximum(np.abs(total), 1e-300)):
        return pref * total
    raise NoConvergence("hyp2f1: Euler integral did not converge", result=pref * total)


# Endpoint exponents of the Euler integrand are b - 1 and c - b - 1. The
# tanh-sinh grid stops ~1e-300 from the endpoints, losing about
# 1e-300^s / s of mass for exponent s - 1, so s must stay clear of 0.
_EULER_MIN_EXPONENT = 0.05


def _euler_ok(b, c):
    return b.real >= _EULER_MIN_EXPONENT and (c - b).real >= _EULER_MIN_EXPONENT


def _unit_interval(a, b, c, w):
    """2F1 at ``z = 1 - w`` for ``w`` in ``(0, 1]``."""
    z = 1.0 - w
    out = np.empty(w.shape, dtype=complex)
    # the transformation is cheap unless c - a - b is (nearly) an integer and
    # the Euler integral is needed
    degenerate = _near_integer(c - a - b)
    euler = degenerate and (_euler_ok(b, c) or _euler_ok(a, c))
    low = z <= (_SERIES_Z_MAX if euler else _SERIES_Z_SWITCH)
    if np.any(low):
        out[low] = _series(a, b, c, z[low])
    high = ~low
    if not np.any(high):
        return out
    wh = w[high]
    if not degenerate:
        out[high] = _one_minus_z(a, b, c, wh)
        return out
    if euler:
        if not _euler_ok(b, c):
            a, b = b, a
        out[high] = _euler(a, b, c, wh)
        return out
    # symmetric perturbation of b, extrapolated in eps^2
    eps = 1e-3
    f1 = 0.5 * (_one_minus_z(a, b + eps, c, wh) + _one_minus_z(a, b - eps, c, wh))
    f2 = 0.5 * (_one_minus_z(a, b + 2 * eps, c, wh) + _one_minus_z(a, b - 2 * eps, c, wh))
    out[high] = (4.0 * f1 - f2) / 3.0
    return out


def hyp2f1(a, b, c, x):
    """Gauss hypergeometric function ``2F1(a, b; c; x)``.

    Parameters
    ----------
    a, b, c : complex
        Parameters; ``c`` must not be a non-positive integer.
    x : float or array_like
        Real argument(s) in ``(-1e6, 1)``.

    Raises
    ------
    PoleError
        If ``c`` is within tolerance of ``0, -1, -2, ...``.
    DomainError
        If some ``x >= 1`` or ``x <= -1e6``.
    """
    a, b, c = complex(a), complex(b), complex(c)
    if is_pole(c):
        raise PoleError(f"hyp2f1: c = {c} is a non-positive integer", factor="c")
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa >= 1.0) or np.any(xa <= X_MIN) or not np.all(np.isfinite(xa)):
        raise DomainError("hyp2f1 requires real x in (-1e6, 1)")
    # argument normalisation makes the function exactly symmetric in (a, b)
    if (a.real, a.imag) > (b.real, b.imag):
        a, b = b, a
    out = np.empty(xa.shape, dtype=complex)
    mid = np.abs(xa) <= 0.5
    if np.any(mid):
        out[mid] = _series(a, b, c, xa[mid])
    pos = xa > 0.5
    if np.any(pos):
        out[pos] = _unit_interval(a, b, c, 1.0 - xa[pos])
    neg = xa < -0.5
    if np.any(neg):
        xn = xa[neg]
        out[neg] = np.exp(-a * np.log1p(-xn)) * _unit_interval(a, c - b, c, 1.0 / (1.0 - xn))
    return complex(out[0]) if scalar else out


def hyp2f1_complement(a, b, c, w):
    """``2F1(a, b; c; 1 - w)`` for ``w`` in ``(0, 1]``.

    Takes the distance ``w`` to the branch point directly, so that arguments
    such as ``1 - w = sin^2 phi`` with ``w = cos^2 phi`` keep full relative
    accuracy near ``z = 1``.
    """
    a, b, c = complex(a), complex(b), complex(c)
    if is_pole(c):
        raise PoleError(f"hyp2f1: c = {c} is a non-positive integer", factor="c")
    scalar = np.ndim(w) == 0
    wa = np.atleast_1d(np.asarray(w, dtype=float))
    if np.any(~(wa > 0)) or np.any(wa > 1.0):
        raise DomainError("hyp2f1_complement requires w in (0, 1]")
    if (a.real, a.imag) > (b.real, b.imag):
        a, b = b, a
    out = _unit_interval(a, b, c, wa)
    return complex(out[0]) if scalar else out


def hyp2f1_euler(a, b, c, x, tol=1e-12):
    """2F1 from the Euler integral; requires ``Re c > Re b > 0``."""
    a, b, c = complex(a), complex(b), complex(c)
    if not (c.real > b.real > 0):
        raise DomainError("Euler integral requires Re c > Re b > 0")
    xa = float(x)
    if xa > 1.0:
        raise DomainError("Euler integral requires x not in (1, inf)")
    return complex(_euler(a, b, c, np.array([1.0 - xa]))[0])


__all__ = ["hyp2f1", "hyp2f1_complement", "hyp2f1_euler", "X_MIN"]
