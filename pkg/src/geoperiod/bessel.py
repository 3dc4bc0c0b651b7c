"""Bessel functions J (real order) and K (complex order) of real argument.

``bessel_k`` integrates ``K_nu(x) = 1/2 int exp(-x cosh t + nu t) dt`` over
the real line with the trapezoidal rule, after shifting the contour to
``t + i*phi`` so that large imaginary orders do not cancel catastrophically.
``bessel_j`` switches between the ascending series, Bessel's (Schlaefli's)
integral and the Hankel asymptotic expansion.
"""

import math

import numpy as np

from .complexfn import log_gamma
from .errors import DomainError, NoConvergence

# Largest argument for which exp(-x) is representable.
UNDERFLOW_X = 700.0

_SERIES_X = 12.0
_TRAP_RTOL = 1e-11
_K_CHUNK = 2048
_K_BLOCK = 2_000_000
# below this argument, and for orders this far from the integers, K is
# summed from the I-series
_SMALL_X = 0.1
_SMALL_NU_GAP = 0.05


def _as_array(x):
    scalar = np.ndim(x) == 0
    return np.atleast_1d(np.asarray(x, dtype=float)), scalar


# ---------------------------------------------------------------------------
# K-Bessel


def _k_contour(nu, x):
    """Contour height phi for each x: imaginary part of the saddle, clipped."""
    b = nu.imag
    # for small |Im nu| the cancellation on the real line costs at most a
    # factor exp(pi |b| / 2), and the shifted strip would need a fine step
    if abs(b) < 0.5:
        return np.zeros_like(x)
    with np.errstate(over="ignore", invalid="ignore"):
        t0 = np.arcsinh(nu / x.astype(complex)).imag
    # for x -> 0 the saddle sits at log(2 nu / x), with phase arg(nu)
    t0 = np.where(np.isfinite(t0) & (x > 1e-150), t0, np.angle(nu))
    phi = np.clip(t0, -0.5 * math.pi + 0.06, 0.5 * math.pi - 0.06)
    return phi


def _x_cosh(logx, t):
    """``x cosh t`` from ``log x``, without overflow of ``cosh`` for tiny x."""
    return 0.5 * (np.exp(t + logx) + np.exp(-t + logx))


def _k_window(nu, x, phi):
    """Half-width L of the truncated t-range, per x."""
    a = abs(nu.real)
    c = x * np.cos(phi)
    # log-magnitude along the line: -c cosh t + a|t|; require a drop of >= 45
    # below the value at t = 0 (the peak is no larger than max(0, ...)).
    logc = np.log(c)
    L = np.maximum(4.0, math.log(2.0) - logc)
    for _ in range(400):
        t = L
        drop = _x_cosh(logc, t).real - c - a * t
        peak_shift = 0.0
        if a > 0:
            # maximum of a t - c (cosh t - 1) sits at sinh t = a / c
            with np.errstate(over="ignore"):
                ts = np.arcsinh(a / c)
            ts = np.where(np.isfinite(ts), ts, np.log(2.0 * a) - np.log(c))
            peak_shift = a * ts - (_x_cosh(logc, ts).real - c)
        need = drop - peak_shift < 45.0
        if not np.any(need):
            break
        L = np.where(need, L + 0.5, L)
    return L


def _bessel_k_scaled_array(nu, x):
    """exp(x) K_nu(x) for complex scalar nu and an array of x > 0."""
    phi = _k_contour(nu, x)
    L = _k_window(nu, x, phi)
    logx = np.log(x)
    real = nu.imag == 0.0
    # initial step of about 1/4
    n = max(64, 1 << int(math.ceil(math.log2(4.0 * float(np.max(L))))))
    prev = None
    for _ in range(10):
        u = np.linspace(-1.0, 1.0, 2 * n + 1)
        h = L[:, None] * (u[1] - u[0])
        val = np.empty(x.shape, dtype=complex)
        rows = max(1, _K_BLOCK // len(u))
        for i in range(0, len(x), rows):
            sl = slice(i, i + rows)
            if real:
                t = L[sl, None] * u[None, :]
                expo = -(_x_cosh(logx[sl, None], t) - x[sl, None]) + nu.real * t
            else:
                t = L[sl, None] * u[None, :] + 1j * phi[sl, None]
                expo = -(_x_cosh(logx[sl, None], t) - x[sl, None]) + nu * t
            val[sl] = 0.5 * np.sum(np.exp(expo), axis=1) * h[sl, 0]
        if prev is not None:
            scale = np.maximum(np.abs(val), 1e-300)
            if np.all(np.abs(val - prev) <= _TRAP_RTOL * scale):
                return val
        prev = val
        n *= 2
    raise NoConvergence(f"bessel_k: trapezoidal rule did not converge for order {nu}",
                        result=prev)


def _i_series(mu, x):
    """``I_mu(x)`` by its ascending series, for small x."""
    half = 0.5 * x
    term = np.exp(mu * np.log(half) - log_gamma(mu + 1.0))
    total = term.copy()
    q = half * half
    for k in range(200):
        term = term * q / ((k + 1.0) * (k + 1.0 + mu))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _k_small(nu, x):
    """``K_nu(x) = pi / (2 sin(pi nu)) (I_-nu(x) - I_nu(x))`` for small x and
    ``nu`` away from the integers."""
    return 0.5 * math.pi / np.sin(math.pi * nu) * (_i_series(-nu, x) - _i_series(nu, x))


def _integer_distance(nu):
    return abs(nu - round(nu.real))


def bessel_k(order, x, scaled=False, return_flag=False):
    """Modified Bessel function of the second kind ``K_order(x)``.

    Parameters
    ----------
    order : complex
        Order; ``|Im order| <= 100`` is the supported envelope.
    x : float or array_like
        Positive real argument(s).
    scaled : bool
        Return ``exp(x) K_order(x)`` instead.
    return_flag : bool
        Also return a boolean (array) marking entries that underflowed to 0.

    Raises
    ------
    DomainError
        If any ``x <= 0``.
    """
    nu = complex(order)
    xa, scalar = _as_array(x)
    if np.any(~(xa > 0)):
        raise DomainError("bessel_k requires x > 0")
    underflow = np.zeros(xa.shape, dtype=bool) if scaled else xa > UNDERFLOW_X
    out = np.zeros(xa.shape, dtype=complex)
    ok = ~underflow
    if np.any(ok):
        xo = xa[ok]
        # chunked: the trapezoidal rule holds a (points x nodes) array
        # sorted, so that the few tiny arguments that need a long contour
        # do not set the node count for a whole chunk
        vals = np.empty(xo.shape, dtype=complex)
        small = xo < _SMALL_X if _integer_distance(nu) >= _SMALL_NU_GAP else np.zeros(xo.shape, bool)
        if np.any(small):
            vals[small] = _k_small(nu, xo[small]) * np.exp(xo[small])
        rest = np.flatnonzero(~small)
        order_idx = rest[np.argsort(xo[rest])]
        for chunk in np.array_split(order_idx, max(1, -(-len(order_idx) // _K_CHUNK))):
            if len(chunk):
                vals[chunk] = _bessel_k_scaled_array(nu, xo[chunk])
        if not scaled:
            vals = vals * np.exp(-xa[ok])
        out[ok] = vals
    if nu.imag == 0.0:
        out = out.real.astype(complex)
    if scalar:
        res = complex(out[0])
        flag = bool(underflow[0])
    else:
        res, flag = out, underflow
    return (res, flag) if return_flag else res


# ---------------------------------------------------------------------------
# J-Bessel


def _j_series(nu, x):
    # sum_k (-1)^k (x/2)^(2k+nu) / (k! Gamma(k+nu+1))
    with np.errstate(divide="ignore", invalid="ignore"):
        # log(x) - log(2) stays finite for subnormal x, where x / 2 underflows
        logpre = nu * (np.log(x) - math.log(2.0)) - log_gamma(nu + 1.0).real
    pre = np.where(x > 0, np.exp(logpre), 1.0 if nu == 0 else 0.0)
    q = -0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(400):
        term = term * q / ((k + 1.0) * (k + 1.0 + nu))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return pre * total


def _j_integral(nu, x):
    # J_nu(x) = 1/pi int_0^pi cos(nu th - x sin th) dth
    #           - sin(nu pi)/pi int_0^inf exp(-x sinh t - nu t) dt
    npts = int(1.3 * float(np.max(x))) + 48
    th, w = np.polynomial.legendre.leggauss(npts)
    th = 0.5 * math.pi * (th + 1.0)
    w = 0.5 * math.pi * w
    first = np.cos(nu * th[None, :] - x[:, None] * np.sin(th)[None, :]) @ w / math.pi
    s = math.sin(nu * math.pi)
    if s == 0.0:
        return first
    # the second integrand is monotone; map [0, T] with T from the decay
    T = np.arcsinh(45.0 / x) + 1.0
    u, wu = np.polynomial.legendre.leggauss(64)
    u = 0.5 * (u + 1.0)
    t = T[:, None] * u[None, :]
    second = np.exp(-x[:, None] * np.sinh(t) - nu * t) @ (0.5 * wu) * T
    return first - s / math.pi * second


def _j_asymptotic(nu, x):
    mu = 4.0 * nu * nu
    omega = x - 0.5 * nu * math.pi - 0.25 * math.pi
    P = np.ones_like(x)
    Q = np.zeros_like(x)
    a = 1.0
    prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 60):
        a = a * (mu - (2 * k - 1) ** 2) / (k * 8.0)
        term = a / x ** k
        mag = np.abs(term)
        active = active & (mag < prev) & (mag > 1e-17)
        if not np.any(active):
            break
        if k % 2 == 1:
            sign = -1.0 if (k // 2) % 2 else 1.0
            Q = Q + np.where(active, sign * term, 0.0)
        else:
            sign = -1.0 if (k // 2) % 2 else 1.0
            P = P + np.where(active, sign * term, 0.0)
        prev = np.where(active, mag, prev)
    return np.sqrt(2.0 / (math.pi * x)) * (P * np.cos(omega) - Q * np.sin(omega))


def _asymptotic_start(nu):
    return 30.0 + nu * nu


def bessel_j(order, x):
    """Bessel function of the first kind ``J_order(x)`` for real order >= -1/2.

    Raises
    ------
    DomainError
        If ``order < -1/2`` or any ``x < 0``.
    """
    nu = float(order)
    if nu < -0.5:
        raise DomainError("bessel_j requires order >= -1/2")
    xa, scalar = _as_array(x)
    if np.any(xa < 0) or not np.all(np.isfinite(xa)):
        raise DomainError("bessel_j requires finite x >= 0")
    out = np.empty_like(xa)
    ser = xa <= max(_SERIES_X, 0.85 * nu)
    asy = ~ser & (xa >= _asymptotic_start(nu))
    mid = ~ser & ~asy
    if np.any(ser):
        out[ser] = _j_series(nu, xa[ser])
    if np.any(asy):
        out[asy] = _j_asymptotic(nu, xa[asy])
    if np.any(mid):
        xm = xa[mid]
        res = np.empty_like(xm)
        # chunk so that the Gauss-Legendre order tracks the local argument
        order_idx = np.argsort(xm)
        for chunk in np.array_split(order_idx, max(1, len(xm) // 256)):
            res[chunk] = _j_integral(nu, xm[chunk])
        out[mid] = res
    return float(out[0]) if scalar else out
