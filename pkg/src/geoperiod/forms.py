"""The model invariant bilinear form on ``J(nu) x J'(nu')``.

With ``x = (x', x'')`` in ``R^M x R^(N-M)`` (``N = n - 1``, ``M = m - 1``)
the form is

    l(f1, f2) = int int (|x' - y|^2 + |x''|^2)^alpha |x''|^(2 beta) f1(x) f2(y) dy dx,

``alpha = nu' - rho'`` and ``beta = ((nu - rho) - (nu' - rho')) / 2``. This
module evaluates it in three independent ways on spherical vectors:

* :func:`ell_mod_direct`: the defining integral, reduced by symmetry to a
  three-dimensional quadrature (or a product rule for compact bumps);
* :func:`ell_mod_ft_spherical`: the Fourier-picture double integral with
  two K-Bessel factors and a 2F1 kernel;
* :func:`ell_mod_closed`: the Gamma-product special value.

:func:`chain_verify` checks every intermediate stage of the reduction from
the second to the third.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bessel import bessel_k
from .complexfn import gamma, is_pole, log_gamma, rgamma
from .errors import (ConvergenceRegionError, DimensionError, DomainError,
                     NoConvergence, PoleError)
from .hypergeom import hyp2f1_complement
from .quad import DecayProfile, QuadResult, integrate_1d, integrate_nd
from .repr import (RepParams, act, act_subgroup, gauss_ball_rule,
                   spherical_vector)


def sphere_volume(k):
    """``vol(S^(k-1)) = 2 pi^(k/2) / Gamma(k/2)``; ``vol(S^0) = 2``."""
    return 2.0 * math.pi ** (0.5 * k) / math.gamma(0.5 * k)


def _cpow(x, e):
    """``x^e`` for positive real arrays ``x`` and complex ``e``."""
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        return np.exp(e * np.log(x))


@dataclass(frozen=True)
class FormParams:
    """Dimensions ``0 < m < n`` and spectral parameters ``(nu, nu')``.

    ``alpha`` and ``beta`` are always derived from ``(nu, nu')``.
    """

    n: int
    m: int
    nu: complex
    nuprime: complex

    def __post_init__(self):
        if int(self.n) != self.n or int(self.m) != self.m:
            raise DomainError("n and m must be integers")
        if not 0 < self.m < self.n:
            raise DomainError("need 0 < m < n")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "nu", complex(self.nu))
        object.__setattr__(self, "nuprime", complex(self.nuprime))

    @property
    def rho(self):
        return 0.5 * (self.n - 1)

    @property
    def rhop(self):
        return 0.5 * (self.m - 1)

    @property
    def N(self):
        return self.n - 1

    @property
    def M(self):
        return self.m - 1

    @property
    def alpha(self):
        return self.nuprime - self.rhop

    @property
    def beta(self):
        return 0.5 * ((self.nu - self.rho) - (self.nuprime - self.rhop))

    def rep(self):
        return RepParams(self.n, self.nu)

    def rep_prime(self):
        return RepParams(self.m, self.nuprime)

    def validity(self):
        return classify(self)


@dataclass(frozen=True)
class ValidityClass:
    """Where the parameters sit relative to the convergence region and the
    excluded set ``nu + rho +- nu' - rho' in -2N_0``."""

    in_convergence_region: bool
    at_pole: bool
    pole_factors: tuple = ()


def _pole_args(p):
    """Arguments ``(nu + rho + nu' - rho') / 2`` and ``(nu + rho - nu' - rho') / 2``."""
    return ((p.nu + p.rho + p.nuprime - p.rhop) / 2.0,
            (p.nu + p.rho - p.nuprime - p.rhop) / 2.0)


def classify(p):
    """:class:`ValidityClass` of ``p``; pole detection uses the Gamma-pole
    tolerance of :mod:`complexfn`."""
    a = p.nu.real - p.rho
    b = p.nuprime.real - p.rhop
    inside = a >= b >= 0.0
    names = ("Gamma((nu+rho+nu'-rho')/2)", "Gamma((nu+rho-nu'-rho')/2)")
    hits = tuple(nm for nm, z in zip(names, _pole_args(p)) if is_pole(z))
    return ValidityClass(inside, bool(hits), hits)


def direct_converges(p):
    """Absolute convergence of the defining integral on spherical vectors.

    Conditions (real parts): integrability of ``|x''|^(2 beta)`` at
    ``x'' = 0``, of the joint singularity at ``(x'' = 0, y = x')``, and
    decay at infinity in ``y`` and ``x``.
    """
    if p.m < 2:
        e = p.N + 2 * (p.alpha.real + p.beta.real)
        return bool(0 < e < 2 * (p.nu.real + p.rho))
    a, b = p.alpha.real, p.beta.real
    local = (2 * b + p.N - p.M > 0) and (2 * a + 2 * b + p.N > 0)
    y_tail = a - p.nuprime.real < 0
    grow = max(2 * a, 2 * a - 2 * p.nuprime.real)
    x_tail = 2 * b + grow - 2 * (p.nu.real + p.rho) + p.N < 0
    return bool(local and y_tail and x_tail)


def ft_conditions(p):
    """Named absolute-convergence conditions of the Fourier-picture double
    integral in polar coordinates ``(q, phi)``."""
    nr, npr, ar = p.nu.real, p.nuprime.real, p.alpha.real
    sigma = p.rho + p.rhop
    return {
        "small q": sigma > abs(nr) + abs(npr),
        "phi -> pi/2": npr - abs(npr) + p.M - max(0.0, p.M + 2 * ar) > 0,
        "m >= 2": p.m >= 2,
    }


def ft_converges(p):
    return all(ft_conditions(p).values())


def chain_conditions(p):
    """Named absolute-convergence conditions of every stage of the
    reduction performed by :func:`chain_verify`."""
    conds = dict(ft_conditions(p))
    a1, b1, c1 = _f1_params(p)
    s = p.alpha + p.beta
    A2, B2 = p.nuprime - s, -s
    sigma = p.rho + p.rhop
    gam = p.nu + p.nuprime - s
    mn1 = min(a1.real, b1.real)
    conds["t-integral tail"] = c1 - mn1 - min(A2.real, B2.real) < 0
    conds["Euler representation"] = sigma > B2.real > 0
    conds["(r, t) tail"] = c1 + s.real + max(0.0, -p.nuprime.real) - mn1 < 0
    conds["r-integral ends"] = p.alpha.real < 0 and gam.real > 0
    conds["Mellin formula over t"] = (p.nuprime + 0.5 * p.M).real > 0 and p.rhop > 0
    conds["Mellin formula over x"] = (p.nuprime + p.beta + 0.5 * p.N).real > 0
    return conds


def chain_converges(p):
    return all(chain_conditions(p).values())


# ---------------------------------------------------------------------------
# closed form


def is_limit_convention(p):
    """``m = 1`` closed-form values rely on ``Gamma(rho')/Gamma(2 rho') -> 2``."""
    return p.m == 1


def _gamma_ratio_rhop(rhop):
    """``Gamma(z) / Gamma(2 z)`` by the duplication formula; analytic at 0."""
    return math.sqrt(math.pi) * 2.0 ** (1.0 - 2.0 * rhop) / math.gamma(rhop + 0.5)


def ell_mod_closed(p):
    """Special value ``l(psi_nu, psi'_nu')`` as a Gamma product:

    ``pi^(rho+rho') Gamma(rho') Gamma((nu+rho+nu'-rho')/2) Gamma((nu+rho-nu'-rho')/2)
    / (Gamma(2 rho') Gamma(rho-rho') Gamma(nu+rho))``.

    Evaluated in log-Gamma space. For ``m = 1`` the ratio
    ``Gamma(rho')/Gamma(2 rho')`` is replaced by its limit 2 (see
    :func:`is_limit_convention`).

    Raises
    ------
    PoleError
        If either Gamma factor in the numerator sits at a pole; ``factor``
        names it.
    """
    v = classify(p)
    if v.at_pole:
        raise PoleError(f"special value has a pole: {', '.join(v.pole_factors)}",
                        factor=v.pole_factors[0])
    if is_pole(p.nu + p.rho):
        return 0j
    A, B = _pole_args(p)
    logv = (log_gamma(A) + log_gamma(B) - log_gamma(p.nu + p.rho)
            + (p.rho + p.rhop) * math.log(math.pi) - math.lgamma(p.rho - p.rhop))
    return complex(np.exp(logv)) * _gamma_ratio_rhop(p.rhop)


# ---------------------------------------------------------------------------
# direct form


_BUMP_SCHEDULE = ((8, 6), (12, 8), (16, 11), (24, 15), (32, 20), (48, 28))


def _kernel(p, x, y):
    """Kernel at points ``x`` of shape ``(k, N)`` and ``y`` of shape ``(l, M)``."""
    M = p.M
    xp, xpp = x[:, :M], x[:, M:]
    s2 = np.sum(xpp * xpp, axis=1)
    d2 = np.sum((xp[:, None, :] - y[None, :, :]) ** 2, axis=2) + s2[:, None]
    return _cpow(d2, p.alpha) * _cpow(s2, p.beta)[:, None]


def _direct_bumps(f1, f2, p, tol):
    """Product Gauss-polar rule on the two supporting balls."""
    (c1, R1), (c2, R2) = f1.support, f2.support
    prev = None
    out, err, evals = 0j, math.inf, 0
    for nr, na in _BUMP_SCHEDULE:
        x, wx = gauss_ball_rule(c1, R1, p.N, nr, na)
        y, wy = gauss_ball_rule(c2, R2, p.M, nr, na)
        fx = np.nan_to_num(f1.func(x)) * wx
        fy = np.nan_to_num(f2.func(y)) * wy
        x, fx = x[fx != 0], fx[fx != 0]
        y, fy = y[fy != 0], fy[fy != 0]
        total = 0j
        step = max(1, 400_000 // max(1, len(y)))
        for s0 in range(0, len(x), step):
            total += complex(fx[s0:s0 + step] @ (_kernel(p, x[s0:s0 + step], y) @ fy))
        evals += len(x) * len(y)
        out = total
        if prev is not None:
            err = abs(out - prev)
            if err <= tol * max(abs(out), 1e-300):
                return QuadResult(out, err, evals, True)
        prev = out
    return QuadResult(out, err, evals, False)


def _angular_average(p, r, u):
    """``int_{S^(M-1)} psi'(r e - u w) dw`` for ``psi' = (1 + |y|^2)^-pp``."""
    pp = p.nuprime + p.rhop
    if p.M == 1:
        return _cpow(1.0 + (r - u) ** 2, -pp) + _cpow(1.0 + (r + u) ** 2, -pp)
    P = 1.0 + r * r + u * u
    # 1 - (2 r u / P)^2 without cancellation
    w = (1.0 + (r - u) ** 2) * (1.0 + (r + u) ** 2) / (P * P)
    shape = np.broadcast_shapes(np.shape(r), np.shape(u))
    w = np.broadcast_to(w, shape)
    F = hyp2f1_complement(pp / 2.0, (pp + 1.0) / 2.0, 0.5 * p.M, np.minimum(w.ravel(), 1.0))
    return sphere_volume(p.M) * _cpow(P, -pp) * F.reshape(shape)


def _direct_spherical(p, tol):
    """Defining integral on spherical vectors.

    With ``z = x' - y`` (``|z| = u``), ``|x''| = s`` and ``|x'| = r``, and
    ``(u, s) = q (cos phi, sin phi)``:

    ``l = vol(S^(M-1)) vol(S^(N-M-1)) int dphi dq dr
    q^(N-1+2a+2b) cos^(M-1) phi sin^(N-M-1+2b) phi r^(M-1)
    psi_nu(sqrt(r^2 + s^2)) A(r, u)``

    where ``A`` is the angular average of ``psi'`` (a 2F1).
    """
    N, M = p.N, p.M
    a, b = p.alpha, p.beta
    s_nu = p.nu + p.rho

    def integrand(phi, q, r):
        c, s = np.cos(phi), np.sin(phi)
        u, sv = q * c, q * s
        with np.errstate(all="ignore"):
            geo = (_cpow(q, N - 1 + 2 * a + 2 * b) * c ** (M - 1)
                   * _cpow(s, N - M - 1 + 2 * b) * r ** (M - 1))
            psi = _cpow(1.0 + r * r + sv * sv, -s_nu)
            return geo * psi * _angular_average(p, r, u)

    decay = [None, DecayProfile("polynomial", rate=1.0), DecayProfile("polynomial", rate=1.0)]
    res = integrate_nd(integrand, [(0.0, 0.5 * math.pi), (0.0, math.inf), (0.0, math.inf)],
                       tol=tol, decay=decay, max_points=60_000_000, min_level=3)
    vol = sphere_volume(M) * sphere_volume(N - M)
    return QuadResult(vol * res.value, vol * res.err_estimate, res.evals, res.converged)


def _direct_spherical_m1(p, tol):
    """``m = 1``: ``y`` ranges over a point, so the form is the radial integral
    ``vol(S^(N-1)) int r^(N-1+2a+2b) (1+r^2)^-(nu+rho) dr``."""
    e = p.N - 1 + 2 * (p.alpha + p.beta)
    s_nu = p.nu + p.rho
    res = integrate_1d(lambda r: _cpow(r, e) * _cpow(1.0 + r * r, -s_nu), (0.0, math.inf),
                       tol=tol)
    vol = sphere_volume(p.N)
    return QuadResult(vol * res.value, vol * res.err_estimate, res.evals, res.converged)


def _is_spherical(f, n, nu):
    return f.tag is not None and f.tag[0] == "spherical" and f.tag[1] == n \
        and abs(f.tag[2] - nu) < 1e-14


def ell_mod_direct(f1, f2, p, tol=1e-5, override=False):
    """Defining integral of the model form.

    Parameters
    ----------
    f1 : FlatFunction
        Function on ``R^N``.
    f2 : FlatFunction or None
        Function on ``R^M``; ``None`` is allowed only for ``m = 1``.
    p : FormParams
    tol : float
        Relative tolerance.
    override : bool
        Evaluate outside the convergence region when absolute convergence
        is certified (compact supports, or :func:`direct_converges` for
        spherical vectors).

    Returns
    -------
    QuadResult

    Raises
    ------
    ConvergenceRegionError
        Outside the convergence region without a valid override.
    NoConvergence
        If the quadrature misses ``tol``; the estimate is attached.
    """
    if p.m >= 2 and (f1.dim != p.N or f2 is None or f2.dim != p.M):
        raise DomainError("function dimensions do not match (N, M)")
    if not p.validity().in_convergence_region:
        if not override:
            raise ConvergenceRegionError(
                "parameters outside Re(nu)-rho >= Re(nu')-rho' >= 0; pass override=True")
        compact = f1.support is not None and (p.m == 1 or f2.support is not None)
        if not (compact or direct_converges(p)):
            raise ConvergenceRegionError("no absolute-convergence certificate")
    sph1 = _is_spherical(f1, p.n, p.nu)
    sph2 = p.m == 1 or (f2 is not None and _is_spherical(f2, p.m, p.nuprime))
    if sph1 and sph2:
        amp = f1.tag[3] * (1.0 if p.m == 1 else f2.tag[3])
        res = _direct_spherical_m1(p, tol) if p.m == 1 else _direct_spherical(p, tol)
        res = QuadResult(amp * res.value, abs(amp) * res.err_estimate, res.evals, res.converged)
    elif f1.support is not None and f2 is not None and f2.support is not None:
        res = _direct_bumps(f1, f2, p, tol)
    else:
        raise DomainError("direct form needs spherical vectors or compactly supported inputs")
    if not res.converged:
        raise NoConvergence("ell_mod_direct did not converge", result=res)
    return res


# ---------------------------------------------------------------------------
# Fourier picture


def ft_spherical(p, r):
    """Fourier transform of ``psi_nu`` on ``R^N`` at ``|x| = r``:

    ``|x|^nu K_nu(|x|) / (2^(nu + (N-2)/2) Gamma(nu + N/2))``.

    At ``r = 0`` the limit ``Gamma(nu) / (2^(N/2) Gamma(nu + N/2))`` is used
    (``Re nu > 0``).
    """
    r = float(r)
    if r < 0:
        raise DomainError("r must be >= 0")
    nu, N = p.nu, p.N
    if r == 0.0:
        if nu.real <= 0:
            raise DomainError("transform is unbounded at 0 for Re(nu) <= 0")
        return complex(gamma(nu) * rgamma(nu + 0.5 * N) / 2.0 ** (0.5 * N))
    k = bessel_k(nu, r)
    return complex(np.exp(nu * math.log(r)) * k
                   / (2.0 ** (nu + 0.5 * (N - 2)) * gamma(nu + 0.5 * N)))


def _f1_params(p):
    """Parameters of the Fourier-picture kernel ``2F1(a1, b1; c1; -t)``."""
    a1 = p.alpha + p.beta + 0.5 * p.N
    b1 = p.beta + 0.5 * (p.N - p.M)
    c1 = 0.5 * (p.N - p.M)
    return a1, b1, c1


def _checked_gamma(z, name):
    if is_pole(z):
        raise PoleError(f"{name} at a pole (argument {z})", factor=name)
    return gamma(z)


def _checked_rgamma(z, name):
    if is_pole(z):
        raise PoleError(f"{name} at a pole (argument {z})", factor=name)
    return rgamma(z)


def ft_prefactor(p):
    """Constant in front of the Fourier-picture integral on spherical vectors:

    ``2^(2a+2b-nu-nu'+2) pi^(M/2) Gamma(a1) Gamma(b1)
    / (Gamma(c1) Gamma(-alpha) Gamma(nu+N/2) Gamma(nu'+M/2))``.

    Raises
    ------
    PoleError
        From ``Gamma(-alpha)`` (and the other factors) at their poles.
    """
    a1, b1, c1 = _f1_params(p)
    if is_pole(-p.alpha):
        raise PoleError("Gamma(-alpha) has a pole (alpha in N_0)", factor="Gamma(-alpha)")
    return (2.0 ** (2 * p.alpha + 2 * p.beta - p.nu - p.nuprime + 2) * math.pi ** (0.5 * p.M)
            * _checked_gamma(a1, "Gamma(alpha+beta+N/2)")
            * _checked_gamma(b1, "Gamma(beta+(N-M)/2)")
            / (math.gamma(c1) * gamma(-p.alpha))
            * _checked_rgamma(p.nu + 0.5 * p.N, "Gamma(nu+N/2)")
            * _checked_rgamma(p.nuprime + 0.5 * p.M, "Gamma(nu'+M/2)"))


def _neg_tan(a, b, c, phi, cos_phi):
    """``2F1(a, b; c; -tan^2 phi) = cos^(2a) phi 2F1(a, c-b; c; sin^2 phi)``."""
    c2 = cos_phi * cos_phi
    shape = np.shape(c2)
    F = hyp2f1_complement(a, c - b, c, np.clip(c2, 1e-300, 1.0).ravel()).reshape(shape)
    return _cpow(cos_phi, 2 * a) * F


def _ft_integral(p, tol):
    """``int_0^(pi/2) int_0^inf q^(sigma-1) cos^(nu'+M-1) phi sin^(N-M-1) phi
    G(sin^2 phi) K_nu(q) K_nu'(q cos phi) dq dphi`` with ``sigma = rho + rho'``
    and ``G = 2F1(a1, -beta; c1; .)``, the Pfaff image of the kernel."""
    a1, b1, c1 = _f1_params(p)
    N, M = p.N, p.M
    sigma = p.rho + p.rhop

    def integrand(phi, q):
        cph = np.cos(phi)
        with np.errstate(all="ignore"):
            ang = (_cpow(cph, p.nuprime + M - 1) * np.sin(phi) ** (N - M - 1)
                   * hyp2f1_complement(a1, -p.beta, c1,
                                       np.clip(cph * cph, 1e-300, 1.0).ravel()).reshape(cph.shape))
            arg = (q * cph)
            shape = np.broadcast_shapes(phi.shape, q.shape)
            kp = bessel_k(p.nuprime, np.broadcast_to(arg, shape).ravel()).reshape(shape)
            kq = bessel_k(p.nu, q.ravel()).reshape(q.shape)
            return _cpow(q, sigma - 1) * kq * ang * kp

    decay = [None, DecayProfile("exponential", rate=1.0)]
    return integrate_nd(integrand, [(0.0, 0.5 * math.pi), (0.0, math.inf)], tol=tol,
                        decay=decay, min_level=3)


def ell_mod_ft_spherical(p, tol=1e-8):
    """Fourier-picture evaluation of ``l(psi_nu, psi'_nu')``.

    The double radial integral over ``(|x'|, |x''|)`` is computed in polar
    coordinates of that quarter plane, where the 2F1 kernel becomes a
    function of ``sin^2 phi`` with accurate ``1 - sin^2 phi = cos^2 phi``.

    Raises
    ------
    ConvergenceRegionError
        Where the double integral does not converge absolutely (see
        :func:`ft_conditions`).
    PoleError
        From ``Gamma(-alpha)`` or another prefactor Gamma at a pole.
    NoConvergence
        If the quadrature misses ``tol``.
    """
    C = ft_prefactor(p)
    bad = [k for k, v in ft_conditions(p).items() if not v]
    if bad:
        raise ConvergenceRegionError("Fourier-picture integral diverges: " + ", ".join(bad))
    res = _ft_integral(p, tol)
    f = C * sphere_volume(p.M) * sphere_volume(p.N - p.M)
    out = QuadResult(complex(f * res.value), abs(f) * res.err_estimate, res.evals, res.converged)
    if not out.converged:
        raise NoConvergence("ell_mod_ft_spherical did not converge", result=out)
    return out


# ---------------------------------------------------------------------------
# derivation chain


@dataclass(frozen=True)
class ChainStep:
    """Residual between two adjacent stages of the reduction."""

    name: str
    value_from: complex
    value_to: complex
    residual: float
    converged: bool


def _chain_stage_values(p, tol):
    N, M = p.N, p.M
    a1, b1, c1 = _f1_params(p)
    s = p.alpha + p.beta
    A2, B2 = p.nuprime - s, -s
    sigma = p.rho + p.rhop
    gam = p.nu + p.nuprime - s
    base = ft_prefactor(p) * sphere_volume(M) * sphere_volume(N - M)
    stages = []

    # (i) polar double integral
    r1 = _ft_integral(p, tol)
    stages.append(("polar double integral", base * r1.value, r1.converged))

    # (ii) r-integral by the two-K formula: one t-integral of two 2F1
    pre2 = (0.5 * 2.0 ** (sigma - 3) * gamma(A2) * gamma(B2) * gamma(gam) * gamma(p.nu - s)
            / math.gamma(sigma))

    def t_integrand(phi):
        c = np.cos(phi)
        tan = np.tan(phi)
        with np.errstate(all="ignore"):
            return (2.0 * tan ** (2 * c1 - 1) / (c * c) * _neg_tan(a1, b1, c1, phi, c)
                    * _neg_tan(A2, B2, sigma, phi, c))

    r2 = integrate_1d(t_integrand, (0.0, 0.5 * math.pi), tol=tol)
    stages.append(("single t-integral of two 2F1", base * pre2 * r2.value, r2.converged))

    # (iii) Euler representation: (r, t) double integral
    pre3 = pre2 * math.gamma(sigma) / (gamma(B2) * gamma(gam))

    def rt_integrand(phi, r):
        c = np.cos(phi)
        t = np.tan(phi) ** 2
        with np.errstate(all="ignore"):
            return (2.0 * np.tan(phi) ** (2 * c1 - 1) / (c * c) * _neg_tan(a1, b1, c1, phi, c)
                    * _cpow(r, -s - 1) * _cpow(1.0 - r, gam - 1) * _cpow(1.0 + r * t, s - p.nuprime))

    r3 = integrate_nd(rt_integrand, [(0.0, 0.5 * math.pi), (0.0, 1.0)], tol=tol, min_level=3)
    stages.append(("(r, t) double integral", base * pre3 * r3.value, r3.converged))

    # (iv) t-integral by the 2F1 Mellin-type formula: a single r-integral
    A4, B4, C4 = p.nuprime + 0.5 * M, p.nuprime - p.alpha, p.nuprime + p.beta + 0.5 * N
    pre4 = pre3 * math.gamma(c1) * gamma(A4) * gamma(B4) / (gamma(A2) * gamma(C4))

    def r_integrand(r):
        with np.errstate(all="ignore"):
            return (_cpow(r, -p.nuprime - 1 + A4) * _cpow(1.0 - r, gam - 1)
                    * hyp2f1_complement(A4, C4 - B4, C4, np.clip(r, 1e-300, 1.0)))

    r4 = integrate_1d(r_integrand, (0.0, 1.0), tol=tol)
    stages.append(("single r-integral", base * pre4 * r4.value, r4.converged))

    # (v) the same formula in x = 1/r - 1: closed form
    pre5 = (pre4 * gamma(gam) * math.gamma(0.5 * M) * gamma(-p.alpha)
            / (gamma(p.nu - s) * gamma(p.nuprime - p.alpha + 0.5 * M)))
    stages.append(("closed form", complex(base * pre5), True))
    return stages


def chain_verify(p, tol=1e-8):
    """Evaluate every stage of the reduction of the Fourier-picture integral
    to the special value and return adjacent-stage residuals.

    Each stage is its own quadrature (or, for the last, a Gamma product) with
    the accumulated constant in front, so every stage approximates the same
    number. Stages: (i) polar double integral, (ii) single ``t``-integral of
    two 2F1 after the two-K-Bessel formula, (iii) ``(r, t)`` double integral
    after the Euler representation, (iv) single ``r``-integral after the
    Mellin-type 2F1 formula over ``t``, (v) closed form after the same
    formula over ``x = 1/r - 1``.

    Raises
    ------
    ConvergenceRegionError
        If some intermediate integral fails to converge absolutely.
    """
    bad = [k for k, v in chain_conditions(p).items() if not v]
    if bad:
        raise ConvergenceRegionError("chain integrals diverge: " + ", ".join(bad))
    stages = _chain_stage_values(p, tol)
    steps = []
    for (n0, v0, c0), (n1, v1, c1) in zip(stages[:-1], stages[1:]):
        res = abs(v1 - v0) / max(abs(v1), 1e-300)
        steps.append(ChainStep(f"{n0} -> {n1}", complex(v0), complex(v1), float(res),
                               bool(c0 and c1)))
    return steps


# ---------------------------------------------------------------------------
# intertwiner at the origin and invariance


def intertwiner_at_origin(f, p, tol=1e-8, doubled=False):
    """``T f(0) = C int |x|^(nu'-rho') |x''|^((nu-nu'-(rho-rho'))/2) f(x) dx``
    with ``C = 1``.

    ``doubled=True`` uses ``|x|^(2 alpha) |x''|^(2 beta)``, the kernel of the
    model form restricted to ``y = 0``.
    """
    if f.dim != p.N:
        raise DomainError("f must live on R^N")
    e1, e2 = (2 * p.alpha, 2 * p.beta) if doubled else (p.alpha, p.beta)
    M = p.M

    def h(x):
        r2 = np.sum(x * x, axis=-1)
        s2 = np.sum(x[..., M:] ** 2, axis=-1)
        with np.errstate(all="ignore"):
            return _cpow(r2, e1 / 2) * _cpow(s2, e2 / 2) * f.func(x)

    if f.support is None:
        raise DomainError("intertwiner_at_origin needs a compactly supported f")
    c, R = f.support
    prev, out, err, evals = None, 0j, math.inf, 0
    for nr, na in _BUMP_SCHEDULE:
        x, w = gauss_ball_rule(c, R, p.N, nr, na)
        out = complex(np.sum(w * np.nan_to_num(h(x))))
        evals += len(w)
        if prev is not None:
            err = abs(out - prev)
            if err <= tol * max(abs(out), 1e-300):
                return QuadResult(out, err, evals, True)
        prev = out
    res = QuadResult(out, err, evals, False)
    raise NoConvergence("intertwiner_at_origin did not converge", result=res)


def invariance_check(p, g, f1, f2, tol=1e-8, override=False):
    """Relative change of the form under the diagonal action of ``g`` in the
    embedded ``G'``:

    ``|l(pi(g) f1, pi'(g) f2) - l(f1, f2)| / |l(f1, f2)|``.
    """
    if g.n != p.n:
        raise DomainError("group element must act on R^(1,n)")
    base = ell_mod_direct(f1, f2, p, tol, override=override).value
    g1 = act(g, f1, p.rep())
    g2 = act_subgroup(g, f2, p.rep_prime())
    moved = ell_mod_direct(g1, g2, p, tol, override=override).value
    return abs(moved - base) / max(abs(base), 1e-300)


__all__ = [
    "FormParams", "ValidityClass", "ChainStep", "classify", "direct_converges",
    "ft_conditions", "ft_converges", "chain_conditions", "chain_converges",
    "is_limit_convention", "ell_mod_closed", "ell_mod_direct", "ft_spherical",
    "ft_prefactor", "ell_mod_ft_spherical", "chain_verify", "intertwiner_at_origin",
    "invariance_check", "sphere_volume",
]
