"""Independent numerical oracles for the integral identities behind the
special value, the lower-bound fact used for test functionals, and the
test-function family ``u_T``.

Every ``verify_*`` routine computes the left side by quadrature and the
right side in closed form, and returns an :class:`IdentityReport`.
"""

import cmath
import math
import time
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from .bessel import bessel_j, bessel_k
from .complexfn import gamma, is_pole, log_gamma, rgamma
from .errors import DomainError, HypothesisNotMet, PoleError
from .forms import (FormParams, ell_mod_closed, ell_mod_direct, ell_mod_ft_spherical,
                    ft_spherical)
from .hypergeom import hyp2f1, hyp2f1_complement
from .quad import integrate_1d, integrate_oscillatory, radial_fourier
from .repr import (RepParams, bump, bump_mass, dilate, norm_complementary_sq, norm_unitary_sq,
                   spherical_vector)

ABS_FALLBACK = 1e-12
TOL_REAL = 1e-7
TOL_COMPLEX = 1e-6
_QUAD_TOL = 1e-11
_MARGIN = 0.1


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one identity check.

    ``passed`` holds iff ``rel_residual <= tol``; the residual is absolute
    when ``|rhs| < 1e-12``.
    """

    identity_id: str
    params: Dict[str, object]
    lhs: complex
    rhs: complex
    rel_residual: float
    tol: float
    passed: bool
    seconds: float = 0.0

    def as_dict(self):
        """JSON-ready dict; timing is left out so reports are reproducible."""

        def enc(v):
            if isinstance(v, complex):
                return {"re": v.real, "im": v.imag}
            if isinstance(v, np.ndarray):
                return v.tolist()
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            if isinstance(v, (np.floating, np.integer, np.bool_)):
                return v.item()
            return v

        return {
            "identity_id": self.identity_id,
            "params": {k: enc(v) for k, v in self.params.items()},
            "lhs": enc(complex(self.lhs)),
            "rhs": enc(complex(self.rhs)),
            "rel_residual": self.rel_residual,
            "tol": self.tol,
            "pass": self.passed,
        }


def residual(lhs, rhs):
    """Relative residual, absolute when ``|rhs| < 1e-12``."""
    d = abs(complex(lhs) - complex(rhs))
    return d if abs(rhs) < ABS_FALLBACK else d / abs(rhs)


def _report(identity_id, params, lhs, rhs, tol, t0):
    res = residual(lhs, rhs)
    return IdentityReport(identity_id, dict(params), complex(lhs), complex(rhs), float(res),
                          float(tol), bool(res <= tol), time.perf_counter() - t0)


def _is_complex(*zs):
    return any(complex(z).imag != 0 for z in zs)


def _default_tol(tol, *zs):
    if tol is not None:
        return tol
    return TOL_COMPLEX if _is_complex(*zs) else TOL_REAL


def _cpow(x, e):
    """``x^e`` for positive real arrays and complex ``e``."""
    e = complex(e)
    if e.imag == 0.0:
        return np.power(x, e.real)
    return np.exp(e * np.log(x))


def _gamma_checked(z, name):
    if is_pole(z):
        raise PoleError(f"Gamma({name}) has a pole", factor=name)
    return gamma(z)


# ---------------------------------------------------------------------------
# the five integral identities


def verify_A1(a, b, nu, mu, tol=None):
    """``int_0^inf J_nu(b x) x^(nu+1) (x^2 + a^2)^(-mu-1) dx
    = a^(nu-mu) b^mu K_(nu-mu)(a b) / (2^mu Gamma(mu+1))``.

    Parameters
    ----------
    a, b : float
        Positive scales.
    nu : float
        Real order ``>= -1/2``.
    mu : complex
        With ``-1 < nu < Re(2 mu + 3/2)``.
    """
    t0 = time.perf_counter()
    a, b, nu, mu = float(a), float(b), float(nu), complex(mu)
    tol = _default_tol(tol, mu)
    if not (a > 0 and b > 0):
        raise DomainError("A1 requires a, b > 0")
    if not (-1.0 < nu < (2 * mu + 1.5).real):
        raise DomainError("A1 requires -1 < nu < Re(2 mu + 3/2)")
    if nu < -0.5:
        raise DomainError("A1: J order must be >= -1/2")
    rg = rgamma(mu + 1.0)

    def f(x):
        return bessel_j(nu, b * x) * x ** (nu + 1.0) * _cpow(x * x + a * a, -mu - 1.0)

    first = (0.5 * nu + 0.75) * math.pi / b
    res = integrate_oscillatory(f, 0.0, first, math.pi / b, tol=0.01 * tol)
    rhs = (_cpow(a, nu - mu) * _cpow(b, mu) * bessel_k(nu - mu, a * b) * rg
           / _cpow(2.0, mu))
    return _report("A1", {"a": a, "b": b, "nu": nu, "mu": mu}, res.value, rhs, tol, t0)


def verify_A2(a, b, nu, mu, lam, tol=None):
    """``int_0^inf x^-lam K_mu(a x) J_nu(b x) dx`` against its 2F1 closed form.

    Right side: ``b^nu Gamma((nu-lam+mu+1)/2) Gamma((nu-lam-mu+1)/2)
    / (2^(lam+1) a^(nu-lam+1) Gamma(nu+1)) 2F1(.., ..; nu+1; -b^2/a^2)``.
    Requires ``a, b > 0`` and ``Re(nu - lam + 1) > |Re mu|``. The degenerate
    case ``b = 0`` with ``nu > 0`` returns a report flagged ``skipped`` (both
    sides vanish).
    """
    t0 = time.perf_counter()
    a, b, nu, mu, lam = float(a), float(b), float(nu), complex(mu), float(lam)
    tol = _default_tol(tol, mu)
    if b == 0.0 and nu > 0 and a > 0:
        # J_nu(0) = 0 and the right side carries b^nu: both sides vanish
        return IdentityReport("A2", {"a": a, "b": b, "nu": nu, "mu": mu, "lambda": lam,
                                     "skipped": True}, 0j, 0j, 0.0, float(tol), True,
                              time.perf_counter() - t0)
    if not (a > 0 and b > 0):
        raise DomainError("A2 requires a, b > 0 (so that Re(a +- i b) > 0)")
    if not (nu - lam + 1.0 > abs(mu.real)):
        raise DomainError("A2 requires Re(nu - lam + 1) > |Re mu|")
    if nu < -0.5:
        raise DomainError("A2: J order must be >= -1/2")
    p1 = 0.5 * (nu - lam + mu + 1.0)
    p2 = 0.5 * (nu - lam - mu + 1.0)

    def f(x):
        return x ** (-lam) * bessel_k(mu, a * x) * bessel_j(nu, b * x)

    res = integrate_1d(f, (0.0, math.inf), tol=0.01 * tol)
    rhs = (b ** nu * _gamma_checked(p1, "p1") * _gamma_checked(p2, "p2")
           / (2.0 ** (lam + 1.0) * a ** (nu - lam + 1.0) * math.gamma(nu + 1.0))
           * hyp2f1(p1, p2, nu + 1.0, -(b * b) / (a * a)))
    return _report("A2", {"a": a, "b": b, "nu": nu, "mu": mu, "lambda": lam}, res.value, rhs,
                   tol, t0)


def verify_A3(a, b, mu, nu, sigma, tol=None):
    """``int_0^inf K_mu(a x) K_nu(b x) x^(sigma-1) dx`` against its 2F1 closed
    form with argument ``1 - b^2/a^2``.

    Requires ``Re sigma > |Re mu| + |Re nu|``. If ``b > a`` the roles of
    ``(a, mu)`` and ``(b, nu)`` are swapped, which leaves the left side
    unchanged and keeps the 2F1 argument in ``(-inf, 1)``.
    """
    t0 = time.perf_counter()
    a, b, mu, nu, sigma = float(a), float(b), complex(mu), complex(nu), complex(sigma)
    tol = _default_tol(tol, mu, nu, sigma)
    if not (a > 0 and b > 0):
        raise DomainError("A3 requires a, b > 0")
    if not (sigma.real > abs(mu.real) + abs(nu.real)):
        raise DomainError("A3 requires Re sigma > |Re mu| + |Re nu|")
    params = {"a": a, "b": b, "mu": mu, "nu": nu, "sigma": sigma}
    if b > a:
        a, b, mu, nu = b, a, nu, mu

    def f(x):
        return bessel_k(mu, a * x) * bessel_k(nu, b * x) * _cpow(x, sigma - 1.0)

    res = integrate_1d(f, (0.0, math.inf), tol=0.01 * tol)
    g = 1.0
    for k, z in enumerate([(sigma + mu + nu) / 2, (sigma - mu + nu) / 2,
                           (sigma + mu - nu) / 2, (sigma - mu - nu) / 2]):
        g = g * _gamma_checked(z, f"g{k}")
    rhs = (_cpow(2.0, sigma - 3.0) * _cpow(b, nu) * g
           / (_cpow(a, nu + sigma) * _gamma_checked(sigma, "sigma"))
           * hyp2f1((sigma + mu + nu) / 2, (sigma - mu + nu) / 2, sigma, 1.0 - (b * b) / (a * a)))
    return _report("A3", params, res.value, rhs, tol, t0)


def verify_A4(a, b, c, x, tol=None):
    """Euler integral: ``2F1(a, b; c; x)`` against
    ``Gamma(c)/(Gamma(b) Gamma(c-b)) int_0^1 t^(b-1) (1-t)^(c-b-1) (1-x t)^-a dt``.

    Requires ``Re c > Re b > 0`` and ``x <= 1``; at ``x = 1`` the left side
    is Gauss's sum (``Re(c - a - b) > 0``).
    """
    t0 = time.perf_counter()
    a, b, c, x = complex(a), complex(b), complex(c), float(x)
    tol = _default_tol(tol, a, b, c)
    if not (c.real > b.real > 0):
        raise DomainError("A4 requires Re c > Re b > 0")
    if x > 1.0:
        raise DomainError("A4 requires x not in (1, inf)")
    if x == 1.0:
        if not (c - a - b).real > 0:
            raise DomainError("A4 at x = 1 requires Re(c - a - b) > 0")
        lhs = gamma(c) * gamma(c - a - b) * rgamma(c - a) * rgamma(c - b)
    else:
        lhs = hyp2f1(a, b, c, x)

    def f(t, s):
        # s = 1 - t without cancellation
        return _cpow(t, b - 1.0) * _cpow(s, c - b - 1.0) * _cpow(s + (1.0 - x) * t, -a)

    res = integrate_1d(f, (0.0, 1.0), tol=0.01 * tol, complement=True)
    rhs = gamma(c) * rgamma(b) * rgamma(c - b) * res.value
    return _report("A4", {"a": a, "b": b, "c": c, "x": x}, lhs, rhs, tol, t0)


def verify_A5(alpha, beta, gam, sigma, z, tol=None):
    """``int_0^inf x^(gam-1) (x+z)^-sigma 2F1(alpha, beta; gam; -x) dx
    = Gamma(gam) Gamma(alpha-gam+sigma) Gamma(beta-gam+sigma)
    / (Gamma(sigma) Gamma(alpha+beta-gam+sigma)) 2F1(.., ..; ..; 1-z)``.

    Implemented for real ``z > 0``; requires ``Re gam > 0``,
    ``Re(alpha - gam + sigma) > 0`` and ``Re(beta - gam + sigma) > 0``.
    """
    t0 = time.perf_counter()
    al, be, ga, si, z = complex(alpha), complex(beta), complex(gam), complex(sigma), float(z)
    tol = _default_tol(tol, al, be, ga, si)
    if not z > 0:
        raise DomainError("A5 is implemented for real z > 0")
    if not (ga.real > 0 and (al - ga + si).real > 0 and (be - ga + si).real > 0):
        raise DomainError("A5 requires Re gam > 0, Re(alpha-gam+sigma) > 0, "
                          "Re(beta-gam+sigma) > 0")

    def f(x):
        # Pfaff: 2F1(al, be; ga; -x) = (1+x)^-al 2F1(al, ga-be; ga; x/(1+x))
        w = 1.0 / (1.0 + x)
        F = np.exp(-al * np.log1p(x)) * hyp2f1_complement(al, ga - be, ga, w)
        return _cpow(x, ga - 1.0) * _cpow(x + z, -si) * F

    res = integrate_1d(f, (0.0, math.inf), tol=0.01 * tol)
    A, B, C = al - ga + si, be - ga + si, al + be - ga + si
    rhs = (_gamma_checked(ga, "gamma") * _gamma_checked(A, "alpha-gamma+sigma")
           * _gamma_checked(B, "beta-gamma+sigma") / (_gamma_checked(si, "sigma")
                                                      * _gamma_checked(C, "C"))
           * hyp2f1(A, B, C, 1.0 - z))
    return _report("A5", {"alpha": al, "beta": be, "gamma": ga, "sigma": si, "z": z},
                   res.value, rhs, tol, t0)


# ---------------------------------------------------------------------------
# randomized admissible draws


def _logu(rng, lo, hi):
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def draw_A1(rng, complex_order=False):
    a, b = _logu(rng, 0.3, 3.0), _logu(rng, 0.3, 3.0)
    nu = float(rng.uniform(-0.5, 2.5))
    lo = max((nu - 1.5) / 2 + _MARGIN, -1.0 + _MARGIN)
    mu = lo + _logu(rng, 0.05, 2.5)
    if complex_order:
        mu = complex(mu, rng.uniform(-2.0, 2.0))
    return {"a": a, "b": b, "nu": nu, "mu": mu}


def draw_A2(rng, complex_order=False):
    a, b = _logu(rng, 0.5, 3.0), _logu(rng, 0.3, 3.0)
    nu = float(rng.uniform(0.0, 3.0))
    mu_re = float(rng.uniform(-1.5, 1.5))
    lam = nu + 1.0 - abs(mu_re) - _MARGIN - _logu(rng, 0.05, 2.0)
    mu = complex(mu_re, rng.uniform(-2.0, 2.0)) if complex_order else mu_re
    return {"a": a, "b": b, "nu": nu, "mu": mu, "lam": lam}


def draw_A3(rng, complex_order=False):
    a, b = _logu(rng, 0.3, 3.0), _logu(rng, 0.3, 3.0)
    mu, nu = float(rng.uniform(-1.5, 1.5)), float(rng.uniform(-1.5, 1.5))
    sigma = abs(mu) + abs(nu) + _MARGIN + _logu(rng, 0.05, 3.0)
    if complex_order:
        mu = complex(mu, rng.uniform(-3.0, 3.0))
        nu = complex(nu, rng.uniform(-3.0, 3.0))
    return {"a": a, "b": b, "mu": mu, "nu": nu, "sigma": sigma}


def draw_A4(rng, complex_order=False):
    b = _MARGIN + _logu(rng, 0.05, 3.0)
    c = b + _MARGIN + _logu(rng, 0.05, 3.0)
    a = float(rng.uniform(-2.0, 3.0))
    x = float(rng.uniform(-20.0, 0.95))
    if complex_order:
        a = complex(a, rng.uniform(-2.0, 2.0))
    return {"a": a, "b": b, "c": c, "x": x}


def draw_A5(rng, complex_order=False):
    gam = _MARGIN + _logu(rng, 0.05, 3.0)
    sigma = float(rng.uniform(0.2, 3.5))
    alpha = gam - sigma + _MARGIN + _logu(rng, 0.05, 3.0)
    beta = gam - sigma + _MARGIN + _logu(rng, 0.05, 3.0)
    z = _logu(rng, 0.2, 5.0)
    if complex_order:
        alpha = complex(alpha, rng.uniform(-2.0, 2.0))
    return {"alpha": alpha, "beta": beta, "gam": gam, "sigma": sigma, "z": z}


IDENTITIES: Dict[str, tuple] = {
    "A1": (verify_A1, draw_A1),
    "A2": (verify_A2, draw_A2),
    "A3": (verify_A3, draw_A3),
    "A4": (verify_A4, draw_A4),
    "A5": (verify_A5, draw_A5),
}


def sweep(identity_id, draws=50, seed=0, complex_fraction=0.3, tol=TOL_REAL) -> List[IdentityReport]:
    """Randomized admissible sweep of one integral identity.

    The first ``complex_fraction`` of the draws use complex parameters and are
    held to ``10 * tol``; the rest are real and held to ``tol``. Reports are
    in draw order.
    """
    if identity_id not in IDENTITIES:
        raise DomainError(f"unknown identity {identity_id!r}")
    fn, draw = IDENTITIES[identity_id]
    rng = np.random.default_rng([seed, int(identity_id[1])])
    n_complex = int(round(complex_fraction * draws))
    out = []
    for k in range(draws):
        params = draw(rng, complex_order=k < n_complex)
        out.append(fn(**params, tol=tol * (10.0 if k < n_complex else 1.0)))
    return out


# ---------------------------------------------------------------------------
# spherical-vector identities


def verify_L34(n, nu, r, tol=1e-7):
    """Radial Fourier quadrature of ``psi_nu`` against the K-Bessel closed form."""
    t0 = time.perf_counter()
    p = RepParams(n, nu)
    N, s = p.N, p.nu + 0.5 * p.N
    lhs = radial_fourier(lambda x: _cpow(1.0 + np.asarray(x) ** 2, -s), N, r, tol=0.01 * tol)
    rhs = ft_spherical(p, r)
    return _report("L34", {"n": n, "nu": p.nu, "r": float(r)}, lhs, rhs, tol, t0)


def verify_P31(p: FormParams, tol=1e-4, override=False):
    """Direct quadrature of the model form on spherical vectors against the
    closed-form special value."""
    t0 = time.perf_counter()
    f1 = spherical_vector(p.rep())
    f2 = None if p.m == 1 else spherical_vector(p.rep_prime())
    lhs = ell_mod_direct(f1, f2, p, tol=min(1e-5, 0.1 * tol), override=override).value
    rhs = ell_mod_closed(p)
    return _report("P31", _form_params(p), lhs, rhs, tol, t0)


def verify_L33(p: FormParams, tol=1e-4):
    """Fourier-picture evaluation against direct quadrature on spherical
    vectors, where both integrals converge absolutely."""
    t0 = time.perf_counter()
    lhs = ell_mod_ft_spherical(p, tol=1e-8).value
    f1, f2 = spherical_vector(p.rep()), spherical_vector(p.rep_prime())
    rhs = ell_mod_direct(f1, f2, p, tol=min(1e-5, 0.1 * tol), override=True).value
    return _report("L33", _form_params(p), lhs, rhs, tol, t0)


def _form_params(p):
    return {"n": p.n, "m": p.m, "nu": p.nu, "nuprime": p.nuprime}


# ---------------------------------------------------------------------------
# lower-bound fact


def _hull(points):
    """Convex hull of 2-D points (monotone chain); returns hull vertices."""
    pts = np.unique(points, axis=0)
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for q in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], q) <= 0:
            lower.pop()
        lower.append(q)
    for q in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], q) <= 0:
            upper.pop()
        upper.append(q)
    return np.array(lower[:-1] + upper[:-1])


def oscillation(values):
    """``sup_{x,y} |f(x) - f(y)|`` of a finite set of complex values (the
    diameter of its convex hull)."""
    v = np.asarray(values, dtype=complex).ravel()
    h = _hull(np.column_stack([v.real, v.imag]))
    z = h[:, 0] + 1j * h[:, 1]
    return float(np.max(np.abs(z[:, None] - z[None, :]))) if len(z) > 1 else 0.0


def check_fact44(f_values, phi_values, weights, tol=1e-12, points=None):
    """Check ``|int f phi| >= sup|f| / 2`` on a finite measure space.

    Parameters
    ----------
    f_values : array_like of complex or callable
        Values of ``f`` on the atoms, or a vectorised function of ``points``.
    phi_values : array_like of float or callable
        Values of ``phi`` on the atoms, or a vectorised function of ``points``.
    weights : array_like of float
        Atom masses (non-negative).
    tol : float
        Relative slack for the hypothesis and conclusion comparisons.
    points : array_like, optional
        The atoms; required when ``f`` or ``phi`` is callable.

    Raises
    ------
    HypothesisNotMet
        If ``phi < 0`` somewhere, ``int phi != 1``, or
        ``osc(f) > sup|f| / 2``.
    """
    t0 = time.perf_counter()
    if callable(f_values) or callable(phi_values):
        if points is None:
            raise DomainError("points are required for callable f or phi")
        pts = np.asarray(points)
        f_values = f_values(pts) if callable(f_values) else f_values
        phi_values = phi_values(pts) if callable(phi_values) else phi_values
    f = np.asarray(f_values, dtype=complex).ravel()
    phi = np.asarray(phi_values, dtype=float).ravel()
    w = np.asarray(weights, dtype=float).ravel()
    if not (f.shape == phi.shape == w.shape) or f.size == 0 or f.size > 100_000:
        raise DomainError("need matching arrays with 1 to 1e5 atoms")
    if np.any(w < 0):
        raise DomainError("weights must be non-negative")
    sup = float(np.max(np.abs(f)))
    if np.any(phi < 0):
        raise HypothesisNotMet("phi must be non-negative")
    if abs(float(np.sum(phi * w)) - 1.0) > tol:
        raise HypothesisNotMet("int phi must equal 1")
    if oscillation(f) > 0.5 * sup * (1.0 + tol):
        raise HypothesisNotMet("osc f exceeds sup|f| / 2")
    lhs = abs(complex(np.sum(f * phi * w)))
    rhs = 0.5 * sup
    short = max(0.0, rhs - lhs)
    res = short / rhs if rhs >= ABS_FALLBACK else short
    return IdentityReport("F44", {"atoms": int(f.size)}, complex(lhs), complex(rhs), float(res),
                          float(tol), bool(res <= tol), time.perf_counter() - t0)


def random_fact44_instance(rng, atoms=None, boundary=False):
    """Hypothesis-satisfying ``(f, phi, weights)``.

    With ``boundary=True`` the oscillation equals ``sup|f| / 2`` exactly: the
    values lie on a segment ``[p, q]`` with ``|q - p| = |q| / 2`` and
    ``|p| <= |q|``.
    """
    k = int(atoms if atoms is not None else rng.integers(1, 2000))
    w = rng.uniform(0.1, 1.0, k)
    phi = rng.exponential(1.0, k) * (rng.uniform(size=k) < 0.7)
    if not np.any(phi > 0):
        phi[0] = 1.0
    phi = phi / np.sum(phi * w)
    q = complex(rng.normal(), rng.normal()) * _logu(rng, 1e-3, 1e3)
    if boundary:
        # direction d with |d| = |q|/2 pointing inward, so |p| <= |q|
        ang = rng.uniform(2 * math.pi / 3, 4 * math.pi / 3)
        d = 0.5 * abs(q) * cmath.exp(1j * (cmath.phase(q) + ang))
        s = rng.uniform(0.0, 1.0, k)
        s[0], s[-1] = 0.0, 1.0
        f = q + s * d
        if k == 1:
            f = np.array([q])
        elif rng.uniform() < 0.5:
            # extremal case: d = -q/2 and phi supported where f = q/2
            f = q - 0.5 * s * q
            phi = np.where(s == 1.0, 1.0, 0.0)
            phi = phi / np.sum(phi * w)
    else:
        r = 0.5 * abs(q) * rng.uniform(0.0, 1.0)
        # points in a disc of radius r/2 around q: oscillation <= r <= |q|/2,
        # and sup|f| >= |q| - r/2, so the disc keeps osc <= sup/2 after a
        # final check
        pts = q + 0.5 * r * np.sqrt(rng.uniform(size=k)) * np.exp(2j * math.pi * rng.uniform(size=k))
        f = pts
        while oscillation(f) > 0.5 * float(np.max(np.abs(f))):
            f = q + 0.5 * (f - q)
    return f, phi, w


def fact44_sweep(instances=1000, seed=0, boundary_share=0.2):
    """Run :func:`check_fact44` on random hypothesis-satisfying instances.

    Returns ``(reports, violations)``.
    """
    rng = np.random.default_rng([seed, 44])
    reports, violations = [], 0
    for k in range(instances):
        f, phi, w = random_fact44_instance(rng, boundary=k < boundary_share * instances)
        rep = check_fact44(f, phi, w, tol=1e-9)
        reports.append(rep)
        violations += not rep.passed
    return reports, violations


# ---------------------------------------------------------------------------
# the test-function family u_T


def unit_bump(x0, n):
    """Non-negative bump with support ``B_1(x0)`` and integral 1 on ``R^(n-1)``."""
    x0 = np.asarray(x0, dtype=float)
    return bump(x0, 1.0, amplitude=1.0 / bump_mass(n - 1, 1.0))


def _norm_sq(f, p):
    if abs(p.nu.real) < 1e-12:
        return norm_unitary_sq(f, p, tol=1e-10).value.real
    return norm_complementary_sq(f, p).value.real


def _mass(f):
    from .repr import integrate_over_support

    c, R = f.support
    return integrate_over_support(f.func, c, R, f.dim, tol=1e-10).value.real


def check_u_family(T, x0, u1, p: RepParams, tol=1e-4, base_norm=None):
    """Check the properties of ``u_T(x) = T^N u1(x0 + T (x - x0))``.

    Verifies ``supp u_T`` inside ``B_(1/T)(x0)``, ``int u_T = 1`` and
    ``||u_T||^2 = T^(2(rho - Re nu)) ||u1||^2``.

    Returns
    -------
    IdentityReport
        ``lhs = ||u_T||^2``, ``rhs = T^(2(rho - Re nu)) ||u1||^2``; ``params``
        records the support and mass checks, which also gate ``passed``.
    """
    t0 = time.perf_counter()
    T = float(T)
    if T < 1:
        raise DomainError("T must be >= 1")
    x0 = np.asarray(x0, dtype=float)
    uT = dilate(u1, T, x0)
    c, R = uT.support
    support_ok = bool(np.linalg.norm(c - x0) + R <= 1.0 / T * (1 + 1e-12))
    mass = _mass(uT)
    nT = _norm_sq(uT, p)
    n1 = _norm_sq(u1, p) if base_norm is None else base_norm
    pred = T ** (2 * (p.rho - p.nu.real)) * n1
    res = residual(nT, pred)
    mass_ok = abs(mass - 1.0) <= tol
    params = {"T": T, "n": p.n, "nu": p.nu, "support_ok": support_ok, "mass": mass}
    return IdentityReport("UT", params, complex(nT), complex(pred), float(res), float(tol),
                          bool(res <= tol and support_ok and mass_ok),
                          time.perf_counter() - t0)


def u_family_exponent(p: RepParams, x0=None, Ts=(1.0, 2.0, 4.0, 8.0)):
    """Least-squares slope of ``log ||u_T||^2`` against ``log T``; the
    prediction is ``2 (rho - Re nu)``."""
    x0 = np.full(p.N, 0.3) if x0 is None else np.asarray(x0, dtype=float)
    u1 = unit_bump(x0, p.n)
    norms = [_norm_sq(dilate(u1, T, x0), p) for T in Ts]
    slope, _ = np.polyfit(np.log(Ts), np.log(norms), 1)
    return float(slope), norms


__all__ = [
    "IdentityReport", "residual", "verify_A1", "verify_A2", "verify_A3", "verify_A4",
    "verify_A5", "draw_A1", "draw_A2", "draw_A3", "draw_A4", "draw_A5", "IDENTITIES", "sweep",
    "verify_L34", "verify_P31", "verify_L33", "oscillation", "check_fact44",
    "random_fact44_instance", "fact44_sweep", "unit_bump", "check_u_family",
    "u_family_exponent", "TOL_REAL", "TOL_COMPLEX",
]


# ---------------------------------------------------------------------------
# geometry invariants


def verify_refactorization(g, tol=1e-9):
    """Bruhat and Iwasawa reconstruction residuals of ``g`` (absolute,
    already normalised). The Bruhat report is omitted on the lower cell."""
    from . import geom

    out = []
    t0 = time.perf_counter()
    iw = geom.iwasawa_residual(g)
    out.append(_report("iwasawa", {"n": g.n, "parts": iw}, max(iw.values()), 0.0, tol, t0))
    t0 = time.perf_counter()
    br = geom.bruhat_residual(g)
    if br is not None:
        out.append(_report("bruhat", {"n": g.n, "parts": br}, max(br.values()), 0.0, tol, t0))
    return out


def verify_conformal(g, x, y, tol=1e-9):
    """``|g.x - g.y|^2 = j(g, x) |x - y|^2 j(g, y)``."""
    from . import geom

    t0 = time.perf_counter()
    gx, jx = geom.action_and_factor(g, x)
    gy, jy = geom.action_and_factor(g, y)
    lhs = float(np.sum((gx[0] - gy[0]) ** 2))
    rhs = float(jx[0] * np.sum((np.asarray(x) - np.asarray(y)) ** 2) * jy[0])
    return _report("conformal", {"n": g.n}, lhs, rhs, tol, t0)


def verify_change_of_variables(g, center, radius, tol=1e-4):
    """``int h(g.x) j(g, x)^(n-1) dx = int h`` for a bump ``h`` on ``B_radius(center)``.

    Raises
    ------
    DomainError
        If the preimage of the ball is unbounded.
    """
    from . import geom
    from .repr import _image_ball, gauss_ball_rule

    t0 = time.perf_counter()
    center = np.asarray(center, dtype=float)
    N = g.n - 1
    h = bump(center, radius)
    ball = _image_ball(g.inverse(), center, radius)
    if ball is None:
        raise DomainError("preimage of the ball is unbounded")

    def integrand(x):
        shp = x.shape[:-1]
        y, j = geom.action_and_factor(g, x.reshape(-1, N))
        ok = np.isfinite(j)
        out = np.zeros(len(j), dtype=complex)
        out[ok] = h.func(y[ok]) * j[ok] ** N
        return out.reshape(shp)

    # the integrand is a bump on the preimage ball, so Gauss rules converge fast
    prev, lhs = None, 0j
    for nr, na in ((8, 6), (12, 8), (16, 11), (24, 15), (32, 20)):
        x, w = gauss_ball_rule(ball[0], ball[1], N, nr, na)
        lhs = complex(np.sum(w * integrand(x)))
        if prev is not None and abs(lhs - prev) <= 0.1 * tol * abs(lhs):
            break
        prev = lhs
    rhs = bump_mass(N, radius)
    return _report("change_of_variables", {"n": g.n, "radius": float(radius)}, lhs, rhs, tol, t0)


def geometry_suite(n, count=100, seed=0, tol=1e-9, tol_quad=1e-4):
    """Refactorization, conformal and change-of-variables reports on
    ``count`` random elements of ``O(1, n)``."""
    from . import geom
    from .repr import _pole_of

    rng = np.random.default_rng([seed, n])
    out = []
    center, radius = np.full(n - 1, 0.2), 0.5
    done = 0
    while done < count:
        g = geom.random_element(n, rng, t_scale=1.0)
        pole = _pole_of(g.inverse())
        if pole is not None and np.linalg.norm(pole - center) < 1.5 * radius:
            continue
        out.extend(verify_refactorization(g, tol))
        x, y = rng.normal(size=n - 1), rng.normal(size=n - 1)
        out.append(verify_conformal(g, x, y, tol))
        out.append(verify_change_of_variables(g, center, radius, tol_quad))
        done += 1
    return out


__all__ += ["verify_refactorization", "verify_conformal", "verify_change_of_variables",
            "geometry_suite"]


# ---------------------------------------------------------------------------
# suites over the forms module

REGION_POINTS = ((3, 2, 3.0, 1.0), (4, 2, 3.5, 1.0), (3, 2, 4.0, 1.5), (4, 3, 2.5, 1.2))
OVERLAP_POINTS = ((4, 2, 1.5, 0.1), (4, 3, 1.5, 0.3j))
CHAIN_POINTS = ((4, 2, 0.2, 0.2), (3, 2, 0.1, 0.1), (4, 2, 0.3, 2j))
L34_NUS = (0.0, 0.4, -0.3, 1.5j, 0.25 + 0.8j)
L34_RADII = (0.1, 0.5, 1.0, 2.5, 6.0)


def verify_chain(p: FormParams, tol=1e-4):
    """Largest adjacent-stage residual of :func:`forms.chain_verify` as a report."""
    from .forms import chain_verify

    t0 = time.perf_counter()
    steps = chain_verify(p, tol=1e-8)
    worst = max(steps, key=lambda s: s.residual)
    params = dict(_form_params(p), steps=[s.name for s in steps],
                  residuals=[s.residual for s in steps],
                  converged=all(s.converged for s in steps))
    res = max(s.residual for s in steps)
    return IdentityReport("chain", params, worst.value_from, worst.value_to, float(res),
                          float(tol), bool(res <= tol), time.perf_counter() - t0)


def forms_suite(tol_1d=1e-7, tol_nd=1e-4):
    """Fourier transform of the spherical vector on a 5 x 5 grid for
    ``n = 3, 4, 5``, direct vs closed form in the convergence region, the
    three-way overlap points and the derivation chain."""
    out = []
    for n in (3, 4, 5):
        for nu in L34_NUS:
            for r in L34_RADII:
                out.append(verify_L34(n, nu, r, tol=tol_1d))
    for n, m, nu, nup in REGION_POINTS:
        out.append(verify_P31(FormParams(n, m, nu, nup), tol=tol_nd))
    for n, m, nu, nup in OVERLAP_POINTS:
        out.append(verify_L33(FormParams(n, m, nu, nup), tol=tol_nd))
    for n, m, nu, nup in CHAIN_POINTS:
        out.append(verify_chain(FormParams(n, m, nu, nup), tol=tol_nd))
    return out


def invariance_bumps(p: FormParams):
    """Compact bumps for the invariance check, away from ``x'' = 0``."""
    c1 = np.full(p.N, 1.2)
    c1[:p.M] = 0.2
    f1 = bump(c1, 0.6)
    f2 = bump(np.full(p.M, -0.1), 0.7)
    return f1, f2


def invariance_suite(p: FormParams, count=20, seed=0, tol=1e-4, t_scale=0.5):
    """Relative change of the form on bumps under ``count`` random elements
    of the embedded ``G'``. Elements that send points near either support to
    infinity are redrawn."""
    from . import geom
    from .forms import invariance_check
    from .repr import _pole_of

    rng = np.random.default_rng([seed, p.n, p.m])
    f1, f2 = invariance_bumps(p)
    c1, c2 = f1.support[0], f2.support[0]
    out = []
    while len(out) < count:
        g = geom.random_subgroup_element(p.n, p.m, rng, t_scale=t_scale)
        pole = _pole_of(g)
        if pole is not None and (np.linalg.norm(pole - c1) < 0.9
                                 or np.linalg.norm(pole[:p.M] - c2) < 1.05):
            continue
        t0 = time.perf_counter()
        res = invariance_check(p, g, f1, f2, tol=1e-5, override=True)
        out.append(IdentityReport("invariance", dict(_form_params(p), draw=len(out)), res, 0.0,
                                  float(res), float(tol), bool(res <= tol),
                                  time.perf_counter() - t0))
    return out


__all__ += ["REGION_POINTS", "OVERLAP_POINTS", "CHAIN_POINTS", "verify_chain", "forms_suite",
            "invariance_bumps", "invariance_suite"]
