"""Double-exponential quadrature engines and the radial Fourier transform.

Three DE maps are used: tanh-sinh on ``[a, b]``, exp-sinh on ``[a, inf)``
and sinh-sinh on the real line. Integrands are called with numpy arrays of
nodes and must be vectorised. Refinement halves the step ``h`` and re-uses
the previous level, so the reported value only depends on the tolerance and
the refinement schedule.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, NoConvergence

MAX_EVALS_1D = 1_000_000
MAX_DIM = 4

# Half-width of the DE parameter window.  exp(pi/2 sinh 6) ~ 1e137, and the
# tanh-sinh endpoint distance at t = 6 is ~1e-275, still a normal double.
_T_MAX = 6.0


@dataclass(frozen=True)
class QuadResult:
    value: complex
    err_estimate: float
    evals: int
    converged: bool

    @property
    def real(self):
        return self.value.real


@dataclass(frozen=True)
class DecayProfile:
    """Routing metadata for an integration axis (or group of axes).

    ``kind`` is ``"compact"``, ``"polynomial"`` or ``"exponential"``; ``rate``
    is the decay exponent (``|x|^-rate`` or ``exp(-rate |x|)``) and ``scale``
    the length scale of the integrand (or the support radius when compact).
    """

    kind: str = "polynomial"
    rate: float = 2.0
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("compact", "polynomial", "exponential"):
            raise ValueError(f"unknown decay kind {self.kind!r}")
        if self.kind != "compact" and not self.rate > 0:
            raise ValueError("decay rate must be positive")
        if not self.scale > 0:
            raise ValueError("scale must be positive")


# ---------------------------------------------------------------------------
# node generation


def _t_grid(level, odd_only):
    h = 2.0 ** (-level)
    n = int(math.floor(_T_MAX / h))
    j = np.arange(-n, n + 1)
    if odd_only:
        j = j[j % 2 != 0]
    return j * h, h


def _map_nodes(kind, a, b, t):
    """Return nodes x, weights dx/dt, and endpoint distances (left, right)."""
    if kind == "finite":
        u = 0.5 * math.pi * np.sinh(t)
        half = 0.5 * (b - a)
        # distances computed without cancellation
        dl = (b - a) / (1.0 + np.exp(-2.0 * u))
        dr = (b - a) / (1.0 + np.exp(2.0 * u))
        x = np.where(t < 0, a + dl, b - dr)
        w = half * 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
        return x, w, dl, dr
    if kind == "upper":
        e = np.exp(0.5 * math.pi * np.sinh(t))
        x = a + e
        w = 0.5 * math.pi * np.cosh(t) * e
        return x, w, e, np.full_like(e, np.inf)
    if kind == "lower":
        e = np.exp(0.5 * math.pi * np.sinh(t))
        x = b - e
        w = 0.5 * math.pi * np.cosh(t) * e
        return x, w, np.full_like(e, np.inf), e
    if kind == "line":
        u = 0.5 * math.pi * np.sinh(t)
        x = np.sinh(u)
        w = 0.5 * math.pi * np.cosh(t) * np.cosh(u)
        return x, w, np.full_like(x, np.inf), np.full_like(x, np.inf)
    raise ValueError(kind)


def _classify(a, b):
    fa, fb = math.isfinite(a), math.isfinite(b)
    if fa and fb:
        return "finite"
    if fa and b == math.inf:
        return "upper"
    if fb and a == -math.inf:
        return "lower"
    if a == -math.inf and b == math.inf:
        return "line"
    raise DomainError(f"unsupported integration domain ({a}, {b})")


def de_rule(domain, level, scale=1.0):
    """Nodes and weights of the DE rule of step ``2**-level`` on ``domain``.

    Nodes whose weight underflows are dropped. ``scale`` stretches infinite
    domains (``x -> a + scale * (x - a)``).
    """
    a, b = float(domain[0]), float(domain[1])
    kind = _classify(a, b)
    t, h = _t_grid(level, odd_only=False)
    x, w, _, _ = _map_nodes(kind, a, b, t)
    if kind == "upper":
        x, w = a + scale * (x - a), w * scale
    elif kind == "lower":
        x, w = b - scale * (b - x), w * scale
    elif kind == "line":
        x, w = scale * x, w * scale
    keep = np.isfinite(x) & np.isfinite(w) & (w > 1e-300)
    return x[keep], w[keep] * h


# ---------------------------------------------------------------------------
# 1-D


def _extreme(kind, a, b, x, dl, dr):
    """Nodes in the far tail of the DE map, where the integrand of any
    integrable function is negligible."""
    if kind == "finite":
        return np.minimum(dl, dr) < 1e-15 * (b - a)
    if kind == "upper":
        return (x - a > 1e15) | (dl < 1e-15)
    if kind == "lower":
        return (b - x > 1e15) | (dr < 1e-15)
    return np.abs(x) > 1e15


def _single_interval(f, a, b, tol, atol, complement, max_evals, min_level=3):
    kind = _classify(a, b)
    total = 0.0 + 0.0j
    evals = 0
    prev = None
    err = math.inf
    level = 0
    history = []
    while True:
        t, h = _t_grid(level, odd_only=level > 0)
        x, w, dl, dr = _map_nodes(kind, a, b, t)
        keep = np.isfinite(x) & (w > 1e-300)
        if kind == "finite":
            keep &= (dl > 0) & (dr > 0)
        elif kind == "upper":
            keep &= x > a
        elif kind == "lower":
            keep &= x < b
        x, w, dl, dr = x[keep], w[keep], dl[keep], dr[keep]
        if len(x):
            with np.errstate(all="ignore"):
                if complement:
                    fx = np.asarray(f(x, dr), dtype=complex)
                else:
                    fx = np.asarray(f(x), dtype=complex)
            fx = np.broadcast_to(fx, x.shape)
            bad = ~np.isfinite(fx)
            if np.any(bad):
                # overflow (e.g. inf * 0) in the far DE tail is dropped; anywhere
                # else it is a genuine failure of the integrand
                if np.any(~_extreme(kind, a, b, x[bad], dl[bad], dr[bad])):
                    raise NoConvergence("integrand returned non-finite values")
                fx = np.where(bad, 0.0, fx)
            part = np.sum(fx * w)
        else:
            part = 0.0
        evals += len(x)
        if level == 0:
            total = h * part
        else:
            total = 0.5 * total + h * part
        history.append(total)
        if prev is not None:
            err = abs(total - prev)
            if level >= min_level and err <= max(tol * abs(total), atol):
                return total, err, evals, True
        prev = total
        level += 1
        if evals * 2 > max_evals or level > 20:
            return total, err, evals, False


def integrate_1d(f, domain, tol=1e-10, atol=0.0, points=(), complement=False,
                 max_evals=MAX_EVALS_1D, strict=False):
    """Integrate a vectorised ``f`` over ``[a, b]`` or ``[a, inf)``.

    Parameters
    ----------
    f : callable
        ``f(x)`` for arrays ``x``; with ``complement=True`` it is called as
        ``f(x, b - x)`` where the second argument is computed without
        cancellation (useful for singularities at the right endpoint).
    domain : tuple
        ``(a, b)``; either end may be infinite.
    tol, atol : float
        Relative and absolute tolerances.
    points : sequence of float
        Interior break points (kinks, singularities).
    strict : bool
        Raise :class:`NoConvergence` instead of returning an unconverged
        result.
    """
    a, b = float(domain[0]), float(domain[1])
    if a == b:
        return QuadResult(0j, 0.0, 0, True)
    if a > b:
        r = integrate_1d(f, (b, a), tol, atol, points, complement, max_evals, strict)
        return QuadResult(-r.value, r.err_estimate, r.evals, r.converged)
    cuts = [a] + sorted(p for p in points if a < p < b) + [b]
    total, err, evals, ok = 0j, 0.0, 0, True
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if complement and hi != b:
            g = (lambda x, _d, f=f, hi=hi: f(x, b - x))
        else:
            g = f
        v, e, n, c = _single_interval(g, lo, hi, tol, atol / max(1, len(cuts) - 1),
                                      complement, max_evals)
        total += v
        err += e
        evals += n
        ok = ok and c
    res = QuadResult(complex(total), float(err), int(evals), bool(ok))
    if strict and not ok:
        raise NoConvergence(f"integrate_1d: no convergence on {domain}", result=res)
    return res


# ---------------------------------------------------------------------------
# N-D tensor product


def _axis_scale(profile):
    return 1.0 if profile is None else profile.scale


def _trim(x, w, profile):
    if profile is None or profile.kind == "compact":
        return x, w
    ax = np.abs(x) / profile.scale
    if profile.kind == "exponential":
        keep = profile.rate * ax < 60.0
    else:
        keep = ax < 10.0 ** (40.0 / profile.rate)
    return x[keep], w[keep]


_ND_CHUNK = 4_000_000


def _tensor_sum(f, grids, weights, npts):
    """Weighted sum of ``f`` over a tensor grid, sliced along the first axis
    so that at most about ``_ND_CHUNK`` values are held at once."""
    n0 = grids[0].size
    step = max(1, int(_ND_CHUNK * n0 // max(npts, 1)))
    wrest = weights[1:]
    total = 0j
    for i0 in range(0, n0, step):
        g = [grids[0][i0:i0 + step]] + grids[1:]
        wt = weights[0][i0:i0 + step]
        for w in wrest:
            wt = wt * w
        vals = np.asarray(f(*g), dtype=complex)
        vals = np.where(np.isfinite(vals), vals, 0.0)
        total += complex(np.sum(np.broadcast_to(vals * wt, np.broadcast_shapes(vals.shape, wt.shape))))
    return total


def integrate_nd(f, domains, tol=1e-8, decay=None, atol=0.0, max_level=8,
                 min_level=2, max_points=40_000_000, strict=False):
    """Tensor-product DE quadrature over a box in up to four dimensions.

    ``f`` is called with ``d`` arrays shaped for broadcasting (axis ``i``
    varies along dimension ``i``). ``decay`` is an optional list of
    :class:`DecayProfile` (one per axis) used to scale and trim infinite axes.
    """
    d = len(domains)
    if d > MAX_DIM:
        raise DimensionError(f"integrate_nd supports at most {MAX_DIM} dimensions")
    if d == 0:
        raise DimensionError("need at least one dimension")
    decay = list(decay) if decay is not None else [None] * d
    prev = None
    evals = 0
    err = math.inf
    total = 0j
    for level in range(max_level + 1):
        grids, weights = [], []
        for ax, (dom, prof) in enumerate(zip(domains, decay)):
            x, w = de_rule(dom, level, _axis_scale(prof))
            x, w = _trim(x, w, prof)
            shape = [1] * d
            shape[ax] = len(x)
            grids.append(x.reshape(shape))
            weights.append(w.reshape(shape))
        npts = int(np.prod([g.size for g in grids]))
        if npts > max_points:
            break
        total = _tensor_sum(f, grids, weights, npts)
        evals += npts
        if prev is not None:
            err = abs(total - prev)
            if level >= min_level and err <= max(tol * abs(total), atol):
                return QuadResult(total, err, evals, True)
        prev = total
    res = QuadResult(total, err, evals, False)
    if strict:
        raise NoConvergence("integrate_nd: no convergence", result=res)
    return res


# ---------------------------------------------------------------------------
# oscillatory tails


def wynn_epsilon(seq):
    """Wynn's epsilon algorithm; returns the best extrapolated limit."""
    s = [complex(v) for v in seq]
    n = len(s)
    if n < 3:
        return s[-1]
    e_prev = [0j] * (n + 1)
    e_cur = list(s)
    best = s[-1]
    for k in range(1, n):
        e_next = []
        for i in range(len(e_cur) - 1):
            diff = e_cur[i + 1] - e_cur[i]
            if diff == 0:
                e_next.append(complex(np.inf))
                continue
            e_next.append(e_prev[i + 1] + 1.0 / diff)
        e_prev, e_cur = e_cur, e_next
        if k % 2 == 0 and e_cur:
            cand = e_cur[-1]
            if np.isfinite(cand):
                best = cand
        if len(e_cur) < 2:
            break
    return best


def integrate_oscillatory(f, a, first_cut, period, tol=1e-10, max_intervals=400,
                          min_intervals=12):
    """Integrate ``f`` over ``[a, inf)`` when ``f`` oscillates with a known
    asymptotic half-period.

    The range is split at ``first_cut + k * period`` (approximate zeros);
    partial sums over the pieces are accelerated with Wynn's epsilon
    algorithm.
    """
    cuts = [a]
    c = max(first_cut, a)
    if c <= a:
        c = a + period
    cuts.append(c)
    head = integrate_1d(f, (a, c), tol=tol * 0.1, atol=0.0)
    partial = [head.value]
    evals = head.evals
    total = head.value
    estimates = []
    lo = c
    for k in range(max_intervals):
        hi = lo + period
        piece = integrate_1d(f, (lo, hi), tol=1e-14, atol=1e-300, max_evals=20000)
        evals += piece.evals
        total = total + piece.value
        partial.append(total)
        lo = hi
        if len(partial) >= min_intervals:
            est = wynn_epsilon(partial[-min(len(partial), 40):])
            estimates.append(est)
            if len(estimates) >= 3:
                spread = max(abs(estimates[-1] - estimates[-2]), abs(estimates[-2] - estimates[-3]))
                if spread <= tol * max(abs(est), 1e-300) or abs(piece.value) <= 1e-17 * max(abs(total), 1e-300):
                    return QuadResult(complex(est), float(spread), evals, True)
    est = estimates[-1] if estimates else total
    return QuadResult(complex(est), math.inf, evals, False)


# ---------------------------------------------------------------------------
# radial Fourier transform


def radial_fourier(profile, dim, r, tol=1e-10, full_output=False):
    """Fourier transform of the radial function ``u(x) = profile(|x|)`` on
    ``R^dim`` (unitary normalisation), evaluated at ``|x| = r``:

    ``r^-(k-2)/2 int_0^inf J_(k-2)/2(r s) profile(s) s^(k/2) ds``.

    Parameters
    ----------
    profile : callable
        Vectorised radial profile on ``[0, inf)``.
    dim : int
        Ambient dimension ``k >= 1``.
    r : float
        Radius ``|x| >= 0``.
    tol : float
        Relative tolerance.
    full_output : bool
        Return the :class:`QuadResult` instead of the value.

    Raises
    ------
    NoConvergence
        If the quadrature misses ``tol``; the estimate is attached.
    """
    from .bessel import bessel_j
    from .complexfn import gamma

    k = int(dim)
    if k < 1:
        raise DomainError("dimension must be >= 1")
    r = float(r)
    if r < 0:
        raise DomainError("r must be >= 0")
    mu = 0.5 * (k - 2)
    if r == 0.0:
        res = integrate_1d(lambda s: profile(s) * s ** (k - 1), (0.0, math.inf), tol=tol)
        pref = 1.0 / (2.0 ** mu * gamma(0.5 * k))
    else:
        def integrand(s):
            return bessel_j(mu, r * s) * profile(s) * s ** (0.5 * k)

        first_zero = (1.0 + 0.5 * mu - 0.25) * math.pi / r
        res = integrate_oscillatory(integrand, 0.0, first_zero, math.pi / r, tol=tol)
        pref = r ** (-mu)
    out = QuadResult(complex(pref * res.value), abs(pref) * res.err_estimate, res.evals,
                     res.converged)
    if full_output:
        return out
    if not out.converged:
        raise NoConvergence("radial_fourier did not converge", result=out)
    return out.value
