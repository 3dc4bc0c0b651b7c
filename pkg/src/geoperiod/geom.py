"""The Lorentz group O(1, n), its subgroups, decompositions and the rational
conformal action on flat coordinates ``x in R^(n-1)``.

Conventions: ``eta = diag(-1, 1, ..., 1)``, ``xi_plus = e_1 + e_2`` and
``xi_minus = e_1 - e_2`` (1-based basis vectors). ``K`` is the stabiliser of
``e_1`` (a copy of ``O(n)``), ``A = exp(R H_0)``, ``M`` is ``O(n-1)`` acting on
``e_3, ..., e_(n+1)``, and ``N``, ``Nbar`` are the nilpotent subgroups spanned by
the generators ``N_j`` and ``Nbar_j``.

The light-cone vector ``xi_plus`` is fixed by ``M`` and ``N`` and scaled by
``A``, which gives the fast formulas used below. Each decomposition also has
a dense matrix-factorisation counterpart (QR for Iwasawa, block LU for
Bruhat) used as an oracle.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

LORENTZ_TOL = 1e-10
BRUHAT_TOL = 1e-12


class _Undefined:
    """Marker returned where the rational action is not defined."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "UNDEFINED"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()


def eta(n):
    d = np.ones(n + 1)
    d[0] = -1.0
    return np.diag(d)


def lorentz_defect(mat):
    """Frobenius norm of ``mat^T eta mat - eta``."""
    n = mat.shape[0] - 1
    e = eta(n)
    return float(np.linalg.norm(mat.T @ e @ mat - e))


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Element of ``O(1, n)`` with ``(g e_1)_1 > 0``, stored as a read-only
    ``(n+1) x (n+1)`` matrix."""

    mat: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = np.array(self.mat, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 3:
            raise DomainError("group element must be a square matrix of size >= 3")
        if self.check:
            scale = max(1.0, float(np.linalg.norm(m)) ** 2)
            if lorentz_defect(m) > LORENTZ_TOL * scale:
                raise DomainError("matrix does not preserve the Lorentz form")
            if not m[0, 0] > 0:
                raise DomainError("matrix does not preserve the upper light cone")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def n(self):
        return self.mat.shape[0] - 1

    def __matmul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.n != self.n:
            raise DomainError("dimension mismatch")
        return GroupElement(self.mat @ other.mat, check=False)

    def inverse(self):
        e = eta(self.n)
        return GroupElement(e @ self.mat.T @ e, check=False)

    def __repr__(self):
        return f"GroupElement(n={self.n})"


def identity(n):
    return GroupElement(np.eye(n + 1), check=False)


# ---------------------------------------------------------------------------
# Lie algebra


def _E(n, i, j):
    m = np.zeros((n + 1, n + 1))
    m[i, j] = 1.0
    return m


@dataclass(frozen=True)
class LieGenerators:
    H0: np.ndarray
    N: tuple
    Nbar: tuple


def generators(n):
    """``H_0``, ``N_j`` and ``Nbar_j`` (``j = 1..n-1``) as integer-valued
    float matrices."""
    H0 = _E(n, 0, 1) + _E(n, 1, 0)
    N, Nb = [], []
    for j in range(n - 1):
        k = j + 2
        N.append(_E(n, 0, k) + _E(n, 1, k) + _E(n, k, 0) - _E(n, k, 1))
        Nb.append(_E(n, 0, k) - _E(n, 1, k) + _E(n, k, 0) + _E(n, k, 1))
    return LieGenerators(H0, tuple(N), tuple(Nb))


def kappa(X, Y):
    """Trace form ``1/2 tr(XY)``."""
    return 0.5 * float(np.trace(X @ Y))


def casimir_basis(n):
    """A kappa-orthonormal basis of ``o(1, n)`` with signs.

    Returns a list of ``(X, eps)`` with ``eps = kappa(X, X) = +-1``: the boosts
    ``E_1k + E_k1`` (``eps = +1``, the first one is ``H_0``) and the rotations
    ``E_ij - E_ji`` (``eps = -1``).
    """
    basis = []
    for k in range(1, n + 1):
        basis.append((_E(n, 0, k) + _E(n, k, 0), 1.0))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            basis.append((_E(n, i, j) - _E(n, j, i), -1.0))
    return basis


# ---------------------------------------------------------------------------
# subgroups


def _nilpotent_exp(X):
    return np.eye(X.shape[0]) + X + 0.5 * (X @ X)


def make_nbar(x):
    """``exp(sum_j x_j Nbar_j)``; exact since the exponent is 3-step nilpotent."""
    x = np.asarray(x, dtype=float).ravel()
    n = len(x) + 1
    gens = generators(n)
    X = sum((xj * Nj for xj, Nj in zip(x, gens.Nbar)), np.zeros((n + 1, n + 1)))
    return GroupElement(_nilpotent_exp(X), check=False)


def make_n(x):
    """``exp(sum_j x_j N_j)``."""
    x = np.asarray(x, dtype=float).ravel()
    n = len(x) + 1
    gens = generators(n)
    X = sum((xj * Nj for xj, Nj in zip(x, gens.N)), np.zeros((n + 1, n + 1)))
    return GroupElement(_nilpotent_exp(X), check=False)


def make_a(t, n):
    """``exp(t H_0)`` in ``O(1, n)``."""
    m = np.eye(n + 1)
    c, s = np.cosh(t), np.sinh(t)
    m[0, 0] = m[1, 1] = c
    m[0, 1] = m[1, 0] = s
    return GroupElement(m, check=False)


def make_rotation(k):
    """Embed an orthogonal ``n x n`` matrix as an element of ``K``."""
    k = np.asarray(k, dtype=float)
    n = k.shape[0]
    if np.linalg.norm(k.T @ k - np.eye(n)) > 1e-10:
        raise DomainError("rotation block is not orthogonal")
    m = np.eye(n + 1)
    m[1:, 1:] = k
    return GroupElement(m, check=False)


def make_m(k):
    """Embed an orthogonal ``(n-1) x (n-1)`` matrix as an element of ``M``."""
    k = np.asarray(k, dtype=float)
    n = k.shape[0] + 1
    big = np.eye(n)
    big[1:, 1:] = k
    return make_rotation(big)


def weyl_w0(n):
    """Representative of the non-trivial Weyl element, ``diag(1, -1, 1, ..., 1)``."""
    d = np.ones(n + 1)
    d[1] = -1.0
    return GroupElement(np.diag(d), check=False)


def embed_subgroup(h, k2=None, n=None):
    """Element of ``G' = (O(1, m) x O(n-m)) cap G`` inside ``O(1, n)``.

    ``h`` is an ``(m+1) x (m+1)`` Lorentz matrix placed in the upper-left
    block, ``k2`` an orthogonal ``(n-m) x (n-m)`` matrix in the lower-right.
    """
    hm = h.mat if isinstance(h, GroupElement) else np.asarray(h, dtype=float)
    m = hm.shape[0] - 1
    if k2 is None:
        if n is None:
            raise DomainError("need n or k2")
        k2 = np.eye(n - m)
    k2 = np.asarray(k2, dtype=float)
    n = m + k2.shape[0]
    out = np.eye(n + 1)
    out[: m + 1, : m + 1] = hm
    out[m + 1:, m + 1:] = k2
    return GroupElement(out)


# ---------------------------------------------------------------------------
# random elements


def random_orthogonal(d, rng):
    if d == 0:
        return np.zeros((0, 0))
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def random_element(n, rng, t_scale=1.0):
    """``k_1 exp(t H_0) k_2`` with Haar-random ``k_i`` and ``t`` uniform in
    ``[-t_scale, t_scale]``."""
    k1 = make_rotation(random_orthogonal(n, rng))
    k2 = make_rotation(random_orthogonal(n, rng))
    t = rng.uniform(-t_scale, t_scale)
    return k1 @ make_a(t, n) @ k2


def random_subgroup_element(n, m, rng, t_scale=1.0):
    """Random element of the embedded ``G'``."""
    h = random_element(m, rng, t_scale)
    return embed_subgroup(h, random_orthogonal(n - m, rng))


# ---------------------------------------------------------------------------
# decompositions: light-cone fast path


def _xi_plus(n):
    v = np.zeros(n + 1)
    v[0] = v[1] = 1.0
    return v


def iwasawa_t(g):
    """``t`` with ``g in K exp(t H_0) N``; equals ``log (g xi_plus)_1``.

    ``K`` fixes the first coordinate and ``N`` fixes ``xi_plus``.
    """
    v1 = float(g.mat[0, 0] + g.mat[0, 1])
    if not v1 > 0:
        raise DomainError("invalid group element: (g xi_plus)_1 <= 0")
    return float(np.log(v1))


@dataclass(frozen=True)
class BruhatFactors:
    y: np.ndarray
    a_gamma: float
    defined: bool


def bruhat_factor(g):
    """Coordinates of ``g in nbar(y) M a N`` read off ``g xi_plus``.

    ``g xi_plus = a^gamma * (1 + |y|^2, 1 - |y|^2, 2y)``.
    """
    v = g.mat[:, 0] + g.mat[:, 1]
    a_gamma = 0.5 * (v[0] + v[1])
    if not a_gamma > BRUHAT_TOL:
        return BruhatFactors(np.full(g.n - 1, np.nan), float(a_gamma), False)
    return BruhatFactors(v[2:] / (2.0 * a_gamma), float(a_gamma), True)


def rational_action(g, x):
    """``g . x`` for one point (shape ``(N,)``) or a batch (shape ``(k, N)``).

    For a single point the marker :data:`UNDEFINED` is returned where the
    action is undefined; for a batch those rows are NaN.
    """
    y, _ = _action_with_factor(g, x)
    if np.ndim(x) == 1 and np.isnan(y[0]):
        return UNDEFINED
    return y


def conformal_factor(g, x):
    """``j(g, x) = a(g nbar_x)^-gamma``; batch semantics as in
    :func:`rational_action`."""
    _, j = _action_with_factor(g, x)
    if np.ndim(x) == 1:
        return UNDEFINED if np.isnan(j) else float(j)
    return j


def _action_with_factor(g, x):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    if X.shape[-1] != g.n - 1:
        raise DomainError(f"point dimension {X.shape[-1]} does not match n-1 = {g.n - 1}")
    r2 = np.sum(X * X, axis=-1)
    w = np.concatenate([(1.0 + r2)[:, None], (1.0 - r2)[:, None], 2.0 * X], axis=1)
    v = w @ g.mat.T
    denom = v[:, 0] + v[:, 1]
    ok = denom > 2.0 * BRUHAT_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.where(ok[:, None], v[:, 2:] / denom[:, None], np.nan)
        j = np.where(ok, 2.0 / denom, np.nan)
    if single:
        return y[0], j[0]
    return y, j


def action_and_factor(g, x):
    """Batch helper returning ``(g . x, j(g, x))`` with NaN where undefined."""
    return _action_with_factor(g, np.atleast_2d(x))


# ---------------------------------------------------------------------------
# decompositions: dense oracles


def _lightcone_basis(n):
    """Orthonormal basis ``(xi_plus/sqrt2, e_3, ..., e_(n+1), xi_minus/sqrt2)``."""
    Q = np.zeros((n + 1, n + 1))
    s = np.sqrt(0.5)
    Q[0, 0] = Q[1, 0] = s
    Q[0, n] = s
    Q[1, n] = -s
    for k in range(2, n + 1):
        Q[k, k - 1] = 1.0
    return Q


def iwasawa_dense(g):
    """Iwasawa decomposition ``g = k a n`` by a QR factorisation.

    In the light-cone basis ``AN`` is upper triangular with positive diagonal
    and ``K`` is orthogonal, so the QR factors are the Iwasawa factors.
    Returns ``(k, t, n)`` as matrices and the scalar ``t``.
    """
    n = g.n
    Q = _lightcone_basis(n)
    gp = Q.T @ g.mat @ Q
    q, r = np.linalg.qr(gp)
    sgn = np.sign(np.diag(r))
    sgn[sgn == 0] = 1.0
    q = q * sgn
    r = sgn[:, None] * r
    t = float(np.log(r[0, 0]))
    k = Q @ q @ Q.T
    an = Q @ r @ Q.T
    a = make_a(t, n).mat
    nmat = np.linalg.solve(a, an)
    return k, t, nmat


def bruhat_dense(g):
    """Bruhat decomposition ``g = nbar(y) m a n(z)`` by block LU in the
    light-cone basis.

    Returns ``(y, m, t, z)`` or ``None`` if the pivot vanishes.
    """
    n = g.n
    Q = _lightcone_basis(n)
    gp = Q.T @ g.mat @ Q
    piv = gp[0, 0]
    if not piv > BRUHAT_TOL:
        return None
    # first column of the unipotent lower factor: (1, sqrt2 * y, |y|^2)
    col = gp[:, 0] / piv
    y = col[1:n] / np.sqrt(2.0)
    t = float(np.log(piv))
    p = make_nbar(-y).mat @ g.mat  # element of M A N
    a_inv = make_a(-t, n).mat
    mn = a_inv @ p
    z = mn[0, 2:].copy()
    m = mn @ make_n(-z).mat
    return y, m, t, z


def iwasawa_residual(g):
    """Reconstruction residual of the dense Iwasawa factorisation, its
    distance from ``K``, and the deviation from the fast formula."""
    k, t, nmat = iwasawa_dense(g)
    rec = k @ make_a(t, g.n).mat @ nmat
    scale = max(1.0, float(np.linalg.norm(g.mat)))
    e1 = np.zeros(g.n + 1)
    e1[0] = 1.0
    k_defect = float(np.linalg.norm(k @ e1 - e1) + np.linalg.norm(k.T @ k - np.eye(g.n + 1)))
    n_defect = float(np.linalg.norm(nmat @ _xi_plus(g.n) - _xi_plus(g.n)))
    return {
        "reconstruction": float(np.linalg.norm(rec - g.mat)) / scale,
        "k_defect": k_defect,
        "n_defect": n_defect,
        "t_fast_vs_dense": abs(t - iwasawa_t(g)),
    }


def bruhat_residual(g):
    """Residuals of the dense Bruhat factorisation against ``g`` and the
    fast light-cone extraction.

    Returns ``None`` on the lower cell, where the factorisation does not
    exist.
    """
    fac = bruhat_dense(g)
    fast = bruhat_factor(g)
    if fac is None:
        return None
    y, m, t, z = fac
    n = g.n
    factors = [make_nbar(y).mat, m, make_a(t, n).mat, make_n(z).mat]
    rec = factors[0] @ factors[1] @ factors[2] @ factors[3]
    # backward error: near the lower cell the factors are large even when g
    # is not, so normalise by the product of their norms
    scale = float(np.prod([np.linalg.norm(f, 2) for f in factors]))
    # m must be block diagonal (identity on e_1, e_2) and orthogonal
    m_defect = float(np.linalg.norm(m[:2, :] - np.eye(n + 1)[:2, :])
                     + np.linalg.norm(m[:, :2] - np.eye(n + 1)[:, :2])
                     + np.linalg.norm(m.T @ m - np.eye(n + 1)))
    return {
        "reconstruction": float(np.linalg.norm(rec - g.mat)) / scale,
        "m_defect": m_defect,
        "y_fast_vs_dense": float(np.linalg.norm(y - fast.y)),
        "a_fast_vs_dense": abs(np.exp(t) - fast.a_gamma) / fast.a_gamma,
    }


def jacobian_factor(g, x, h=1e-5):
    """``|det D(g.)(x)|^(1/(n-1))`` by central differences (oracle for
    :func:`conformal_factor`)."""
    x = np.asarray(x, dtype=float)
    d = len(x)
    J = np.empty((d, d))
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        J[:, i] = (rational_action(g, x + e) - rational_action(g, x - e)) / (2 * h)
    return abs(np.linalg.det(J)) ** (1.0 / d)
