"""Exponential-decay envelopes of the special value along the unitary axis.

Along ``nu' = i t`` the special value decays like
``t^((n-m)/2 - 1) exp(-pi t / 2)``. This module tabulates the ratio of the
closed form to that envelope, fits the power-law exponent, and converts to
the eigenvalue normalisation ``b = |c|^2 exp(pi sqrt(lambda))``.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import DomainError
from .forms import FormParams, ell_mod_closed
from .repr import lambda_nu_convert

_UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class DecayRecord:
    """One grid point of a decay scan.

    ``ratio = |ell_value| / envelope``.
    """

    lam: float
    nuprime: complex
    ell_value: complex
    envelope: float
    ratio: float

    @property
    def t(self):
        return self.nuprime.imag


def envelope_exponent(n, m):
    """Power of ``|nu'|`` in the envelope: ``(n - m)/2 - 1``."""
    return 0.5 * (n - m) - 1.0


def envelope(p: FormParams) -> float:
    """``|nu'|^((n-m)/2 - 1) exp(-pi |nu'| / 2)`` for ``nu'`` on the unitary axis.

    Raises
    ------
    DomainError
        If ``nu'`` is off ``iR`` or ``|nu'| < 1``.
    """
    nup = p.nuprime
    if abs(nup.real) > _UNITARY_TOL * max(1.0, abs(nup)):
        raise DomainError("envelope requires nu' on the unitary axis")
    t = abs(nup.imag)
    if t < 1.0:
        raise DomainError("envelope requires |nu'| >= 1")
    return t ** envelope_exponent(p.n, p.m) * math.exp(-0.5 * math.pi * t)


def stirling_envelope(p: FormParams) -> float:
    """Leading Stirling size of the ``nu'``-dependent Gamma factors of the
    closed form, ``|Gamma((nu+rho+nu'-rho')/2) Gamma((nu+rho-nu'-rho')/2)|``.

    Agrees with :func:`envelope` up to a ``nu'``-independent constant as
    ``|nu'| -> infinity``.
    """
    from .complexfn import stirling_abs

    z1 = 0.5 * (p.nu + p.rho + p.nuprime - p.rhop)
    z2 = 0.5 * (p.nu + p.rho - p.nuprime - p.rhop)
    return stirling_abs(z1.real, z1.imag) * stirling_abs(z2.real, z2.imag)


def t_grid(t_min=5.0, t_max=40.0, step=0.5):
    """Grid ``t_min, t_min + step, ..., t_max``."""
    k = int(round((t_max - t_min) / step))
    return t_min + step * np.arange(k + 1)


def sharpness_scan(n, m, nu, ts: Optional[Sequence[float]] = None) -> List[DecayRecord]:
    """Closed-form special value along ``nu' = i t`` against the envelope.

    Each grid point is specified by its eigenvalue ``lambda = rho'^2 + t^2``
    and ``nu'`` is recovered through :func:`repr.lambda_nu_convert`.

    Parameters
    ----------
    n, m : int
        Dimensions, ``0 < m < n``.
    nu : complex
        Fixed parameter, ``nu in iR`` or ``(-rho, rho)``.
    ts : sequence of float, optional
        Values of ``t``; default ``5, 5.5, ..., 40``.

    Returns
    -------
    list of DecayRecord
        In grid order.

    Raises
    ------
    PoleError
        Propagated from :func:`forms.ell_mod_closed`.
    """
    ts = t_grid() if ts is None else np.asarray(ts, dtype=float)
    rhop = 0.5 * (m - 1)
    out = []
    for t in ts:
        lam = rhop * rhop + float(t) * float(t)
        nup = lambda_nu_convert(lam, rhop)
        p = FormParams(n, m, nu, nup)
        val = ell_mod_closed(p)
        env = envelope(p)
        out.append(DecayRecord(lam, nup, val, env, abs(val) / env))
    return out


def tail_variation(records: Sequence[DecayRecord], t_from: float) -> float:
    """``(max - min) / max`` of the ratios with ``t >= t_from``."""
    r = np.array([rec.ratio for rec in records if rec.t >= t_from])
    if r.size == 0:
        raise DomainError("no records in the tail")
    return float((r.max() - r.min()) / r.max())


def fit_exponent(records: Sequence[DecayRecord], t_from: float = 0.0) -> float:
    """Slope of ``log(|ell| exp(pi t / 2))`` against ``log t`` by least squares."""
    sel = [rec for rec in records if rec.t >= t_from]
    if len(sel) < 2:
        raise DomainError("need at least two records")
    t = np.array([rec.t for rec in sel])
    y = np.log(np.array([abs(rec.ell_value) for rec in sel])) + 0.5 * math.pi * t
    slope, _ = np.polyfit(np.log(t), y, 1)
    return float(slope)


def b_coefficient(c: complex, lam: float) -> float:
    """``|c|^2 exp(pi sqrt(lambda))``.

    Raises
    ------
    DomainError
        If ``lambda < 0``.
    """
    lam = float(lam)
    if lam < 0:
        raise DomainError("b_coefficient requires lambda >= 0")
    return abs(complex(c)) ** 2 * math.exp(math.pi * math.sqrt(lam))


def fit_b_exponent(records: Sequence[DecayRecord], lam_from: float = 0.0) -> float:
    """Slope of ``log b(ell, lambda)`` against ``log lambda``; the envelope
    predicts ``(n - m - 2)/2``."""
    sel = [rec for rec in records if rec.lam >= lam_from]
    if len(sel) < 2:
        raise DomainError("need at least two records")
    lam = np.array([rec.lam for rec in sel])
    b = np.array([b_coefficient(rec.ell_value, rec.lam) for rec in sel])
    slope, _ = np.polyfit(np.log(lam), np.log(b), 1)
    return float(slope)


@dataclass(frozen=True)
class BoundCheck:
    """Constant fitted on the head of a scan and its worst excess on the rest."""

    constant: float
    max_excess: float
    holds: bool


def squared_bound_check(records: Sequence[DecayRecord], n, m, t_fit=10.0, slack=0.05):
    """Check ``|ell|^2 <= c lambda^((n-m-2)/2) exp(-pi sqrt(lambda))``.

    ``c`` is the maximum of the normalised ratio over ``t <= t_fit``. The
    check reports the largest ratio beyond ``t_fit`` relative to ``c``.
    """
    ex = 0.5 * (n - m - 2)

    def norm(rec):
        return abs(rec.ell_value) ** 2 / (rec.lam ** ex * math.exp(-math.pi * math.sqrt(rec.lam)))

    head = [norm(r) for r in records if r.t <= t_fit]
    tail = [norm(r) for r in records if r.t > t_fit]
    if not head or not tail:
        raise DomainError("records must straddle t_fit")
    c = max(head)
    excess = max(tail) / c
    return BoundCheck(c, excess, excess <= 1.0 + slack)


__all__ = [
    "DecayRecord", "envelope", "envelope_exponent", "stirling_envelope", "t_grid",
    "sharpness_scan", "tail_variation", "fit_exponent", "b_coefficient", "fit_b_exponent",
    "BoundCheck", "squared_bound_check",
]
