"""Special values of model invariant forms on pairs of Lorentz groups.

Submodules: ``complexfn`` (Gamma), ``bessel`` (J and K), ``hypergeom``
(2F1), ``quad`` (double-exponential quadrature), ``geom`` (O(1, n)),
``repr`` (principal series), ``forms`` (the model form and its special
value), ``asym`` (decay envelopes), ``verify`` (identity oracles) and
``cli``.
"""

from . import asym, bessel, complexfn, forms, geom, hypergeom, quad, repr, verify
from .errors import (ConvergenceRegionError, DimensionError, DomainError, GeoPeriodError,
                     HypothesisNotMet, NoConvergence, PoleError)
from .forms import (FormParams, chain_verify, classify, ell_mod_closed, ell_mod_direct,
                    ell_mod_ft_spherical)
from .repr import RepParams, spherical_vector
from .verify import IdentityReport

__version__ = "0.1.0"

__all__ = [
    "asym", "bessel", "complexfn", "forms", "geom", "hypergeom", "quad", "repr", "verify",
    "GeoPeriodError", "PoleError", "DomainError", "NoConvergence", "DimensionError",
    "ConvergenceRegionError", "HypothesisNotMet", "FormParams", "RepParams", "IdentityReport",
    "classify", "ell_mod_closed", "ell_mod_direct", "ell_mod_ft_spherical", "chain_verify",
    "spherical_vector",
]
