"""
Singularity Series - exact generating series of plane curve singularities y^n = x^d.

Hilbert, Quot and Picard series at the Psi level, Gen and Cogen formulas for
torus link homology, q,t-Catalan polynomials, the nabla formula and the
cocharacter statistics of the Picard paving, with checks of the identities
relating them.
"""

import logging

from .exactpoly import HalfInt, LaurentPoly, QSeries, parse
from .gammamod import AmbientKind, GammaModule, GermParams
from .linkseries import CheckReport, Convention, KhrSeries

logger = logging.getLogger(__name__)

__all__ = [
    "AmbientKind",
    "CheckReport",
    "Convention",
    "GammaModule",
    "GermParams",
    "HalfInt",
    "KhrSeries",
    "LaurentPoly",
    "QSeries",
    "parse",
]
