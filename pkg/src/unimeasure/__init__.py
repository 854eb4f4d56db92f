"""Measures on Euclidean space whose ball masses do not depend on the center.

Submodules:

* :mod:`unimeasure.series` exact truncated series and the ball-mass expansion
* :mod:`unimeasure.symcurv` symbolic Taylor coefficients in Frenet curvatures
* :mod:`unimeasure.curves` helices, Frenet integration and curvature estimation
* :mod:`unimeasure.measure` numerical ball masses and uniformity scans
* :mod:`unimeasure.cli` the ``unimeasure`` command
"""

from .curves import (
    HelixParams,
    curvatures_to_helix,
    estimate_curvatures,
    integrate_frenet,
    is_toric_knot,
)
from .measure import (
    CurveUnion,
    Isometry,
    PointSet,
    ball_mass,
    support_from_dict,
    uniformity_scan,
    validate_support,
)
from .series import TruncatedSeries, ball_mass_expansion, compose, solve_branch
from .symcurv import C_coefficient, CurvaturePolynomial, extract_top_monomial

__version__ = "0.1.0"

__all__ = [
    "C_coefficient",
    "CurvaturePolynomial",
    "CurveUnion",
    "HelixParams",
    "Isometry",
    "PointSet",
    "TruncatedSeries",
    "ball_mass",
    "ball_mass_expansion",
    "compose",
    "curvatures_to_helix",
    "estimate_curvatures",
    "extract_top_monomial",
    "integrate_frenet",
    "is_toric_knot",
    "solve_branch",
    "support_from_dict",
    "uniformity_scan",
    "validate_support",
]
