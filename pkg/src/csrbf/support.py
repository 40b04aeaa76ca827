"""Minimum support sizes for topology preservation in the one-landmark case.

Moving a single landmark by ``(dx, dy)`` gives the map
``x -> x + (dx, dy) * Phi(|x - p|)`` whose Jacobian determinant is
``1 + (dx cos t + dy sin t) Phi'(r)``.  With ``delta = max(dx, dy)`` the worst
direction is ``t = pi/4``, so the map stays orientation preserving as long as
``delta * min Phi' > -1/sqrt(2)``.  Because ``Phi'`` scales like ``1/c`` this
turns into a lower bound ``c > sqrt(2) |min_s Phi'(s)| delta``.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError
from .kernels import GNEITING_5, GNEITING_7_2, WENDLAND31, ALL_FAMILIES

__all__ = [
    "SupportBound",
    "deriv_minimum",
    "deriv_minimum_scan",
    "support_bound",
    "min_support",
    "table1",
]

# closed-form minimisers of the profile derivative on (0, 1)
_CLOSED_FORM_RSTAR = {
    GNEITING_7_2: 4.0 * (29.0 - math.sqrt(301.0)) / 270.0,
    GNEITING_5: (19.0 - math.sqrt(145.0)) / 54.0,
    WENDLAND31: 0.25,
}

SCAN_SAMPLES = 10**6


@dataclass(frozen=True)
class SupportBound:
    family: object
    r_star_over_c: float
    slope_min: float
    c_min_over_delta: float


def deriv_minimum(family):
    """Location and value of the most negative slope of ``family`` at c = 1.

    Uses the closed-form stationary point where one is known and a bounded
    scalar minimisation otherwise.
    """
    r_star = _CLOSED_FORM_RSTAR.get(family)
    if r_star is None:
        res = minimize_scalar(
            lambda s: float(family.profile_deriv(s)),
            bounds=(0.0, 1.0),
            method="bounded",
            options={"xatol": 1e-12, "maxiter": 500},
        )
        r_star = float(res.x)
    return r_star, float(family.profile_deriv(r_star))


def deriv_minimum_scan(family, samples=SCAN_SAMPLES):
    """Brute-force minimiser of the slope on a uniform grid of (0, 1)."""
    s = np.linspace(0.0, 1.0, samples + 1)[1:-1]
    d = family.profile_deriv(s)
    i = int(np.argmin(d))
    return float(s[i]), float(d[i])


def support_bound(family):
    r_star, slope = deriv_minimum(family)
    return SupportBound(family, r_star, slope, math.sqrt(2.0) * abs(slope))


def min_support(family, delta):
    """Infimum of support sizes keeping det(J) > 0 for a shift with max component ``delta``.

    Any ``c`` strictly larger than the returned value preserves topology.
    """
    if not (np.isfinite(delta) and delta > 0):
        raise DomainError(f"delta must be positive, got {delta}")
    return support_bound(family).c_min_over_delta * delta


def table1(families=ALL_FAMILIES):
    """Support bounds for ``families``, sorted by increasing ``c_min/delta``."""
    return sorted((support_bound(f) for f in families), key=lambda b: b.c_min_over_delta)
