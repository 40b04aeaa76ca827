"""Closed-form analysis of the symmetric four-landmark (rhombus) configuration.

Sources sit at ``P = (0,1), (-1,0), (0,-1), (1,0)``; the targets coincide
except the lower vertex, which moves to ``(0, -1 - delta)``.  With
``alpha = Phi(sqrt 2)`` and ``beta = Phi(2)`` the interpolation systems have
explicit solutions, the x-coefficients all vanish, and the Jacobian
determinant on the ray ``(0, y), y > 1`` reduces to ``1 + dR_2/dy``.

The classical large-support estimate is
``1 - K delta (y^2 + 1 - y sqrt(y^2 + 1))`` with ``K = (3/8) / (2 - sqrt 2)``,
obtained by replacing every coefficient by ``+-c_{2,1}``.  That replacement
drops a term: ``c_{2,3} - c_{2,1} = -delta / (1 - beta)`` grows like ``c^2``
and multiplies the ``O(1/c^2)`` linear part of the kernel slopes, leaving
``+delta/2`` in the limit.  :func:`large_support_axis_det` returns the
corrected limit; :func:`asymptotic_axis_det` keeps the classical formula.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import DomainError, SingularConfigurationError
from .kernels import GNEITING_7_2, Kernel, taylor_approx
from .registration import FLOAT_FMT, LandmarkCorrespondence, Transformation

__all__ = [
    "RHOMBUS_SOURCE",
    "RhombusCase",
    "RhombusCoefficients",
    "rhombus_landmarks",
    "rhombus_coefficients",
    "rhombus_transformation",
    "axis_det",
    "ASYMPTOTIC_CONSTANT",
    "asymptotic_constant_parts",
    "asymptotic_constant",
    "asymptotic_axis_det",
    "large_support_axis_det",
    "figure2_y_samples",
    "figure2_table",
    "format_figure2_csv",
]

RHOMBUS_SOURCE = np.array([(0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (1.0, 0.0)])
RHOMBUS_SOURCE.setflags(write=False)

# value printed with the asymptotic determinant formula, four decimals
ASYMPTOTIC_CONSTANT = 0.6402

_SINGULAR_TOL = 1e-13


@dataclass(frozen=True)
class RhombusCase:
    delta: float
    kernel: Kernel

    def __post_init__(self):
        if not (np.isfinite(self.delta) and self.delta >= 0):
            raise DomainError(f"delta must be non-negative, got {self.delta}")

    @property
    def alpha(self):
        """Kernel value at the side length sqrt(2)."""
        return float(self.kernel.value(math.sqrt(2.0)))

    @property
    def beta(self):
        """Kernel value at the diagonal length 2."""
        return float(self.kernel.value(2.0))


@dataclass(frozen=True)
class RhombusCoefficients:
    c1: tuple
    c2: tuple

    def as_array(self):
        """Coefficients as a (4, 2) array, one row per landmark."""
        return np.column_stack([self.c1, self.c2])


def rhombus_landmarks(delta):
    target = RHOMBUS_SOURCE.copy()
    target[2, 1] -= delta
    return LandmarkCorrespondence(RHOMBUS_SOURCE, target)


def rhombus_coefficients(case):
    a, b, d = case.alpha, case.beta, case.delta
    one_minus_b = 1.0 - b
    den = (1.0 + b) ** 2 - 4.0 * a * a
    if abs(one_minus_b) < _SINGULAR_TOL or abs(den) < _SINGULAR_TOL:
        raise SingularConfigurationError(
            f"rhombus system is singular for {case.kernel.family.name} at c={case.kernel.c:g} "
            f"(1-beta={one_minus_b:.3g}, (1+beta)^2-4alpha^2={den:.3g})"
        )
    c21 = (b * b + b - 2.0 * a * a) * d / (one_minus_b * den)
    c22 = a * d / den
    c23 = -(1.0 + b - 2.0 * a * a) * d / (one_minus_b * den)
    return RhombusCoefficients(c1=(0.0, 0.0, 0.0, 0.0), c2=(c21, c22, c23, c22))


def rhombus_transformation(case):
    """Transformation assembled from the closed-form coefficients."""
    return Transformation(case.kernel, RHOMBUS_SOURCE, rhombus_coefficients(case).as_array())


def axis_det(case, y):
    """Exact ``det J(0, y)`` for ``y > 1`` (scalar or array)."""
    y = np.asarray(y, dtype=float)
    if np.any(y <= 1):
        raise DomainError("axis_det is defined for y > 1")
    t = rhombus_transformation(case)
    pts = np.stack([np.zeros_like(y), y], axis=-1)
    out = t.det(pts)
    return out[()] if out.ndim == 0 else out


def asymptotic_constant_parts(family):
    """Rational factors of the large-support constant for a Gneiting profile.

    Returns ``(numerator, denominator)`` so that the constant equals
    ``numerator / (denominator * (2 - sqrt 2))``.  The denominator is the
    coefficient of ``(2 - sqrt 2)/c^3`` in ``(1+beta)^2 - 4 alpha^2``; the
    numerator collects the cubic terms of the four axis derivatives.
    """
    a3 = Fraction(taylor_approx(family).a3)
    # Phi'(s) ~ 2 a2 s + 3 a3 s^2; the linear parts cancel in the four-term sum
    deriv_cubic = 3 * a3
    # alpha, beta carry 2 sqrt(2) a3 / c^3 and 8 a3 / c^3, so
    # (1+beta)^2 - 4 alpha^2 ~ (32 - 16 sqrt 2) a3 / c^3
    denominator = 16 * a3
    # (y-1)^2 + (y+1)^2 - 2y sqrt(y^2+1) = 2 (y^2 + 1 - y sqrt(y^2+1))
    numerator = 2 * deriv_cubic
    return numerator, denominator


def asymptotic_constant(family=GNEITING_7_2):
    num, den = asymptotic_constant_parts(family)
    return float(num / den) / (2.0 - math.sqrt(2.0))


def asymptotic_axis_det(delta, y):
    y = np.asarray(y, dtype=float)
    if np.any(y < 1):
        raise DomainError("asymptotic_axis_det is defined for y >= 1")
    if delta < 0:
        raise DomainError(f"delta must be non-negative, got {delta}")
    out = 1.0 - ASYMPTOTIC_CONSTANT * delta * (y * y + 1.0 - y * np.sqrt(y * y + 1.0))
    return out[()] if out.ndim == 0 else out


def large_support_axis_det(delta, y):
    """Exact ``c -> infinity`` limit of :func:`axis_det` for any kernel without a linear term."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 1):
        raise DomainError("large_support_axis_det is defined for y >= 1")
    k = asymptotic_constant(GNEITING_7_2)
    out = 1.0 + 0.5 * delta - k * delta * (y * y + 1.0 - y * np.sqrt(y * y + 1.0))
    return out[()] if out.ndim == 0 else out


def figure2_y_samples(n=50, y_max=5.0):
    """``n`` equispaced samples in ``(1, y_max]``."""
    return 1.0 + (y_max - 1.0) * np.arange(1, n + 1) / n


def figure2_table(families, c, delta, y_samples):
    """Rows ``(y, kernel name, det J(0, y))`` for every family and sample."""
    rows = []
    for fam in families:
        dets = axis_det(RhombusCase(delta, Kernel(fam, c)), np.asarray(y_samples, dtype=float))
        rows.extend((float(y), fam.name, float(v)) for y, v in zip(y_samples, dets))
    return rows


def format_figure2_csv(rows):
    lines = ["y,kernel,det"]
    lines += [f"{FLOAT_FMT.format(y)},{name},{FLOAT_FMT.format(v)}" for y, name, v in rows]
    return "\n".join(lines) + "\n"
