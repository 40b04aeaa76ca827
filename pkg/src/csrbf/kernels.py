"""Compactly supported radial basis functions.

Four families are provided: Wendland's phi_{3,1}, Wu's psi_{1,2} and the
oscillating Gneiting family tau_{2,l} (l >= 7/2), with the two named members
tau_{2,7/2} and tau_{2,5}.  Every profile is written in the normalised radius
``s = r / c`` and vanishes for ``s >= 1``; a :class:`Kernel` attaches a support
size ``c`` and converts between ``r`` and ``s``.

All functions accept scalars or numpy arrays and broadcast.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError

__all__ = [
    "KernelFamily",
    "Kernel",
    "TaylorApprox",
    "WENDLAND31",
    "WU12",
    "GNEITING_7_2",
    "GNEITING_5",
    "ALL_FAMILIES",
    "gneiting",
    "family_from_name",
    "kernel_value",
    "kernel_deriv",
    "turning_bands_reference",
    "taylor_approx",
    "taylor_value",
]

_MIN_GNEITING_L = 3.5


def _trunc_pow(u, p):
    """``max(u, 0) ** p`` with half-integer exponents done as ``u**k * sqrt(u)``."""
    u = np.maximum(u, 0.0)
    if float(p).is_integer():
        return u ** int(p)
    if float(2 * p).is_integer():
        return u ** int(p - 0.5) * np.sqrt(u)
    return u**p


def _finish(s, values):
    # exact zeros outside the support (avoids -0.0 from 0 * negative polynomial)
    out = np.where(s < 1.0, values, 0.0)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class KernelFamily:
    """One CSRBF profile.

    ``tag`` is ``"wendland31"``, ``"wu12"`` or ``"gneiting"``; ``l`` is only
    meaningful (and required) for the Gneiting family.
    """

    tag: str
    l: float | None = None

    def __post_init__(self):
        if self.tag in ("wendland31", "wu12"):
            if self.l is not None:
                raise DomainError(f"{self.tag} takes no exponent, got l={self.l}")
        elif self.tag == "gneiting":
            if self.l is None or not np.isfinite(self.l) or self.l < _MIN_GNEITING_L:
                raise DomainError(f"Gneiting exponent must satisfy l >= 7/2, got {self.l}")
            object.__setattr__(self, "l", float(self.l))
        else:
            raise DomainError(f"unknown kernel family {self.tag!r}")

    @property
    def name(self):
        """Short name used on the command line and in CSV output."""
        if self.tag == "wendland31":
            return "wendland"
        if self.tag == "wu12":
            return "wu"
        if self.l == 3.5:
            return "gneiting-7-2"
        if self.l == 5.0:
            return "gneiting-5"
        return f"gneiting-l{self.l:g}"

    @property
    def label(self):
        if self.tag == "wendland31":
            return "Wendland phi_{3,1}"
        if self.tag == "wu12":
            return "Wu psi_{1,2}"
        return f"Gneiting tau_{{2,{Fraction(self.l).limit_denominator(64)}}}"

    def profile(self, s):
        """Kernel value at normalised radius ``s = r/c`` (support size 1)."""
        s = np.asarray(s, dtype=float)
        u = 1.0 - s
        if self.tag == "wendland31":
            v = _trunc_pow(u, 4) * (4.0 * s + 1.0)
        elif self.tag == "wu12":
            v = _trunc_pow(u, 4) * (1.0 + s * (4.0 + s * (3.0 + 0.75 * s)))
        else:
            l = self.l
            v = _trunc_pow(u, l) * (1.0 + l * s - 0.5 * (l + 1.0) * (l + 4.0) * s * s)
        return _finish(s, v)

    def profile_deriv(self, s):
        """Derivative of :meth:`profile` with respect to ``s``."""
        s = np.asarray(s, dtype=float)
        u = 1.0 - s
        if self.tag == "wendland31":
            d = -20.0 * s * _trunc_pow(u, 3)
        elif self.tag == "wu12":
            d = -1.75 * s * _trunc_pow(u, 3) * (8.0 + s * (9.0 + 3.0 * s))
        else:
            l = self.l
            d = (
                -0.5 * (l + 1.0) * (l + 2.0) * s
                * _trunc_pow(u, l - 1.0) * (4.0 - (l + 4.0) * s)
            )
        return _finish(s, d)


WENDLAND31 = KernelFamily("wendland31")
WU12 = KernelFamily("wu12")
GNEITING_7_2 = KernelFamily("gneiting", 3.5)
GNEITING_5 = KernelFamily("gneiting", 5.0)
ALL_FAMILIES = (WENDLAND31, WU12, GNEITING_7_2, GNEITING_5)


def gneiting(l):
    """Gneiting's tau_{2,l}; ``l`` must be at least 7/2."""
    return KernelFamily("gneiting", l)


def family_from_name(name, l=None):
    """Resolve a command-line kernel name (``gneiting`` needs ``l``)."""
    named = {f.name: f for f in ALL_FAMILIES}
    if name in named:
        return named[name]
    if name == "gneiting":
        if l is None:
            raise DomainError("kernel 'gneiting' requires an exponent l")
        return gneiting(l)
    raise DomainError(
        f"unknown kernel {name!r}; expected one of {sorted(named)} or 'gneiting'"
    )


@dataclass(frozen=True)
class Kernel:
    """A CSRBF family with support size ``c``."""

    family: KernelFamily
    c: float

    def __post_init__(self):
        if not (np.isfinite(self.c) and self.c > 0):
            raise DomainError(f"support size must be positive, got c={self.c}")
        object.__setattr__(self, "c", float(self.c))

    def value(self, r):
        return self.family.profile(np.asarray(r, dtype=float) / self.c)

    def deriv(self, r):
        """Radial derivative dPhi/dr."""
        return self.family.profile_deriv(np.asarray(r, dtype=float) / self.c) / self.c


def _check_radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(np.isnan(r)):
        raise DomainError("radius must be non-negative")
    return r


def kernel_value(kernel, r):
    return kernel.value(_check_radius(r))


def kernel_deriv(kernel, r):
    return kernel.deriv(_check_radius(r))


def turning_bands_reference(l, s, m=4):
    """Gneiting profile built by one turning-bands step from R^m to R^(m-2).

    The starting function is the Wendland-type ``(1-s)_+^(l+1) ((l+1)s + 1)``,
    positive definite on R^4; the step returns ``phi + s phi' / (m - 2)``.
    Independent of :meth:`KernelFamily.profile`, so it serves as a check on it.
    """
    if l < _MIN_GNEITING_L:
        raise DomainError(f"Gneiting exponent must satisfy l >= 7/2, got {l}")
    s = np.asarray(s, dtype=float)
    if np.any(s < 0) or np.any(s > 1):
        raise DomainError("normalised radius must lie in [0, 1]")
    u = 1.0 - s
    base = _trunc_pow(u, l + 1.0) * ((l + 1.0) * s + 1.0)
    base_deriv = -(l + 1.0) * (l + 2.0) * s * _trunc_pow(u, l)
    out = base + s * base_deriv / (m - 2)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class TaylorApprox:
    """Small-radius expansion ``1 + a2 s^2 + a3 s^3`` (no linear term)."""

    a2: Fraction
    a3: Fraction

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return 1.0 + float(self.a2) * s**2 + float(self.a3) * s**3

    def deriv(self, s):
        s = np.asarray(s, dtype=float)
        return 2.0 * float(self.a2) * s + 3.0 * float(self.a3) * s**2


_TAYLOR = {
    GNEITING_7_2: TaylorApprox(Fraction(-99, 4), Fraction(1155, 16)),
    GNEITING_5: TaylorApprox(Fraction(-42), Fraction(175)),
}


def taylor_approx(family):
    try:
        return _TAYLOR[family]
    except KeyError:
        raise DomainError(
            f"no Taylor expansion tabulated for {family.name}"
        ) from None


def taylor_value(family, s):
    return taylor_approx(family)(s)
