import math

import mpmath as mp
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from csrbf.errors import DomainError
from csrbf.kernels import (
    ALL_FAMILIES,
    GNEITING_5,
    GNEITING_7_2,
    WENDLAND31,
    WU12,
    Kernel,
    KernelFamily,
    family_from_name,
    gneiting,
    kernel_deriv,
    kernel_value,
    taylor_approx,
    taylor_value,
    turning_bands_reference,
)

FAMILIES = list(ALL_FAMILIES) + [gneiting(6.0)]
IDS = [f.name for f in FAMILIES]

_S = sp.symbols("s", nonnegative=True)


def _sympy_profile(family):
    """Independent symbolic transcription of each profile."""
    if family == WENDLAND31:
        return (1 - _S) ** 4 * (4 * _S + 1)
    if family == WU12:
        return (1 - _S) ** 4 * (1 + 4 * _S + 3 * _S**2 + sp.Rational(3, 4) * _S**3)
    l = sp.nsimplify(family.l)
    return (1 - _S) ** l * (1 + l * _S - (l + 1) * (l + 4) / 2 * _S**2)


class TestValues:
    @pytest.mark.parametrize("family", FAMILIES, ids=IDS)
    def test_one_at_origin_zero_outside(self, family):
        k = Kernel(family, 2.5)
        assert kernel_value(k, 0.0) == 1.0
        r = np.array([2.5, 2.5000001, 3.0, 10.0, 1e6])
        assert np.all(kernel_value(k, r) == 0.0)
        assert np.all(kernel_deriv(k, r) == 0.0)

    def test_gneiting5_half(self):
        # (0.5)^5 (1 + 2.5 - 6.75)
        assert kernel_value(Kernel(GNEITING_5, 1.0), 0.5) == pytest.approx(-0.1015625, abs=1e-15)

    def test_gneiting72_half_matches_mpmath(self):
        mp.mp.dps = 40
        s = mp.mpf("0.5")
        ref = (1 - s) ** mp.mpf("3.5") * (1 + mp.mpf("3.5") * s - mp.mpf(135) / 8 * s**2)
        assert kernel_value(Kernel(GNEITING_7_2, 1.0), 0.5) == pytest.approx(float(ref), rel=1e-14)

    def test_wendland_c2(self):
        assert kernel_value(Kernel(WENDLAND31, 2.0), 1.0) == pytest.approx(0.1875, abs=1e-15)

    @pytest.mark.parametrize("family", FAMILIES, ids=IDS)
    def test_against_symbolic(self, family):
        f = sp.lambdify(_S, _sympy_profile(family), "mpmath")
        mp.mp.dps = 30
        for s in np.linspace(0.0, 0.999, 37):
            assert family.profile(s) == pytest.approx(float(f(mp.mpf(float(s)))), rel=1e-12, abs=1e-15)

    def test_scalar_in_scalar_out(self):
        v = kernel_value(Kernel(WU12, 1.0), 0.3)
        assert np.ndim(v) == 0

    def test_negative_radius_rejected(self):
        with pytest.raises(DomainError):
            kernel_value(Kernel(WU12, 1.0), -0.1)

    def test_half_integer_power_is_exact_at_boundary(self):
        s = np.nextafter(1.0, 0.0)
        assert np.isfinite(GNEITING_7_2.profile(s))
        assert GNEITING_7_2.profile(1.0) == 0.0

    @pytest.mark.parametrize("family", [GNEITING_7_2, GNEITING_5], ids=["g72", "g5"])
    def test_gneiting_oscillates(self, family):
        s = np.linspace(0, 1, 20001)
        assert family.profile(s).min() < 0

    @pytest.mark.parametrize("family", [WENDLAND31, WU12], ids=["wendland", "wu"])
    def test_wendland_wu_nonnegative(self, family):
        s = np.linspace(0, 1, 20001)
        assert family.profile(s).min() >= 0


class TestDerivatives:
    @pytest.mark.parametrize(
        "family, r, expected",
        [
            (GNEITING_7_2, 4 * (29 - math.sqrt(301)) / 270, -3.60),
            (GNEITING_5, (19 - math.sqrt(145)) / 54, -4.43),
            (WENDLAND31, 0.25, -2.109375),
        ],
        ids=["g72", "g5", "wendland"],
    )
    def test_extremal_slopes(self, family, r, expected):
        tol = 1e-15 if family == WENDLAND31 else 5e-3
        assert kernel_deriv(Kernel(family, 1.0), r) == pytest.approx(expected, abs=tol)

    def test_zero_slope_at_origin(self):
        for fam in FAMILIES:
            assert kernel_deriv(Kernel(fam, 1.0), 0.0) == 0.0

    @pytest.mark.parametrize("family", FAMILIES, ids=IDS)
    def test_closed_form_vs_symbolic(self, family):
        d = sp.lambdify(_S, sp.diff(_sympy_profile(family), _S), "mpmath")
        mp.mp.dps = 30
        for s in np.linspace(0.001, 0.999, 41):
            assert family.profile_deriv(s) == pytest.approx(float(d(mp.mpf(float(s)))), rel=1e-11, abs=1e-14)

    @pytest.mark.parametrize("family", FAMILIES, ids=IDS)
    @pytest.mark.parametrize("c", [1.0, 0.37, 25.0])
    def test_finite_differences(self, family, c):
        k = Kernel(family, c)
        h = 1e-6 * c
        r = np.linspace(0, c, 1002)[1:-1]
        fd = (kernel_value(k, r + h) - kernel_value(k, r - h)) / (2 * h)
        an = kernel_deriv(k, r)
        # FD truncation error scales like 1/c; compare in normalised units
        assert np.all(np.abs(an - fd) * c <= 1e-6 * (1 + np.abs(an) * c))

    @pytest.mark.parametrize("family", FAMILIES, ids=IDS)
    @pytest.mark.parametrize("eps", [1e-3, 1e-6])
    def test_c1_at_support_boundary(self, family, eps):
        k = Kernel(family, 1.0)
        assert abs(kernel_value(k, 1 - eps)) <= 50 * eps
        assert abs(kernel_deriv(k, 1 - eps)) <= 50 * eps


class TestScaleCovariance:
    @given(
        fam=st.sampled_from(FAMILIES),
        c=st.floats(0.01, 500.0),
        t=st.floats(0.0, 1.5),
    )
    @settings(max_examples=200, deadline=None)
    def test_scaling(self, fam, c, t):
        r = t * c
        k, k1 = Kernel(fam, c), Kernel(fam, 1.0)
        assert kernel_value(k, r) == pytest.approx(float(kernel_value(k1, r / c)), rel=1e-12, abs=1e-14)
        assert kernel_deriv(k, r) == pytest.approx(
            float(kernel_deriv(k1, r / c)) / c, rel=1e-12, abs=1e-12 / c
        )


class TestTurningBands:
    @pytest.mark.parametrize("l", [3.5, 5.0, 6.0])
    def test_matches_gneiting_profile(self, l):
        s = np.linspace(0, 1, 5001)
        assert np.max(np.abs(gneiting(l).profile(s) - turning_bands_reference(l, s))) <= 1e-12

    def test_explicit_forms(self):
        s = np.linspace(0, 1, 101)
        g5 = (1 - s) ** 5 * (1 + 5 * s - 27 * s**2)
        g72 = (1 - s) ** 3.5 * (1 + 3.5 * s - 135 / 8 * s**2)
        assert np.allclose(turning_bands_reference(5.0, s), g5, atol=1e-14)
        assert np.allclose(turning_bands_reference(3.5, s), g72, atol=1e-14)
        assert turning_bands_reference(5.0, 0.0) == 1.0

    def test_base_derivative_is_symbolic_derivative(self):
        l = sp.Rational(9, 2)
        base = (1 - _S) ** (l + 1) * ((l + 1) * _S + 1)
        step = sp.simplify(base + _S * sp.diff(base, _S) / 2)
        f = sp.lambdify(_S, step, "numpy")
        s = np.linspace(0, 0.99, 50)
        assert np.allclose(turning_bands_reference(4.5, s), f(s), atol=1e-13)

    def test_rejects_small_l(self):
        with pytest.raises(DomainError):
            turning_bands_reference(3.0, 0.5)

    def test_rejects_s_out_of_range(self):
        with pytest.raises(DomainError):
            turning_bands_reference(5.0, 1.5)


class TestTaylor:
    def test_values(self):
        assert taylor_value(GNEITING_7_2, 0.0) == 1.0
        assert taylor_value(GNEITING_7_2, 0.01) == pytest.approx(0.9975971875, abs=1e-15)
        assert taylor_value(GNEITING_5, 0.01) == pytest.approx(0.995975, abs=1e-15)

    def test_coefficients_match_series(self):
        for fam in (GNEITING_7_2, GNEITING_5):
            ser = sp.series(_sympy_profile(fam), _S, 0, 4).removeO()
            poly = sp.Poly(ser, _S)
            t = taylor_approx(fam)
            assert poly.coeff_monomial(_S) == 0
            assert poly.coeff_monomial(_S**2) == t.a2
            assert poly.coeff_monomial(_S**3) == t.a3
            assert t.a2 < 0

    # constants fitted once as max |profile - taylor| / s^4 on (0, 0.1], then rounded up
    @pytest.mark.parametrize("family, C", [(GNEITING_7_2, 85.0), (GNEITING_5, 330.0)], ids=["g72", "g5"])
    def test_quartic_remainder(self, family, C):
        s = np.linspace(1e-4, 0.1, 2000)
        assert np.all(np.abs(family.profile(s) - taylor_value(family, s)) <= C * s**4)

    def test_unsupported_family(self):
        with pytest.raises(DomainError):
            taylor_value(WENDLAND31, 0.1)


class TestFamilies:
    def test_gneiting_l_bound(self):
        with pytest.raises(DomainError):
            gneiting(3.4)
        gneiting(3.5)

    def test_unknown_tag(self):
        with pytest.raises(DomainError):
            KernelFamily("matern")

    def test_support_must_be_positive(self):
        for c in (0.0, -1.0, float("nan")):
            with pytest.raises(DomainError):
                Kernel(WENDLAND31, c)

    @pytest.mark.parametrize("fam", ALL_FAMILIES, ids=[f.name for f in ALL_FAMILIES])
    def test_name_roundtrip(self, fam):
        assert family_from_name(fam.name) == fam

    def test_generic_gneiting_name(self):
        assert family_from_name("gneiting", 3.5) == GNEITING_7_2
        assert family_from_name("gneiting", 6) == gneiting(6)
        with pytest.raises(DomainError):
            family_from_name("gneiting")
        with pytest.raises(DomainError):
            family_from_name("tps")
