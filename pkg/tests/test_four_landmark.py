from fractions import Fraction
import math

import mpmath as mp
import numpy as np
import pytest

from csrbf.errors import DomainError, SingularConfigurationError
from csrbf.four_landmark import (
    ASYMPTOTIC_CONSTANT,
    RhombusCase,
    asymptotic_axis_det,
    asymptotic_constant,
    asymptotic_constant_parts,
    axis_det,
    figure2_table,
    figure2_y_samples,
    format_figure2_csv,
    large_support_axis_det,
    rhombus_coefficients,
    rhombus_landmarks,
)
from csrbf.kernels import ALL_FAMILIES, GNEITING_5, GNEITING_7_2, WENDLAND31, Kernel
from csrbf.registration import fit

IDS = [f.name for f in ALL_FAMILIES]


def _mp_axis_det(c, delta, y):
    """High-precision oracle: solve the 4x4 system and differentiate numerically."""
    mp.mp.dps = 50

    def phi(s):
        return (1 - s) ** mp.mpf(3.5) * (1 + mp.mpf(3.5) * s - mp.mpf(135) / 8 * s**2) if s < 1 else mp.mpf(0)

    P = [(0, 1), (-1, 0), (0, -1), (1, 0)]
    c, delta, y = mp.mpf(c), mp.mpf(delta), mp.mpf(y)
    A = mp.matrix(4, 4)
    for i in range(4):
        for j in range(4):
            A[i, j] = phi(mp.sqrt((P[i][0] - P[j][0]) ** 2 + (P[i][1] - P[j][1]) ** 2) / c)
    coef = mp.lu_solve(A, mp.matrix([0, 0, -delta, 0]))

    def R2(yy):
        return sum(coef[i] * phi(mp.sqrt(P[i][0] ** 2 + (yy - P[i][1]) ** 2) / c) for i in range(4))

    return 1 + mp.diff(R2, y)


class TestCoefficients:
    @pytest.mark.parametrize("family", ALL_FAMILIES, ids=IDS)
    def test_small_support(self, family):
        co = rhombus_coefficients(RhombusCase(0.3, Kernel(family, 1.2)))
        assert co.c1 == (0, 0, 0, 0)
        assert co.c2 == pytest.approx((0.0, 0.0, -0.3, 0.0), abs=1e-15)

    @pytest.mark.parametrize(
        "family, denom", [(GNEITING_7_2, 1155), (GNEITING_5, 2800)], ids=["g72", "g5"]
    )
    def test_large_c_leading_order(self, family, denom):
        c = 100.0
        case = RhombusCase(0.2, Kernel(family, c))
        co = rhombus_coefficients(case)
        approx = -(c**3) * 0.2 / (denom * (2 - math.sqrt(2)))
        assert co.c2[0] == pytest.approx(approx, rel=2e-2)
        # the gap between c_{2,3} and c_{2,1} is O(c^2), not negligible
        assert co.c2[2] - co.c2[0] == pytest.approx(-0.2 / (1 - case.beta), rel=1e-6)

    def test_matches_general_fit_randomised(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            fam = ALL_FAMILIES[int(rng.integers(4))]
            c = float(rng.uniform(3.0, 200.0))
            delta = float(rng.uniform(0.01, 1.0))
            k = Kernel(fam, c)
            closed = rhombus_coefficients(RhombusCase(delta, k))
            assert closed.c1 == (0, 0, 0, 0) and closed.c2[1] == closed.c2[3]
            numeric = fit(k, rhombus_landmarks(delta)).coefficients
            ref = closed.as_array()
            assert np.max(np.abs(numeric - ref)) <= 1e-9 * np.max(np.abs(ref))

    def test_singular(self):
        # at c = 1e6 the (1+beta)^2 - 4 alpha^2 denominator is ~1e-15
        with pytest.raises(SingularConfigurationError):
            rhombus_coefficients(RhombusCase(0.2, Kernel(GNEITING_7_2, 1e6)))

    def test_negative_delta(self):
        with pytest.raises(DomainError):
            RhombusCase(-0.1, Kernel(WENDLAND31, 3.0))


class TestAxisDet:
    def test_outside_supports(self):
        case = RhombusCase(0.4, Kernel(GNEITING_7_2, 1.3))
        assert axis_det(case, 2.31) == 1.0

    @pytest.mark.parametrize("family", ALL_FAMILIES, ids=IDS)
    def test_zero_shift(self, family):
        ys = np.linspace(1.01, 8, 30)
        assert np.all(axis_det(RhombusCase(0.0, Kernel(family, 7.0)), ys) == 1.0)

    @pytest.mark.parametrize("c, y", [(5.0, 1.3), (100.0, 1.5), (100.0, 2.0), (1000.0, 3.0)])
    def test_high_precision_oracle(self, c, y):
        got = axis_det(RhombusCase(0.2, Kernel(GNEITING_7_2, c)), y)
        assert got == pytest.approx(float(_mp_axis_det(c, 0.2, y)), abs=1e-8)

    def test_domain(self):
        with pytest.raises(DomainError):
            axis_det(RhombusCase(0.2, Kernel(GNEITING_7_2, 10.0)), 1.0)

    @pytest.mark.parametrize("family", ALL_FAMILIES, ids=IDS)
    def test_positive(self, family):
        ys = np.linspace(1.0, 10.0, 201)[1:]
        for delta in (0.05, 0.2, 0.5, 1.0):
            assert np.all(axis_det(RhombusCase(delta, Kernel(family, 100.0)), ys) > 0)

    def test_matches_det_of_fitted_map(self):
        k = Kernel(WENDLAND31, 40.0)
        t = fit(k, rhombus_landmarks(0.3))
        ys = np.linspace(1.1, 4, 9)
        pts = np.column_stack([np.zeros_like(ys), ys])
        assert np.allclose(axis_det(RhombusCase(0.3, k), ys), t.det(pts), atol=1e-9)


class TestAsymptotics:
    def test_constant_parts_exact(self):
        n7, d7 = asymptotic_constant_parts(GNEITING_7_2)
        n5, d5 = asymptotic_constant_parts(GNEITING_5)
        assert (n7, d7) == (Fraction(3465, 8), Fraction(1155))
        assert (n5, d5) == (Fraction(8400, 8), Fraction(2800))
        assert n7 / d7 == n5 / d5 == Fraction(3, 8)
        assert abs(asymptotic_constant(GNEITING_7_2) - asymptotic_constant(GNEITING_5)) <= 1e-12
        assert asymptotic_constant() == pytest.approx(ASYMPTOTIC_CONSTANT, abs=5e-5)

    def test_formula_values(self):
        assert asymptotic_axis_det(0.2, 1e6) == pytest.approx(1 - 0.6402 * 0.2 * 0.5, abs=1e-9)
        for d in (0.1, 0.7):
            assert asymptotic_axis_det(d, 1.0) == pytest.approx(1 - 0.6402 * d * (2 - math.sqrt(2)), abs=1e-15)
        assert np.all(asymptotic_axis_det(0.0, np.linspace(1, 9, 17)) == 1.0)

    def test_classical_formula_misses_half_delta(self):
        # the exact determinant converges to the classical estimate shifted by delta/2
        ys = figure2_y_samples()
        exact = axis_det(RhombusCase(0.2, Kernel(GNEITING_7_2, 5000.0)), ys)
        gap = exact - asymptotic_axis_det(0.2, ys)
        assert np.allclose(gap, 0.1, atol=2e-3)

    @pytest.mark.parametrize("family", ALL_FAMILIES, ids=IDS)
    def test_converges_to_corrected_limit(self, family):
        ys = figure2_y_samples()
        sups = [
            np.max(np.abs(axis_det(RhombusCase(0.2, Kernel(family, c)), ys) - large_support_axis_det(0.2, ys)))
            for c in (20.0, 50.0, 100.0, 200.0, 1000.0)
        ]
        assert all(a > b for a, b in zip(sups, sups[1:]))
        assert sups[-1] < 5e-3


class TestAxisCurveTable:
    def test_table_shape_and_csv(self):
        ys = figure2_y_samples(5)
        rows = figure2_table(ALL_FAMILIES, 100.0, 0.2, ys)
        assert len(rows) == 20
        assert [r[1] for r in rows[::5]] == IDS
        text = format_figure2_csv(rows)
        assert text.splitlines()[0] == "y,kernel,det"
        assert text.splitlines()[1].startswith("1.8,wendland,")

    def test_samples(self):
        ys = figure2_y_samples()
        assert len(ys) == 50 and ys[0] > 1 and ys[-1] == 5.0

    def test_zero_shift_column(self):
        rows = figure2_table([GNEITING_5], 100.0, 0.0, figure2_y_samples())
        assert all(r[2] == 1.0 for r in rows)

    def test_gneiting_pair_agrees(self):
        ys = figure2_y_samples()
        a = axis_det(RhombusCase(0.2, Kernel(GNEITING_5, 100.0)), ys)
        b = axis_det(RhombusCase(0.2, Kernel(GNEITING_7_2, 100.0)), ys)
        assert np.max(np.abs(a - b)) <= 5e-3
