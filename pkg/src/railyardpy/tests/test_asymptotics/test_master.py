import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from railyardpy.asymptotics import (
    AsymptoticProfile,
    classify_point,
    cleared_polynomial,
    g_chi_product,
    limit_shape_slope,
    master_product,
    solve_master,
)
from railyardpy.asymptotics.master import rational_alpha
from railyardpy.exceptions import AlphaIrrationalUnsupportedExact, NoConvergenceInK


@pytest.fixture()
def wedge():
    return AsymptoticProfile(1, [0.0, 1.0, 2.0], [1.0], ["+", "-"])


@pytest.fixture()
def segment():
    return AsymptoticProfile(1, [0.0, 1.0], [1.0], ["-"])


def _quadratic(chi, T):
    # (w - A)(1 - a w) - T (w - B)(1 - b w) for the wedge at 0 < chi < 1
    A, B, a, b = math.exp(2.0), math.e, 1.0, math.exp(-chi)
    return [T * B - A, 1 + a * A - T * (1 + b * B), T * b - a]


def test_rational_alpha():
    assert rational_alpha(0.5) == Fraction(1, 2)
    assert rational_alpha(7 / 3) == Fraction(7, 3)
    assert rational_alpha(math.sqrt(2)) is None


def test_cleared_polynomial_of_wedge(wedge):
    product = g_chi_product(wedge, 0.5)
    assert_allclose(cleared_polynomial(product, 3.0), _quadratic(0.5, 3.0), rtol=1e-13)


def test_cleared_polynomial_needs_rational_alpha():
    profile = AsymptoticProfile(1, [0.0, 1.0], [1.0], ["-"], alpha=math.sqrt(2), a="R")
    with pytest.raises(AlphaIrrationalUnsupportedExact):
        cleared_polynomial(g_chi_product(profile, 0.5), 2.0, None)


def test_cleared_polynomial_raises_to_the_denominator():
    profile = AsymptoticProfile(1, [0.0, 1.0], [1.0], ["-"], alpha=0.5, a="R")
    product = g_chi_product(profile, 0.5)
    coeffs = cleared_polynomial(product, 2.0, Fraction(1, 2))
    # Φ^2 = (w + e^0.5) / (w + e) cleared against 2^2
    assert_allclose(coeffs, [math.exp(0.5) - 4 * math.e, -3.0], rtol=1e-13)


def test_liquid_point_of_wedge(wedge):
    T = 3.0
    report = solve_master(wedge, 0.5, -math.log(T))
    assert report.classification == "one-conjugate-pair"
    assert report.stable
    roots = np.polynomial.polynomial.polyroots(_quadratic(0.5, T))
    expected = roots[np.argmax(roots.imag)]
    assert expected.imag > 0
    assert_allclose(report.w_plus, expected, rtol=1e-10)
    assert_allclose(master_product(wedge, 0.5, 0)(report.w_plus), T, rtol=1e-10)


@pytest.mark.parametrize("T", [0.01, 100.0])
def test_frozen_points_of_wedge(wedge, T):
    report = solve_master(wedge, 0.5, -math.log(T))
    assert report.classification == "all-real"
    assert report.w_plus is None
    assert report.solutions.shape[0] == 2


def test_bracketing_agrees_with_exact(wedge):
    exact = solve_master(wedge, 0.5, -math.log(3.0), mode="exact")
    bracket = solve_master(wedge, 0.5, -math.log(3.0), mode="bracket")
    assert bracket.mode == "bracket"
    assert_allclose(bracket.w_plus, exact.w_plus, rtol=1e-9)


def test_irrational_alpha_with_r_columns():
    profile = AsymptoticProfile(1, [0.0, 1.0], [1.0], ["-"], alpha=math.sqrt(2), a="R")
    with pytest.raises(AlphaIrrationalUnsupportedExact):
        solve_master(profile, 0.5, 0.1, mode="exact")
    with pytest.warns(RuntimeWarning):
        report = solve_master(profile, 0.5, 0.1, mode="auto")
    assert report.mode == "bracket"


def test_unknown_mode(wedge):
    with pytest.raises(ValueError):
        solve_master(wedge, 0.5, 0.0, mode="newton")


def test_report_to_dict(wedge):
    data = solve_master(wedge, 0.5, -math.log(3.0)).to_dict()
    assert data["classification"] == "one-conjugate-pair"
    assert data["w_plus"][1] > 0
    assert data["K"] == 0
    assert data["degree"] == 2


def test_boundary_factors_iterate_until_stable():
    profile = AsymptoticProfile(1, [0.0, 1.0, 2.0], [1.0], ["+", "-"], u=0.2, v=0.2)
    report = solve_master(profile, 0.5, -math.log(3.0))
    assert report.K >= 1
    assert report.stable
    product = master_product(profile, 0.5, report.K)
    for w in report.solutions:
        assert_allclose(product(w), 3.0, rtol=1e-7)


def test_no_convergence_in_k():
    profile = AsymptoticProfile(1, [0.0, 1.0, 2.0], [1.0], ["+", "-"], u=0.2, v=0.2)
    with pytest.raises(NoConvergenceInK):
        solve_master(profile, 0.5, -math.log(3.0), tol=0.0, max_k=2)


def test_liquid_slope(wedge):
    report = solve_master(wedge, 0.5, -math.log(3.0))
    slope = limit_shape_slope(wedge, 0.5, -math.log(3.0))
    assert_allclose(slope, 2 - 2 * np.angle(report.w_plus) / math.pi, rtol=1e-12)
    assert 0 < slope < 2


@pytest.mark.parametrize(
    "kappa, expected", [(-2.0, 0.0), (-0.25, 0.0), (0.3, 2.0), (3.0, 2.0)]
)
def test_single_segment_slope(segment, kappa, expected):
    # the root attached to e^chi passes through infinity at kappa = 0
    assert limit_shape_slope(segment, 0.5, kappa) == expected


@pytest.mark.parametrize("alpha", [0.5, 2.0])
def test_slope_scales_with_alpha(alpha):
    profile = AsymptoticProfile(1, [0.0, 1.0], [1.0], ["-"], alpha=alpha)
    assert limit_shape_slope(profile, 0.5, 1.0) == 2.0 / alpha


def test_classify_wedge(wedge):
    assert classify_point(wedge, 0.5, -math.log(3.0)) == "liquid"
    assert classify_point(wedge, 0.5, -math.log(100.0)) == "frozen-0"
    assert classify_point(wedge, 0.5, -math.log(0.01)) == "frozen-2/alpha"
    assert classify_point(wedge, 0.5, -1.0) == "boundary"


@pytest.mark.parametrize("chi", [0.0, 1.0, 2.0, 2.5])
def test_classify_needs_interior_point(wedge, chi):
    with pytest.raises(ValueError):
        classify_point(wedge, chi, 0.0)


def test_liquid_region_matches_discriminant(wedge):
    for T in np.geomspace(0.05, 80.0, 15):
        c0, c1, c2 = _quadratic(0.5, T)
        disc = c1 * c1 - 4 * c0 * c2
        if abs(disc) < 1e-6:
            continue
        liquid = solve_master(wedge, 0.5, -math.log(T)).w_plus is not None
        assert liquid == (disc < 0)
