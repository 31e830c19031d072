import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from railyardpy.asymptotics import (
    AsymptoticProfile,
    frozen_window,
    height_from_slope,
    laplace_from_slope,
    laplace_limit,
    w_plus_map,
)
from railyardpy.contour import ContourSpec


@pytest.fixture()
def segment():
    return AsymptoticProfile(1, [0.0, 1.0], [1.0], ["-"])


@pytest.mark.parametrize("gamma", [0.5, 1.0, 2.5])
@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_single_segment_laplace(gamma, alpha):
    profile = AsymptoticProfile(1, [0.0, 1.0], [1.0], ["-"], alpha=alpha)
    assert_allclose(laplace_limit(profile, 0.5, gamma), 2 / (alpha * gamma ** 2), rtol=1e-9)


def test_period_enters_squared():
    profile = AsymptoticProfile(2, [0.0, 1.0], [1.0, 3.0], ["--"])
    assert_allclose(laplace_limit(profile, 0.5, 1.0), 0.5, rtol=1e-9)


def test_explicit_contour(segment):
    assert_allclose(laplace_limit(segment, 0.5, 1.5, contour=ContourSpec(5.0)), 2 / 2.25, rtol=1e-9)


def test_laplace_needs_positive_gamma(segment):
    with pytest.raises(ValueError):
        laplace_limit(segment, 0.5, 0.0)


def test_frozen_window(segment):
    lo, hi = frozen_window(segment, 0.5)
    assert lo < 0 < hi


@pytest.mark.slow
def test_height_from_slope(segment):
    assert height_from_slope(segment, 0.5, -1.0, kappa_lo=-2.0) == 0.0
    assert_allclose(height_from_slope(segment, 0.5, 1.0, kappa_lo=-2.0), 2.0, rtol=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("gamma", [1.0, 2.0])
def test_laplace_of_height_through_slope(segment, gamma):
    by_slope = laplace_from_slope(segment, 0.5, gamma)
    assert_allclose(by_slope, laplace_limit(segment, 0.5, gamma), rtol=1e-6)


@pytest.mark.slow
def test_w_plus_map_on_wedge():
    wedge = AsymptoticProfile(1, [0.0, 1.0, 2.0], [1.0], ["+", "-"])
    kappas = -np.log([2.9, 3.0, 5.0, 10.0, 500.0])
    result = w_plus_map(wedge, [0.4, 0.5], kappas)
    assert result["w_plus"].shape == (2, 5)
    assert 0 < result["liquid"] < 10
    assert np.all(np.isnan(result["w_plus"][:, -1]))
    assert result["injective"]
    assert np.all(result["w_plus"][np.isfinite(result["w_plus"])].imag > 0)
    assert math.isfinite(result["min_separation"])
