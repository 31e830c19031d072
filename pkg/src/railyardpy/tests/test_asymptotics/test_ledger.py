import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from railyardpy.asymptotics import (
    AsymptoticProfile,
    PoleZeroLedger,
    check_limit_contour,
    g_chi_product,
    limit_contour,
)
from railyardpy.contour import ContourSpec, contour_integral
from railyardpy.exceptions import ContourCrossesSingularity
from railyardpy.moments import expect_gamma_limit


@pytest.fixture()
def wedge():
    return AsymptoticProfile(1, [0.0, 1.0, 2.0], [1.0], ["+", "-"])


def test_wedge_sets(wedge):
    ledger = PoleZeroLedger(wedge, 0.5)
    assert sorted(ledger.sets) == ["R_chi_1", "R_chi_2"]
    assert_allclose(ledger.d_chi, [math.e])
    assert_allclose(ledger.enclosed, [0.0, math.e, math.exp(2.0)])
    assert_allclose(ledger.forbidden, [1.0, math.exp(0.5)])


def test_to_dict(wedge):
    data = PoleZeroLedger(wedge, 0.5).to_dict()
    assert data["chi"] == 0.5
    assert data["K"] == 0
    assert set(data["sets"]["R_chi_2"]) == {"zero", "pole"}
    assert_allclose(data["forbidden"], [1.0, math.exp(0.5)])


def test_boundary_points_enter_with_fugacities():
    profile = AsymptoticProfile(1, [0.0, 1.0], [1.0], ["-"], u=0.5, v=0.5)
    ledger = PoleZeroLedger(profile, 0.5, K=1)
    assert {"R_chi_1", "R_5_1_1", "R_6_1_0"} <= set(ledger.sets)


def test_centred_circle_when_separated():
    profile = AsymptoticProfile(1, [0.0, 1.0], [1.0], ["-"])
    contour = limit_contour(g_chi_product(profile, 0.5))
    assert len(contour.circles) == 1
    assert contour.center == 0
    assert contour.radius > math.e


def test_circles_around_clusters(wedge):
    product = g_chi_product(wedge, 0.5)
    contour = limit_contour(product)
    assert len(contour.circles) == 2
    assert list(contour.encloses([0.0, math.e, math.exp(2.0)])) == [True] * 3
    assert not np.any(contour.encloses([1.0, math.exp(0.5)]))


def test_cluster_contour_residues(wedge):
    # Φ(0) plus the residue of Φ(w)/w at the enclosed pole w = e
    e = math.e
    expected = e + (1 - e) ** 2 / (1 - math.exp(0.5))
    assert_allclose(expect_gamma_limit(wedge, 0.5), expected, rtol=1e-9)
    product = g_chi_product(wedge, 0.5)
    value = contour_integral(lambda w: product(w) / w, limit_contour(product))
    assert_allclose(value.real, expected, rtol=1e-9)


def test_rejects_contour_enclosing_excluded_point(wedge):
    product = g_chi_product(wedge, 0.5)
    with pytest.raises(ContourCrossesSingularity):
        check_limit_contour(product, ContourSpec(10.0))


def test_rejects_contour_missing_enclosed_point(wedge):
    product = g_chi_product(wedge, 0.5)
    with pytest.raises(ContourCrossesSingularity):
        check_limit_contour(product, ContourSpec(0.5))
