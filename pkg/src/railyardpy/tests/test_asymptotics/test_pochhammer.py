import numpy as np
import pytest
from numpy.testing import assert_allclose

from railyardpy.asymptotics import (
    AsymptoticProfile,
    finite_g_defect,
    finite_g_product,
    g_chi_product,
    pochhammer_ratio_asym,
)
from railyardpy.asymptotics.pochhammer import in_excluded_region
from railyardpy.exceptions import ExcludedRegion


@pytest.mark.parametrize("z", [-1.0, 0.5j, -3.0 + 2.0j, 0.2])
def test_ratio_asymptotics(z):
    defects = [pochhammer_ratio_asym(z, eps, 1.5, int(2 / eps))[2] for eps in (1e-2, 1e-3)]
    assert defects[1] < defects[0]
    assert defects[1] < 1e-2


def test_alpha_one_is_exact_telescoping():
    exact, asym, defect = pochhammer_ratio_asym(-0.5, 0.01, 1.0, 300)
    assert_allclose(exact, asym, rtol=1e-12)
    assert defect < 1e-12


@pytest.mark.parametrize("z", [1.2, 3.0 + 0.1j, 1.0])
def test_excluded_region(z):
    assert in_excluded_region(z, 0.01)
    with pytest.raises(ExcludedRegion):
        pochhammer_ratio_asym(z, 0.01, 1.5, 100)


def test_outside_excluded_region():
    assert not in_excluded_region(-2.0, 0.01)
    assert not in_excluded_region(3.0 + 2.0j, 0.01)


def test_ratio_needs_positive_eps():
    with pytest.raises(ValueError):
        pochhammer_ratio_asym(-1.0, 0.0, 1.0, 10)


def test_finite_product_converges_to_g():
    profile = AsymptoticProfile(1, [0.0, 1.0], [1.0], ["-"])
    defects = finite_g_defect(profile, 0.5, [0.1, 0.05, 0.025], 3.0j)
    assert np.all(np.diff(defects) < 0)
    assert defects[-1] < 0.05


def test_finite_product_of_wedge():
    profile = AsymptoticProfile(1, [0.0, 1.0, 2.0], [1.0], ["+", "-"], alpha=2.0, beta=0.5)
    w = -0.5 + 1.5j
    limit = g_chi_product(profile, 0.5).power(w, 0.5)
    assert abs(finite_g_product(profile, 0.5, 0.01, w) / limit - 1) < 0.05
