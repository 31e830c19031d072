import numpy as np
import pytest
from numpy.testing import assert_allclose

from railyardpy.contour import (
    ContourSpec,
    check_nested,
    contour_integral,
    double_contour_integral,
    separating_contour,
    separating_radius,
)
from railyardpy.exceptions import (
    ContourCrossesSingularity,
    ContoursNotDisjoint,
    QuadratureNotConverged,
)


def test_unit_residue():
    assert_allclose(contour_integral(lambda w: 1 / w, ContourSpec(1.0)), 1.0, atol=1e-14)


@pytest.mark.parametrize("a", [0.2, -0.5 + 0.3j, 0.9j])
def test_simple_pole_residue(a):
    value = contour_integral(lambda w: np.exp(w) / (w - a), ContourSpec(1.5))
    assert_allclose(value, np.exp(a), rtol=1e-10)


def test_pole_outside_contributes_nothing():
    value = contour_integral(lambda w: 1 / (w - 3.0), ContourSpec(1.0))
    assert abs(value) < 1e-12


def test_union_of_circles_adds_residues():
    contour = ContourSpec(circles=[(-1.0, 0.3), (1.0, 0.3)])
    value = contour_integral(lambda w: 1 / (w + 1) + 2 / (w - 1) + 5 / w, contour)
    assert_allclose(value, 3.0, rtol=1e-12)


def test_overlapping_circles_rejected():
    with pytest.raises(ValueError):
        ContourSpec(circles=[(0.0, 1.0), (1.5, 1.0)])


def test_odd_node_count_rejected():
    with pytest.raises(ValueError):
        ContourSpec(1.0, n_nodes=33)


def test_dict_round_trip_keeps_circles():
    contour = ContourSpec(circles=[(0.5j, 0.2), (2.0, 0.1)], n_nodes=32)
    again = ContourSpec.from_dict(contour.to_dict())
    assert again.circles == contour.circles
    assert again.n_nodes == 32


def test_encloses_and_real_crossings():
    contour = ContourSpec(0.5, center=1.0)
    assert list(contour.encloses([1.2, 0.0, 1.4j])) == [True, False, False]
    assert_allclose(sorted(contour.real_crossings()), [0.5, 1.5])


def test_check_reports_close_singularity():
    contour = ContourSpec(1.0)
    assert contour.check([0.5, 2.0]) == pytest.approx(0.5)
    with pytest.raises(ContourCrossesSingularity):
        contour.check([1.05])


def test_separating_radius():
    r = separating_radius([0.1, 0.2j], [0.8, -3.0])
    assert_allclose(r, np.sqrt(0.2 * 0.8))
    assert separating_radius([], []) == 1.0
    assert separating_radius([0.25], []) == 0.5
    with pytest.raises(ContourCrossesSingularity):
        separating_radius([0.5], [0.52])


def test_separating_contour_prefers_a_centred_circle():
    contour = separating_contour([0.0, 0.1], [0.8, -3.0])
    assert len(contour.circles) == 1
    assert contour.center == 0


def test_separating_contour_around_clusters():
    inner, outer = [0.0, 2.0, 2.5], [1.0, -0.5, 4.0]
    contour = separating_contour(inner, outer)
    assert len(contour.circles) == 2
    assert np.all(contour.encloses(inner))
    assert not np.any(contour.encloses(outer))
    value = contour_integral(lambda w: 1 / (w * (w - 2.0)), contour)
    assert_allclose(value, 0.0, atol=1e-12)


def test_separating_contour_needs_real_points():
    with pytest.raises(ContourCrossesSingularity):
        separating_contour([0.0, 2.0], [1.0 + 0.1j])
    with pytest.raises(ContourCrossesSingularity):
        separating_contour([0.0, 1.0], [1.0])


def test_quadrature_failure_is_reported():
    with pytest.raises(QuadratureNotConverged):
        contour_integral(lambda w: 1 / (w - 0.999999), ContourSpec(1.0), max_nodes=128)


def test_workers_give_same_value():
    def f(w):
        return np.cos(w) / (w - 0.3) ** 2

    serial = contour_integral(f, ContourSpec(1.0))
    threaded = contour_integral(f, ContourSpec(1.0), workers=4)
    assert_allclose(threaded, serial, rtol=1e-13)
    assert_allclose(serial, -np.sin(0.3), rtol=1e-10)


def test_double_integral_of_product():
    inner, outer = ContourSpec(0.5), ContourSpec(1.0)
    value = double_contour_integral(lambda z, w: 1 / (z * (w - z)), inner, outer)
    assert_allclose(value, 1.0, rtol=1e-10)


def test_double_integral_second_order_kernel():
    # analytic in z inside the inner circle
    inner, outer = ContourSpec(0.5), ContourSpec(1.0)
    value = double_contour_integral(lambda z, w: z ** 2 / (z - w) ** 2 / w ** 2, inner, outer)
    assert abs(value) < 1e-10


def test_nested_contours_required():
    with pytest.raises(ContoursNotDisjoint):
        check_nested(ContourSpec(1.0), ContourSpec(0.8))
    with pytest.raises(ContoursNotDisjoint):
        double_contour_integral(lambda z, w: z * w, ContourSpec(0.5, center=0.6), ContourSpec(1.0))
