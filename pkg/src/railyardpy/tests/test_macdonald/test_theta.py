from fractions import Fraction

import pytest
from numpy.testing import assert_allclose

from railyardpy.macdonald import (
    QTParams,
    Specialization,
    kernel_series,
    kernel_value,
    theta_series,
    theta_value,
)
from railyardpy.macdonald.identities import cauchy_oracle_sum, theta_oracle_sum
from railyardpy.macdonald.specialization import Letter
from railyardpy.macdonald.theta import single

_qt = QTParams(Fraction(1, 2), Fraction(1, 3))
_x = Fraction(1, 3)


def test_theta_el_telescopes_at_q_equal_t():
    qt = QTParams(Fraction(2, 5), Fraction(2, 5))
    for form in ("product", "exponential"):
        series = theta_series("el", single(_x), 6, qt, form=form)
        assert series.coeffs == [_x ** n for n in range(7)]


@pytest.mark.parametrize("form", ["product", "exponential"])
def test_theta_deel_of_single_letter_is_one(form):
    series = theta_series("deel", single(_x), 6, _qt, form=form)
    assert series.coeffs == [1, 0, 0, 0, 0, 0, 0]


@pytest.mark.parametrize("marker", ["el", "oa", "deel", "eoa"])
@pytest.mark.parametrize(
    "rho",
    [
        Specialization.ordinary(Fraction(1, 3), Fraction(1, 5)),
        Specialization.dual_of(Fraction(1, 4), Fraction(2, 7)),
        Specialization(
            [Letter(Fraction(1, 3)), Letter(Fraction(1, 5), dual=True), Letter(Fraction(1, 7), sign=-1)]
        ),
    ],
)
def test_theta_product_equals_exponential(marker, rho):
    for qt in (_qt, QTParams(Fraction(1, 3), Fraction(3, 4))):
        product = theta_series(marker, rho, 6, qt, form="product")
        exponential = theta_series(marker, rho, 6, qt, form="exponential")
        assert product == exponential


@pytest.mark.parametrize("marker", ["el", "oa", "deel", "eoa"])
def test_theta_matches_oracle_boundary_sum(marker):
    rho = Specialization.ordinary(Fraction(1, 3), Fraction(1, 5))
    closed, brute = theta_oracle_sum(marker, rho, _qt, 6)
    assert closed == brute


def test_theta_oa_single_letter_against_oracle():
    closed, brute = theta_oracle_sum("oa", single(_x), _qt, 6)
    assert closed == brute


def test_unknown_marker():
    with pytest.raises(ValueError):
        theta_series("ol", single(_x), 3, _qt)
    with pytest.raises(ValueError):
        theta_series("el", single(_x), 3, _qt, form="sum")


def test_pi_telescopes_at_q_equal_t():
    qt = QTParams(Fraction(1, 4), Fraction(1, 4))
    y = Fraction(1, 5)
    series = kernel_series("Π", single(_x), single(y), 6, qt)
    assert series.coeffs == [(_x * y) ** n for n in range(7)]


def test_pi0_of_single_letters():
    y = Fraction(1, 5)
    for form in ("exponential", "product"):
        series = kernel_series("Pi0", single(_x), single(y), 6, _qt, form=form)
        assert series.coeffs == [1, _x * y, 0, 0, 0, 0, 0]


def test_h_matches_cauchy_sum():
    qt = QTParams(Fraction(2, 5), Fraction(1, 7))
    rho1 = Specialization.ordinary(Fraction(1, 3))
    rho2 = Specialization.ordinary(Fraction(1, 5), Fraction(1, 7))
    closed, brute = cauchy_oracle_sum(rho1, rho2, qt, 6)
    assert closed == brute


@pytest.mark.parametrize(
    "rho1, rho2",
    [
        (single(Fraction(1, 3)), single(Fraction(1, 5), dual=True)),
        (single(Fraction(1, 3), dual=True), Specialization.dual_of(Fraction(1, 5), Fraction(1, 2))),
        (Specialization.ordinary(Fraction(1, 3), Fraction(1, 4)), single(Fraction(1, 5))),
    ],
)
def test_h_product_equals_exponential(rho1, rho2):
    product = kernel_series("H", rho1, rho2, 6, _qt, form="product")
    exponential = kernel_series("H", rho1, rho2, 6, _qt, form="exponential")
    assert product == exponential


def test_pi_rejects_dual_letters():
    with pytest.raises(ValueError):
        kernel_series("Pi", single(_x), single(_x, dual=True), 3, _qt)


def test_float_values_match_series():
    qt = QTParams(0.5, 0.3)
    rho = Specialization.ordinary(0.2, 0.1)
    for marker in ("el", "oa", "deel", "eoa"):
        series = theta_series(marker, rho, 40, qt)
        assert_allclose(theta_value(marker, rho, qt), series.evaluate(1.0), rtol=1e-12)
    series = kernel_series("H", rho, single(0.3), 40, qt)
    assert_allclose(kernel_value("H", rho, single(0.3), qt), series.evaluate(1.0), rtol=1e-12)
