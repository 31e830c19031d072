from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from railyardpy.exceptions import SeriesPoleAtZero
from railyardpy.macdonald.products import (
    Binomial,
    MobiusLedger,
    QRatio,
    factors_series,
    ledger_of,
    qpochhammer,
)


def test_qratio_telescopes_when_a_equals_base():
    t = Fraction(1, 3)
    series = QRatio(t, t, Fraction(1, 2), 1).series(6, Fraction(1))
    assert series.coeffs == [Fraction(1, 2) ** n for n in range(7)]


def test_qratio_trivial_cases():
    one = Fraction(1)
    for f in (QRatio(Fraction(1), Fraction(1, 2), Fraction(1, 3), 1), QRatio(2, 3, 0, 1)):
        assert f.series(4, one).coeffs == [1, 0, 0, 0, 0]
        assert f.atoms() == []


def test_qratio_needs_positive_degree():
    with pytest.raises(SeriesPoleAtZero):
        QRatio(Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), 0).series(3, Fraction(1))


def test_binomial_series():
    one = Fraction(1)
    f = Binomial(Fraction(1, 2), 2, -1).series(6, one)
    assert f.coeffs == [1, 0, Fraction(1, 2), 0, Fraction(1, 4), 0, Fraction(1, 8)]


def test_qpochhammer_matches_direct_product():
    expected = np.prod([1 - 0.3 * 0.5 ** k for k in range(40)])
    assert_allclose(qpochhammer(0.3, 0.5, 40), expected, rtol=1e-14)


def test_ledger_matches_truncated_series():
    factors = [QRatio(0.3, 0.5, 0.1, 1), Binomial(-0.2, 1, 2), QRatio(0.2, 0.25, 0.05, 2, -1)]
    ledger = ledger_of(factors)
    series = factors_series(factors, 40, 1.0)
    assert_allclose(ledger.evaluate(1.0), series.evaluate(1.0), rtol=1e-12)
    assert_allclose(ledger.evaluate(0.5), series.evaluate(0.5), rtol=1e-12)


def test_ledger_vectorised_evaluation():
    ledger = ledger_of([QRatio(0.3, 0.5, 0.1, 1)])
    w = np.exp(2j * np.pi * np.arange(8) / 8)
    values = ledger.evaluate(w)
    assert values.shape == (8,)
    assert_allclose(values[0], ledger.evaluate(1.0), rtol=1e-14)


def test_ledger_inverse():
    ledger = ledger_of([QRatio(0.3, 0.5, 0.1, 1), Binomial(0.4, -1, 1)])
    product = ledger * ledger.inverse()
    assert_allclose(product.evaluate(0.7 + 0.2j), 1.0, rtol=1e-13)


def test_ledger_singularities():
    ledger = MobiusLedger([(0.5, -1, 1), (0.25, 2, -1)])
    inner, outer = ledger.singular_radii()
    assert_allclose(inner, [0.5])
    assert_allclose(outer, [2.0])
    points = ledger.singular_points()
    assert len(points) == 3
    assert (0.5, -1, False) in [(round(p.real, 12), s, pole) for p, s, pole in points]


def test_ledger_negative_degree_at_zero():
    ledger = MobiusLedger([(0.5, -1, 1)])
    with pytest.raises(ZeroDivisionError):
        ledger.evaluate(0.0)


def test_constant_part():
    ledger = MobiusLedger([(0.5, 0, 1), (0.2, 1, 1)], constant=2.0)
    assert_allclose(ledger.constant_part(), 1.0)


def test_base_outside_unit_disc():
    with pytest.raises(ValueError):
        QRatio(0.5, 1.5, 0.1, 1).atoms()
