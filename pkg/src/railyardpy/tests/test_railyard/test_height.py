import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from railyardpy.exceptions import ColumnOutOfRange
from railyardpy.macdonald import QTParams
from railyardpy.partitions import Partition, durfee_size
from railyardpy.railyard import (
    BoundaryCondition,
    DimerState,
    RailYardSpec,
    charge,
    charge_axis,
    deformed_profile,
    diagonal_edges,
    enumerate_states,
    height_profile,
)

_x = Fraction(1, 5)
_specs = [
    RailYardSpec(1, 4, "LRRL", "++--", [_x] * 4),
    RailYardSpec(0, 2, "LLR", "+-+", [_x] * 3),
    RailYardSpec(0, 2, "RLR", "-+-", [_x] * 3),
]
_bc = BoundaryCondition("el", "el", Fraction(1, 2), Fraction(1, 2))


@pytest.fixture()
def lrrl():
    return RailYardSpec(1, 4, "LRRL", "++--", [_x] * 4), DimerState([[], [2], [3, 1, 1], [2], []])


def _states(spec, max_size=3):
    return list(enumerate_states(spec, _bc, max_size))


def test_lrrl_profile_steps_at_holes(lrrl):
    spec, s = lrrl
    h = height_profile(spec, s, 3.5)
    # holes of (2) sit on rows -1, 0, 2, 3, ...
    assert [h(y) for y in (-5, -1, 0, 1, 2, 3, 4)] == [0, 0, 2, 4, 4, 6, 8]


def test_far_below_is_zero(lrrl):
    spec, s = lrrl
    for m in spec.columns:
        for x in (2 * m - 0.5, 2 * m + 0.5):
            assert height_profile(spec, s, x)(-40.25) == 0


def test_empty_state_against_baselines():
    spec = _specs[1]
    s = DimerState.empty(spec)
    for m in spec.columns:
        for x in (2 * m - 0.5, 2 * m + 0.5):
            reference = height_profile(spec, s, x)
            empty = height_profile(spec, s, x, baseline="empty")
            for y in np.linspace(-6.1, 6.1, 17):
                assert reference(y) == 2 * max(0, math.ceil(y - 0.5))
                assert empty(y) == 0


@pytest.mark.parametrize("spec", _specs)
def test_diagonal_edges_count_strip_sizes(spec):
    for s in _states(spec):
        for k, m in enumerate(spec.columns):
            assert len(diagonal_edges(spec, s, m)) == abs(s[k + 1].size - s[k].size)


def test_lrrl_diagonal_rows(lrrl):
    spec, s = lrrl
    assert diagonal_edges(spec, s, 1) == [-1, 0]


@pytest.mark.parametrize("spec", _specs)
def test_height_jumps_by_two_across_diagonals(spec):
    for s in _states(spec):
        for m in spec.columns:
            b = spec.column(m)[1]
            rows = set(diagonal_edges(spec, s, m))
            odd = height_profile(spec, s, 2 * m - 0.5)
            even = height_profile(spec, s, 2 * m + 0.5)
            for j in range(-8, 8):
                for y in (j + 0.25, j + 0.75):
                    diff = even(y) - odd(y)
                    if b == "+":
                        crossed = y == j + 0.75 and j in rows
                        assert diff == (2 if crossed else 0)
                    else:
                        crossed = y == j + 0.25 and j in rows
                        assert diff == (-2 if crossed else 0)


def test_column_out_of_range(lrrl):
    spec, s = lrrl
    with pytest.raises(ColumnOutOfRange):
        height_profile(spec, s, 9.5)
    with pytest.raises(ColumnOutOfRange):
        height_profile(spec, s, 3.0)
    with pytest.raises(ColumnOutOfRange):
        charge(spec, s, 6, QTParams(0.5, 0.3))


def test_profile_csv(lrrl):
    spec, s = lrrl
    text = height_profile(spec, s, 3.5).to_csv((-1, 1))
    lines = text.splitlines()
    assert lines[0] == "y,h"
    assert lines[1] == "-0.875,0"
    assert lines[-1] == "0.875,4"


def test_empty_charge_is_zero():
    spec = _specs[0]
    assert charge(spec, DimerState.empty(spec), 2, QTParams(0.5, 0.3)) == 0


def test_lrrl_charge_at_q_equal_t(lrrl):
    spec, s = lrrl
    c = charge(spec, s, 2, QTParams(0.4, 0.4))
    assert_allclose(c, 0.0, atol=1e-12)
    assert abs(c) <= 1


@pytest.mark.parametrize("qt", [QTParams(0.5, 0.3), QTParams(0.2, 0.6), QTParams(0.3, 0.3)])
@pytest.mark.parametrize("spec", _specs)
def test_untranslated_charge_differences(spec, qt):
    r = qt.log_ratio
    allowed = np.array([0.0, 1 - r, r - 1])
    for s in _states(spec):
        values = [charge(spec, s, m, qt, translate=False) for m in range(spec.l, spec.r + 2)]
        for a, b in zip(values, values[1:]):
            assert np.min(np.abs(allowed - (b - a))) < 1e-12


@pytest.mark.parametrize(
    "lam", [[], [1], [3, 1], [5, 5, 5, 5], [1, 1, 1, 1, 1, 1], [9, 2]]
)
@pytest.mark.parametrize("q, t", [(0.125, 0.5), (0.5, 0.125), (0.3, 0.3)])
def test_translated_charge_is_bounded(lam, q, t):
    r = math.log(q) / math.log(t)
    axis, c = charge_axis(Partition(lam), r)
    assert abs(c) <= max(1.0, r) + 1e-12
    _, untranslated = charge_axis(Partition(lam), r, translate=False)
    assert_allclose(untranslated, (1 - r) * durfee_size(Partition(lam)), atol=1e-12)


@pytest.mark.parametrize(
    "lam, r, expected",
    [([], 0.5, (0, 0.0)), ([3, 1], 0.5, (1, 0.0)), ([3, 1], 2.0, (-1, 0.0)), ([1], 2.0, (-1, 1.0))],
)
def test_charge_axis_least_index(lam, r, expected):
    axis, c = charge_axis(Partition(lam), r)
    assert axis == expected[0]
    assert_allclose(c, expected[1], atol=1e-12)


@pytest.mark.parametrize("lam", [[], [2], [4, 4, 1], [6, 3, 3, 2, 1], [1, 1, 1, 1, 1]])
@pytest.mark.parametrize("r", [0.25, 0.6, 1.0, 1.7, 4.0])
def test_translated_charge_window(lam, r):
    _, c = charge_axis(Partition(lam), r)
    assert -1 - 1e-12 <= c <= r + 1e-12


def test_charge_axis_rejects_nonpositive_ratio():
    with pytest.raises(ValueError):
        charge_axis(Partition([2, 1]), 0.0)


def test_deformed_profile_of_single_box():
    profile = deformed_profile(Partition([1]), QTParams(0.4, 0.4))
    assert_allclose(profile([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]), [0, 0, 1, 2, 2, 2, 4])


def test_deformed_profile_particles_are_flat():
    qt = QTParams(0.25, 0.5)
    lam = Partition([3, 1])
    profile = deformed_profile(lam, qt)
    r = qt.log_ratio
    for i, part in enumerate(lam, start=1):
        centre = 0.5 + r * part - i + profile.c
        assert_allclose(profile(centre - 0.4), profile(centre + 0.4))
    assert_allclose(profile.knots[-1, 1], 2 * lam[0])
