from fractions import Fraction

import pytest

from railyardpy.exceptions import InvalidState, LengthMismatch
from railyardpy.macdonald import QTParams, boundary_coweight, boundary_weight, branching_coeff
from railyardpy.partitions import Partition
from railyardpy.railyard import (
    BoundaryCondition,
    DimerState,
    RailYardSpec,
    enumerate_states,
    state_weight,
    validate_state,
)

_qt = QTParams(Fraction(1, 2), Fraction(1, 3))
_x = Fraction(1, 5)


@pytest.fixture()
def lrrl_spec():
    return RailYardSpec(1, 4, "LRRL", "++--", [_x] * 4)


@pytest.fixture()
def lrrl_state():
    return DimerState([[], [2], [3, 1, 1], [2], []])


def test_lrrl_state_is_valid(lrrl_spec, lrrl_state):
    assert validate_state(lrrl_spec, BoundaryCondition(), lrrl_state)


def test_swapped_lrrl_state_is_invalid(lrrl_spec):
    s = DimerState([[], [3, 1, 1], [2], [2], []])
    assert not validate_state(lrrl_spec, BoundaryCondition(), s)


@pytest.mark.parametrize("lr, signs", [("L", "+"), ("RL", "-+"), ("LRRL", "++--"), ("RRR", "-+-")])
def test_empty_state_is_valid_with_weight_one(lr, signs):
    spec = RailYardSpec(0, len(lr) - 1, lr, signs, [_x] * len(lr))
    bc = BoundaryCondition("oa", "eoa", Fraction(1, 3), Fraction(1, 4))
    s = DimerState.empty(spec)
    assert validate_state(spec, bc, s)
    assert state_weight(spec, bc, s, _qt) == 1


def test_length_mismatch(lrrl_spec):
    with pytest.raises(LengthMismatch):
        validate_state(lrrl_spec, BoundaryCondition(), DimerState([[], [1]]))
    with pytest.raises(LengthMismatch):
        RailYardSpec(0, 2, "LR", "++-", [_x] * 3)


@pytest.mark.parametrize("weights", [[0, 1], [Fraction(-1, 2), 1]])
def test_nonpositive_weights(weights):
    with pytest.raises(ValueError):
        RailYardSpec(0, 1, "LL", "+-", weights)


def test_invalid_state_has_no_weight(lrrl_spec):
    s = DimerState([[], [3, 1, 1], [2], [2], []])
    with pytest.raises(InvalidState):
        state_weight(lrrl_spec, BoundaryCondition(), s, _qt)


def test_zero_fugacity_kills_right_boundary():
    spec = RailYardSpec(0, 0, "L", "+", [Fraction(1, 4)])
    s = DimerState([[], [1]])
    assert state_weight(spec, BoundaryCondition(u=0, v=0), s, _qt) == 0


@pytest.mark.parametrize(
    "c_l, left, allowed",
    [("deel", [1, 1], True), ("deel", [1], False), ("eoa", [2], True), ("eoa", [1, 1], False)],
)
def test_left_boundary_parity(c_l, left, allowed):
    spec = RailYardSpec(0, 0, "L", "-", [_x])
    s = DimerState([left, []])
    assert validate_state(spec, BoundaryCondition(c_l=c_l, u=Fraction(1, 2)), s) is allowed


def test_lrrl_weight_matches_hand_assembly(lrrl_spec, lrrl_state):
    bc = BoundaryCondition("el", "el", Fraction(1, 10), Fraction(1, 10))
    two, big = Partition([2]), Partition([3, 1, 1])
    expected = (
        branching_coeff("psi", two, Partition(), _qt)
        * branching_coeff("phi'", big, two, _qt)
        * branching_coeff("psi'", big, two, _qt)
        * branching_coeff("phi", two, Partition(), _qt)
        * _x ** 10
    )
    got = state_weight(lrrl_spec, bc, lrrl_state, _qt)
    assert got == expected
    assert got > 0


def test_weight_with_nonempty_boundaries():
    spec = RailYardSpec(0, 1, "LR", "+-", [Fraction(1, 3), Fraction(1, 7)])
    u, v = Fraction(1, 2), Fraction(2, 3)
    bc = BoundaryCondition("oa", "el", u, v)
    s = DimerState([[1], [2], [1]])
    one, two = Partition([1]), Partition([2])
    expected = (
        u * v * boundary_weight(one, "el", _qt) / boundary_coweight(one, "oa", _qt)
        * branching_coeff("psi", two, one, _qt) * Fraction(1, 3)
        * branching_coeff("psi'", two, one, _qt) * Fraction(1, 7)
    )
    assert state_weight(spec, bc, s, _qt) == expected


def test_weights_scale_with_strip_sizes(lrrl_spec):
    bc = BoundaryCondition("el", "oa", Fraction(1, 3), Fraction(1, 3))
    c = Fraction(3, 2)
    scaled = lrrl_spec.scaled(c)
    for s in enumerate_states(lrrl_spec, bc, 3):
        sizes = [p.size for p in s.partitions]
        degree = sum(abs(a - b) for a, b in zip(sizes, sizes[1:]))
        assert state_weight(scaled, bc, s, _qt) == c ** degree * state_weight(lrrl_spec, bc, s, _qt)


def test_enumerated_states_are_valid(lrrl_spec):
    bc = BoundaryCondition("deel", "eoa", Fraction(1, 3), Fraction(1, 3))
    states = list(enumerate_states(lrrl_spec, bc, 3))
    assert DimerState.empty(lrrl_spec) in states
    assert len(set(states)) == len(states)
    for s in states:
        assert validate_state(lrrl_spec, bc, s)
        assert max(p.size for p in s.partitions) <= 3


def test_enumeration_respects_zero_fugacities(lrrl_spec):
    states = list(enumerate_states(lrrl_spec, BoundaryCondition(), 3))
    assert all(not s.left and not s.right for s in states)
    assert DimerState([[], [2], [3, 1, 1], [2], []]) not in states
    assert DimerState([[], [1], [2], [1], []]) in states


def test_json_round_trip(lrrl_spec, lrrl_state):
    assert RailYardSpec.from_json(lrrl_spec.to_json()) == lrrl_spec
    assert DimerState.from_json(lrrl_state.to_json()) == lrrl_state
    spec = RailYardSpec.from_json(
        '{"l": 0, "r": 1, "lr_word": ["L", "R"], "sign_word": ["+", "-"], "weights": ["1/5", 0.25]}'
    )
    assert spec.weights == (Fraction(1, 5), 0.25)
    bc = BoundaryCondition.from_json('{"c_l": "oa", "c_r": "deel", "u": "1/2", "v": 0.1}')
    assert bc.u == Fraction(1, 2)


def test_boundary_condition_checks():
    with pytest.raises(ValueError):
        BoundaryCondition("ol", "el")
    with pytest.raises(ValueError):
        BoundaryCondition(u=1)


def test_letters(lrrl_spec):
    letters = lrrl_spec.letters()
    assert [next(iter(rho)).dual for rho in letters] == [False, True, True, False]
    assert len(lrrl_spec.plus_letters()) == 2
    assert len(lrrl_spec.minus_letters(columns=[3])) == 1
