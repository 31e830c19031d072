from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from railyardpy.asymptotics import AsymptoticProfile, frozen_window, height_from_slope
from railyardpy.exceptions import CapsTooTight, UniverseTooLarge
from railyardpy.macdonald import QTParams
from railyardpy.moments import mean_rescaled_height
from railyardpy.partition_function import TruncationPolicy
from railyardpy.partitions import Partition
from railyardpy.railyard import BoundaryCondition, DimerState, RailYardSpec, validate_state
from railyardpy.sampler import (
    Caps,
    RngPolicy,
    SequentialSampler,
    exact_measure,
    mc_estimate,
    sample_sequence,
)

_qt = QTParams(Fraction(1, 2), Fraction(1, 3))
_qf = QTParams(0.5, 1 / 3)


@pytest.fixture()
def chain():
    x = Fraction(1, 5)
    return RailYardSpec(0, 1, "LL", "+-", [x, x])


@pytest.fixture()
def three_columns():
    spec = RailYardSpec(0, 2, "LRL", "+-+", [0.2, 0.15, 0.2])
    return spec, BoundaryCondition("oa", "el", 0.2, 0.15)


def _row_coefficient(k, q, t):
    # (t; q)_k / (q; q)_k
    out = 1
    for j in range(k):
        out = out * (1 - t * q ** j) / (1 - q ** (j + 1))
    return out


def test_point_mass_on_empty_chain():
    spec = RailYardSpec(0, 0, "L", "+", [Fraction(1, 4)])
    table = exact_measure(spec, BoundaryCondition(), _qt, TruncationPolicy(4))
    assert table.states == [DimerState.empty(spec)]
    assert table.probabilities == [1]
    sampler = SequentialSampler(spec, BoundaryCondition(), _qt, Caps(4, 4, 4))
    assert sampler.sample(5, RngPolicy(3)) == [DimerState.empty(spec)] * 5


def test_single_row_chain_table(chain):
    table = exact_measure(chain, BoundaryCondition(), _qt, TruncationPolicy(8))
    marginal = table.marginal(1)
    assert set(marginal) == {Partition([k]) for k in range(9)}
    x2 = Fraction(1, 25)
    for k in range(1, 9):
        ratio = marginal[Partition([k])] / marginal[Partition()]
        assert ratio == x2 ** k * _row_coefficient(k, Fraction(1, 2), Fraction(1, 3))
    assert max(marginal, key=marginal.get) == Partition()
    assert 0 < table.tail < 1e-10
    assert sum(table.probabilities) == 1 - Fraction(table.tail)
    assert sum(table.marginal(1).values()) == 1


def test_table_marginal_is_consistent(three_columns):
    spec, bc = three_columns
    table = exact_measure(spec, bc, _qf, TruncationPolicy(3))
    for m in range(spec.l, spec.r + 2):
        marginal = table.marginal(m)
        assert_allclose(sum(marginal.values()), 1.0, rtol=1e-13)
        raw = table.marginal(m, conditional=False)
        assert_allclose(sum(raw.values()), 1 - table.tail, rtol=1e-13)
        lam = Partition([1])
        direct = sum(p for s, p in table if s.at(spec, m) == lam)
        assert_allclose(raw.get(lam, 0), direct, rtol=1e-13)
        assert_allclose(marginal.get(lam, 0) * table.mass, direct, rtol=1e-13)


def test_sampler_marginal_on_single_row_chain(chain):
    sampler = SequentialSampler(chain, BoundaryCondition(), _qt, Caps(20, 20, 20, prune=0))
    q, t, x2 = 0.5, 1 / 3, 0.04
    weights = np.array([_row_coefficient(k, q, t) * x2 ** k for k in range(21)])
    marginal = sampler.marginals()[1]
    got = np.array([marginal.get(Partition([k]), 0.0) for k in range(21)])
    assert_allclose(got, weights / weights.sum(), rtol=1e-12, atol=1e-300)
    assert_allclose(sampler.z, weights.sum(), rtol=1e-12)


def test_sampler_matches_table_on_same_universe(three_columns):
    spec, bc = three_columns
    table = exact_measure(spec, bc, _qf, TruncationPolicy(4))
    sampler = SequentialSampler(spec, bc, _qf, Caps(4, 4, 4, prune=0))
    for k, marginal in enumerate(sampler.marginals()):
        expected = table.marginal(spec.l + k)
        assert set(marginal) <= set(expected)
        for lam, p in expected.items():
            assert_allclose(marginal.get(lam, 0.0), p, rtol=1e-10, atol=1e-15)


def test_samples_are_valid_and_reproducible(three_columns):
    spec, bc = three_columns
    sampler = SequentialSampler(spec, bc, _qf, Caps(8, 8, 8))
    first = sampler.sample(50, RngPolicy(7))
    assert first == sampler.sample(50, RngPolicy(7))
    assert first == sampler.sample(50, RngPolicy(7), workers=4)
    assert first != sampler.sample(50, RngPolicy(7, stream=1))
    for s in first:
        assert validate_state(spec, bc, s)


def test_sample_sequence_uses_stream_index(three_columns):
    spec, bc = three_columns
    caps = Caps(8, 8, 8)
    sampler = SequentialSampler(spec, bc, _qf, caps)
    expected = sampler.sample(4, RngPolicy(11))[3]
    assert sample_sequence(spec, bc, _qf, caps, RngPolicy(11), index=3) == expected


def test_tiny_weights_give_empty_states():
    spec = RailYardSpec(0, 2, "LRL", "+-+", [1e-5] * 3)
    sampler = SequentialSampler(spec, BoundaryCondition(), _qf, Caps(5, 5, 5))
    assert all(s == DimerState.empty(spec) for s in sampler.sample(200, RngPolicy(1)))


def test_mean_size_within_standard_errors(chain):
    table = exact_measure(chain, BoundaryCondition(), _qf, TruncationPolicy(12))
    sampler = SequentialSampler(chain, BoundaryCondition(), _qf, Caps(12, 12, 12, prune=0))
    est = mc_estimate(sampler, lambda s: s[1].size, 4000, RngPolicy(5))
    exact = table.expectation(lambda s: s[1].size)
    assert abs(est.mean[0] - exact) < 3 * est.stderr[0]


def test_constant_and_indicator_observables(three_columns):
    spec, bc = three_columns
    sampler = SequentialSampler(spec, bc, _qf, Caps(6, 6, 6))
    const = mc_estimate(sampler, lambda s: [1.0, 2.0], 30, RngPolicy(2))
    assert_allclose(const.mean, [1.0, 2.0])
    assert_allclose(const.covariance, np.zeros((2, 2)), atol=1e-14)
    assert_allclose(const.stderr, 0.0, atol=1e-14)
    ind = mc_estimate(sampler, lambda s: float(s[1] == Partition()), 200, RngPolicy(2), workers=2)
    assert 0 <= ind.mean[0] <= 1


def test_mc_estimate_needs_two_samples(three_columns):
    spec, bc = three_columns
    sampler = SequentialSampler(spec, bc, _qf, Caps(3, 3, 3))
    with pytest.raises(ValueError):
        mc_estimate(sampler, lambda s: 0.0, 1)


def test_caps_too_tight():
    spec = RailYardSpec(0, 1, "LL", "+-", [0.7, 0.7])
    sampler = SequentialSampler(spec, BoundaryCondition(), _qf, Caps(2, 2, 2))
    with pytest.raises(CapsTooTight):
        sampler.check_caps()
    with pytest.raises(CapsTooTight):
        sample_sequence(spec, BoundaryCondition(), _qf, Caps(2, 2, 2))


def test_generous_caps_are_certified(chain):
    sampler = SequentialSampler(chain, BoundaryCondition(), _qf, Caps(20, 20, 20))
    assert sampler.check_caps() < 1e-4


def test_caps_validation():
    with pytest.raises(ValueError):
        Caps(prune=1.0)
    with pytest.raises(ValueError):
        Caps(prune=-1e-3)
    with pytest.raises(ValueError):
        Caps(prune=0)
    with pytest.raises(ValueError):
        Caps(4, -1, 4)
    assert Caps(4, 4, 4, prune=0).size_limit == 4
    assert Caps(3, 5).size_limit == 15


def test_max_strip_follows_the_threshold():
    caps = Caps(prune=1e-10)
    assert caps.max_strip(0.5) == int(np.log(1e-10) / np.log(0.5)) + 1
    assert caps.max_strip(0.5, headroom=np.log(1e-10)) == 1
    assert caps.max_strip(0.5, kappa=1.5) > caps.max_strip(0.5)
    assert caps.max_strip(1.2) is None
    assert caps.max_strip(0.5, kappa=2.0) is None
    assert Caps(4, 4, 4, prune=0).max_strip(0.5) is None


def test_pruned_alphabet_reaches_large_rows():
    spec = RailYardSpec(0, 1, "LL", "+-", [0.5, 0.5])
    sampler = SequentialSampler(spec, BoundaryCondition(), _qf)
    assert Partition([30]) in sampler.alphabets[1]
    assert max(lam.size for lam in sampler.alphabets[1]) < 40
    q, t = 0.5, 1 / 3
    weights = np.array([_row_coefficient(k, q, t) * 0.25 ** k for k in range(60)])
    marginal = sampler.marginals()[1]
    got = np.array([marginal.get(Partition([k]), 0.0) for k in range(16)])
    assert_allclose(got, weights[:16] / weights.sum(), rtol=1e-8)
    assert 0 < sampler.pruned_mass() < 1e-6
    assert sampler.check_caps() < 1e-4


def test_default_caps_certify_a_two_segment_graph():
    profile = AsymptoticProfile(2, [0.0, 1.0], [0.5, 2.0], ["+-"])
    spec, bc, qt = profile.finite_graph(0.2)
    sampler = SequentialSampler(spec, bc, qt)
    assert sampler.check_caps() < 1e-4
    assert sampler.boundary_mass() == 0


def test_universe_guard(three_columns):
    spec, bc = three_columns
    with pytest.raises(UniverseTooLarge):
        exact_measure(spec, bc, _qf, TruncationPolicy(3), guard=3)


@pytest.mark.slow
def test_total_variation_against_table():
    spec = RailYardSpec(0, 2, "LLR", "+--", [0.2, 0.2, 0.15])
    bc = BoundaryCondition("el", "oa", 0.1, 0.1)
    table = exact_measure(spec, bc, _qf, TruncationPolicy(6))
    sampler = SequentialSampler(spec, bc, _qf, Caps(6, 6, 6, prune=0))
    n = 10 ** 5
    counts = {}
    for s in sampler.sample(n, RngPolicy(2024), workers=4):
        counts[s] = counts.get(s, 0) + 1
    support = set(counts) | set(table.states)
    tv = 0.5 * sum(abs(counts.get(s, 0) / n - float(table.probability(s))) for s in support)
    assert tv < 0.01


@pytest.mark.slow
def test_sampled_heights_follow_the_limit_shape():
    profile = AsymptoticProfile(2, [0.0, 1.0], [0.5, 2.0], ["+-"])
    eps, chi = 0.1, 0.5
    spec, bc, qt = profile.finite_graph(eps)
    sampler = SequentialSampler(spec, bc, qt)
    assert sampler.check_caps() < 1e-4
    lo, hi = frozen_window(profile, chi)
    kappas = np.linspace(lo, hi, 9)
    mean, err = mean_rescaled_height(sampler, profile.column_at(chi, eps), kappas, eps, 400, RngPolicy(3))
    limit = np.array([height_from_slope(profile, chi, k, kappa_lo=lo) for k in kappas])
    assert np.all(err < 0.05)
    assert np.mean(np.abs(mean - limit)) < 0.25
    assert np.max(np.abs(mean - limit)) < 0.5
