from fractions import Fraction
from types import SimpleNamespace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from railyardpy.asymptotics import AsymptoticProfile
from railyardpy.contour import ContourSpec
from railyardpy.exceptions import ColumnOutOfRange, ContourCrossesSingularity
from railyardpy.macdonald import QTParams
from railyardpy.moments import (
    covariance_contour,
    expect_gamma_contour,
    expect_gamma_exact,
    expect_gamma_limit,
    gamma_k,
    laplace_height_exact,
    laplace_height_numeric,
    mean_rescaled_height,
    moment_integrand,
    rescaled_gamma_variance,
)
from railyardpy.partition_function import TruncationPolicy
from railyardpy.partitions import Partition
from railyardpy.railyard import BoundaryCondition, DimerState, RailYardSpec
from railyardpy.railyard.height import column_deformed_profile
from railyardpy.sampler import RngPolicy, SequentialSampler, exact_measure

_qt = QTParams(Fraction(1, 2), Fraction(1, 3))
_qf = QTParams(0.5, 1 / 3)


def _chain_mean(x1, x2, t):
    z = x1 * x2
    return 1 / t + (1 - 1 / t) * (1 - z) / (1 - t * z)


def test_gamma_of_empty_partition_is_one():
    assert gamma_k(Partition(()), 1, _qt) == 1
    assert gamma_k(Partition(()), 3, _qt) == 1


def test_gamma_of_a_row():
    q, t = _qt.q, _qt.t
    lam = Partition((2,))
    assert gamma_k(lam, 1, _qt) == (1 - 1 / t) * q ** 2 + 1 / t
    assert gamma_k(lam, 2, _qt) == (1 - t ** -2) * q ** 4 + t ** -2


def test_gamma_of_two_rows():
    q, t = _qt.q, _qt.t
    expected = (1 - 1 / t) * (q ** 3 + q / t) + t ** -2
    assert gamma_k(Partition((3, 1)), 1, _qt) == expected


@pytest.mark.parametrize("t", [0, 1])
def test_gamma_rejects_degenerate_t(t):
    with pytest.raises(ValueError):
        gamma_k(Partition((1,)), 1, SimpleNamespace(q=Fraction(1, 2), t=Fraction(t), one=Fraction(1)))


def test_gamma_rejects_nonpositive_k():
    with pytest.raises(ValueError):
        gamma_k(Partition((1,)), 0, _qt)


def test_exact_mean_on_single_row_chain():
    spec = RailYardSpec(0, 1, "LL", "+-", [0.2, 0.25])
    table_value = expect_gamma_exact(spec, BoundaryCondition(), _qf, 1, pol=TruncationPolicy(12))
    assert_allclose(table_value, _chain_mean(0.2, 0.25, 1 / 3), rtol=1e-9)


def test_contour_mean_on_single_row_chain():
    spec = RailYardSpec(0, 1, "LL", "+-", [0.2, 0.25])
    value = expect_gamma_contour(spec, BoundaryCondition(), _qf, 1)
    assert_allclose(value, _chain_mean(0.2, 0.25, 1 / 3), rtol=1e-9)


def test_contour_mean_at_the_ends_is_one():
    spec = RailYardSpec(0, 1, "LL", "+-", [0.2, 0.25])
    # the partitions outside both columns are empty
    assert_allclose(expect_gamma_contour(spec, BoundaryCondition(), _qf, 0), 1.0, rtol=1e-10)
    assert_allclose(expect_gamma_contour(spec, BoundaryCondition(), _qf, 2), 1.0, rtol=1e-10)


def test_contour_mean_with_free_boundaries():
    spec = RailYardSpec(0, 1, "LL", "+-", [0.2, 0.2])
    bc = BoundaryCondition("el", "el", 0.1, 0.1)
    exact = expect_gamma_exact(spec, bc, _qf, 1, pol=TruncationPolicy(6))
    value = expect_gamma_contour(spec, bc, _qf, 1)
    assert_allclose(value, exact, rtol=1e-5)


@pytest.mark.slow
@pytest.mark.parametrize("i", [1, 4])
def test_contour_mean_on_lrrl_spec(i):
    spec = RailYardSpec(1, 4, "LLLL", "++--", [0.1] * 4)
    bc = BoundaryCondition("el", "el", 0.1, 0.1)
    exact = expect_gamma_exact(spec, bc, _qf, i, pol=TruncationPolicy(4))
    assert_allclose(expect_gamma_contour(spec, bc, _qf, i), exact, rtol=1e-5)


def test_contour_mean_with_explicit_contour():
    spec = RailYardSpec(0, 1, "LL", "+-", [0.2, 0.25])
    value = expect_gamma_contour(spec, BoundaryCondition(), _qf, 1, contour=ContourSpec(1.0))
    assert_allclose(value, _chain_mean(0.2, 0.25, 1 / 3), rtol=1e-9)


def test_contour_through_a_pole_is_rejected():
    spec = RailYardSpec(0, 1, "LL", "+-", [0.2, 0.25])
    # q x2 = 0.125 is a pole of the integrand
    with pytest.raises(ContourCrossesSingularity):
        expect_gamma_contour(spec, BoundaryCondition(), _qf, 1, contour=ContourSpec(0.126))


def test_cluster_contour_when_no_centred_circle_separates():
    profile = AsymptoticProfile(1, [0.0, 1.0], [0.6], ["-"], u=0.2)
    eps = 0.1
    spec, bc, qt = profile.finite_graph(eps)
    i = profile.column_at(0.5, eps)
    _, contour, _ = moment_integrand(spec, bc, qt, i)
    assert len(contour.circles) > 1 or contour.center != 0
    value = expect_gamma_contour(spec, bc, qt, i)
    assert abs(value - expect_gamma_limit(profile, 0.5)) < 0.2


@pytest.mark.slow
@pytest.mark.parametrize(
    "profile, chi",
    [
        (AsymptoticProfile(1, [0.0, 1.0], [0.6], ["-"], u=0.1), 0.5),
        (AsymptoticProfile(1, [0.0, 0.5, 1.0], [0.6], ["-", "+"], u=0.15), 0.25),
    ],
)
def test_finite_moments_approach_the_limit(profile, chi):
    values = []
    for eps in (0.1, 0.05):
        spec, bc, qt = profile.finite_graph(eps)
        values.append(expect_gamma_contour(spec, bc, qt, profile.column_at(chi, eps)))
    # first order in eps
    extrapolated = 2 * values[1] - values[0]
    derived = expect_gamma_limit(profile, chi)
    printed = expect_gamma_limit(profile, chi, form="printed")
    assert abs(extrapolated - derived) < 5e-3
    assert abs(values[1] - derived) < abs(values[0] - derived)
    assert abs(extrapolated - derived) < abs(extrapolated - printed)


def test_moment_needs_an_l_column():
    spec = RailYardSpec(0, 1, "LR", "+-", [0.2, 0.25])
    with pytest.raises(ValueError):
        expect_gamma_contour(spec, BoundaryCondition(), _qf, 1)


def test_only_single_insertions():
    spec = RailYardSpec(0, 1, "LL", "+-", [0.2, 0.25])
    with pytest.raises(NotImplementedError):
        expect_gamma_contour(spec, BoundaryCondition(), _qf, 1, g=2)


@pytest.mark.parametrize("i", [-1, 3])
def test_column_range(i):
    spec = RailYardSpec(0, 1, "LL", "+-", [0.2, 0.25])
    with pytest.raises(ColumnOutOfRange):
        expect_gamma_exact(spec, BoundaryCondition(), _qf, i)
    with pytest.raises(ColumnOutOfRange):
        expect_gamma_contour(spec, BoundaryCondition(), _qf, i)


@pytest.fixture()
def three_states():
    spec = RailYardSpec(0, 2, "LRL", "+-+", [0.2, 0.15, 0.2])
    table = exact_measure(spec, BoundaryCondition("oa", "el", 0.2, 0.15), _qf, TruncationPolicy(3))
    states = sorted(table.states, key=lambda s: -sum(lam.size for lam in s.partitions))
    return spec, states[:3]


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("m", [0, 1, 3])
def test_laplace_height_closed_form(three_states, k, m):
    spec, states = three_states
    for s in states:
        exact = laplace_height_exact(spec, s, m, k, _qf)
        numeric = laplace_height_numeric(spec, s, m, k, _qf)
        assert_allclose(numeric, exact, rtol=1e-8)


def test_laplace_height_column_range(three_states):
    spec, states = three_states
    with pytest.raises(ColumnOutOfRange):
        laplace_height_exact(spec, states[0], 7, 1, _qf)


@pytest.mark.parametrize("b", ["-", "+"])
def test_limit_mean_of_single_segment(b):
    profile = AsymptoticProfile(1, [0.0, 1.0], [1.0], [b])
    assert_allclose(expect_gamma_limit(profile, 0.5), 1.0, rtol=1e-9)


def test_limit_covariance_vanishes_without_outer_singularities():
    profile = AsymptoticProfile(2, [0.0, 1.0], [1.0, 2.0], ["--"], alpha=1.0, beta=1.5)
    value = covariance_contour(profile, 0.3, 0.6)
    assert abs(value) < 1e-8


def test_limit_covariance_needs_ordered_positions():
    profile = AsymptoticProfile(2, [0.0, 1.0], [1.0, 2.0], ["--"])
    with pytest.raises(ValueError):
        covariance_contour(profile, 0.6, 0.3)


def test_mean_rescaled_height_of_empty_states():
    spec = RailYardSpec(0, 2, "LRL", "+-+", [1e-5] * 3)
    sampler = SequentialSampler(spec, BoundaryCondition(), _qf)
    kappas = np.linspace(-0.5, 1.5, 7)
    mean, err = mean_rescaled_height(sampler, 1, kappas, 0.25, 20, RngPolicy(1))
    expected = 0.25 * column_deformed_profile(spec, DimerState.empty(spec), 1, _qf)(kappas / 0.25)
    assert_allclose(mean, expected, atol=1e-12)
    assert_allclose(err, 0.0, atol=1e-12)


def test_mean_rescaled_height_against_table():
    spec = RailYardSpec(0, 2, "LLL", "+-+", [0.3, 0.3, 0.25])
    bc = BoundaryCondition()
    eps = 0.5
    kappas = np.linspace(-1.0, 2.0, 5)
    table = exact_measure(spec, bc, _qf, TruncationPolicy(10))
    expected = table.expectation(
        lambda s: eps * column_deformed_profile(spec, s, 1, _qf)(kappas / eps)
    )
    sampler = SequentialSampler(spec, bc, _qf)
    mean, err = mean_rescaled_height(sampler, 1, kappas, eps, 2000, RngPolicy(4))
    assert np.all(np.abs(mean - expected) <= 5 * err + 1e-2)
    with pytest.raises(ValueError):
        mean_rescaled_height(sampler, 1, kappas, eps, 1)


@pytest.mark.slow
def test_rescaled_variance_against_table():
    spec = RailYardSpec(0, 2, "LLL", "+-+", [0.3, 0.3, 0.25])
    bc = BoundaryCondition()
    table = exact_measure(spec, bc, _qf, TruncationPolicy(10))

    def g(s, m):
        return float(gamma_k(s.at(spec, m), 1, _qf))

    mean1 = table.expectation(lambda s: g(s, 1))
    mean2 = table.expectation(lambda s: g(s, 2))
    cov = table.expectation(lambda s: g(s, 1) * g(s, 2)) - mean1 * mean2
    sampler = SequentialSampler(spec, bc, _qf)
    value, err = rescaled_gamma_variance(sampler, 1, 2, 0.5, 4000, rng=RngPolicy(7))
    assert err > 0
    assert abs(value - cov / 0.25) < 5 * err + 1e-12
    assert np.isfinite(value)


@pytest.mark.slow
def test_sampled_covariance_against_the_limit():
    profile = AsymptoticProfile(2, [0.0, 1.0], [0.5, 2.0], ["+-"])
    eps = 0.1
    spec, bc, qt = profile.finite_graph(eps)
    sampler = SequentialSampler(spec, bc, qt)
    sampler.check_caps()
    i_d, i_h = profile.column_at(0.3, eps), profile.column_at(0.7, eps)
    value, err = rescaled_gamma_variance(sampler, i_d, i_h, eps, 4000, rng=RngPolicy(11))
    limit = covariance_contour(profile, 0.3, 0.7)
    assert abs(value - limit) < 5 * err + 0.3 * abs(limit) + 0.05
