import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from heisenweyl.haar import SeededRng
from heisenweyl.montecarlo import (
    HaarSampler,
    MomentAccumulator,
    NonFiniteObservableError,
    ProjectedSampler,
    VirtualSampler,
    consistency_test,
    haar_column_moment_exact,
    ks_critical_value,
    mc_integrate,
    mc_integrate_many,
)

finite = st.floats(-1e6, 1e6, allow_nan=False)


@given(st.lists(finite, min_size=2, max_size=60), st.integers(1, 59))
def test_accumulator_merge_is_exact(values, cut):
    cut = min(cut, len(values) - 1)
    whole = MomentAccumulator.of(values)
    split = MomentAccumulator.of(values[:cut]).merge(MomentAccumulator.of(values[cut:]))
    assert whole == split


@given(st.lists(finite, min_size=2, max_size=40))
def test_accumulator_sum_matches_fractions(values):
    acc = MomentAccumulator.of(values)
    est = acc.estimate()
    exact_mean = sum(Fraction(v) for v in values) / len(values)
    assert est.mean.real == float(exact_mean)


def test_estimate_of_constant_has_zero_stderr():
    est = mc_integrate(lambda u: np.ones(len(u)), HaarSampler(2), 1000, SeededRng(1))
    assert est.mean == 1 and est.stderr == 0 and est.n == 1000


def test_haar_moment_oracles():
    # E|u_11|^2 = 1/m and E|tr u|^2 = 1 on U(m)
    est = mc_integrate(lambda u: np.abs(u[:, 0, 0]) ** 2, HaarSampler(3), 40_000, SeededRng(2))
    assert abs(est.mean - 1 / 3) <= 4 * est.stderr
    est = mc_integrate(lambda u: np.abs(np.trace(u, axis1=1, axis2=2)) ** 2, HaarSampler(3), 40_000, SeededRng(3))
    assert abs(est.mean - 1) <= 4 * est.stderr


def test_virtual_sampler_matches_haar_marginal():
    est = mc_integrate(lambda s: np.abs(s.phis()[:, 1]) ** 2, VirtualSampler(3), 40_000, SeededRng(4))
    assert abs(est.mean - 0.5) <= 4 * est.stderr
    est = mc_integrate(lambda u: np.abs(u[:, 0, 0]) ** 2, ProjectedSampler(2), 40_000, SeededRng(5))
    assert abs(est.mean - 0.5) <= 4 * est.stderr


def test_determinism_and_worker_independence():
    f = lambda u: u[:, 0, 0]
    a = mc_integrate(f, HaarSampler(2), 5000, SeededRng(6), shards=4, workers=1, chunk=700)
    b = mc_integrate(f, HaarSampler(2), 5000, SeededRng(6), shards=4, workers=3, chunk=700)
    assert a == b
    c = mc_integrate(f, HaarSampler(2), 5000, SeededRng(7), shards=4, chunk=700)
    assert a != c


def test_many_matches_single():
    f = lambda u: np.column_stack([u[:, 0, 0], np.abs(u[:, 0, 1]) ** 2])
    both = mc_integrate_many(f, HaarSampler(2), 3000, SeededRng(8), 2)
    second = mc_integrate(lambda u: np.abs(u[:, 0, 1]) ** 2, HaarSampler(2), 3000, SeededRng(8))
    assert both[1] == second


def test_non_finite_observable_reports_index():
    def f(u):
        out = np.ones(len(u))
        out[3] = np.nan
        return out

    with pytest.raises(NonFiniteObservableError) as info:
        mc_integrate(f, HaarSampler(1), 10, SeededRng(9))
    assert info.value.index == 3


def test_column_moment_exact_values():
    assert haar_column_moment_exact(2, (1, 1)) == Fraction(1, 6)
    assert haar_column_moment_exact(1, (5,)) == 1
    assert haar_column_moment_exact(3, (2, 0, 0)) == Fraction(1, 6)
    with pytest.raises(ValueError):
        haar_column_moment_exact(2, (1,))


@given(st.integers(1, 5), st.integers(0, 4))
def test_column_moments_sum_rule(eta, n):
    # sum over |alpha| = n of multinomial(n, alpha) * E[prod |z|^(2 alpha)] = E[(sum |z|^2)^n] = 1
    from heisenweyl.polynomial import multi_indices

    total = Fraction(0)
    for alpha in multi_indices(eta, n, n):
        multinom = math.factorial(n) // math.prod(math.factorial(a) for a in alpha)
        total += multinom * haar_column_moment_exact(eta, alpha)
    assert total == 1


def test_ks_critical_value():
    # c(0.01) = 1.6276 for the two-sided asymptotic test
    assert ks_critical_value(100, 100) == pytest.approx(1.62762 * math.sqrt(2 / 100), rel=1e-4)


@pytest.mark.parametrize("m", [1, 2])
def test_consistency_passes(m):
    rep = consistency_test(m, 5000, SeededRng(10))
    assert rep.passed
    assert rep.to_json()["kind"] == "consistency"
    assert {r["statistic"] for r in rep.rows} >= {"re_trace", "abs_u11_sq", "arg_det"}


def test_consistency_detects_a_wrong_law():
    # sanity: comparing U(2) against U(3) statistics must fail
    from scipy import stats

    from heisenweyl.haar import sample_haar_batch

    a = np.abs(sample_haar_batch(2, 5000, SeededRng(11).generator())[:, 0, 0]) ** 2
    b = np.abs(sample_haar_batch(3, 5000, SeededRng(12).generator())[:, 0, 0]) ** 2
    assert stats.ks_2samp(a, b).statistic > ks_critical_value(5000, 5000)


def test_consistency_needs_enough_samples():
    with pytest.raises(ValueError):
        consistency_test(2, 100, SeededRng(1))
