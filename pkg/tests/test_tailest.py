import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hrvtail.errors import DegenerateFit, InsufficientData, LengthMismatch, NonPositiveTail
from hrvtail.simgen import sample_pareto
from hrvtail.tailest import (
    DEFAULT_THETA_GRID,
    EstimatorCurve,
    alt_hill_curve,
    concomitant_ranks,
    hill,
    hill_curve,
    hillish,
    hillish_curve,
    hillish_pair_curve,
    jitter,
    qq_curve,
    qq_slope,
)


def test_hill_hand_case():
    assert hill([math.e**3, math.e**2, math.e], 2) == pytest.approx(2 / 3, abs=1e-12)


def test_hill_pareto_quantiles():
    n = 1000
    data = n / np.arange(1, n + 1)
    assert hill(data, 100) == pytest.approx(1.0, abs=0.15)


def test_hill_scale_invariance():
    data = sample_pareto(2.0, 500, seed=3)
    assert hill(7 * data, 50) == pytest.approx(hill(data, 50), abs=1e-12)


def test_hill_drops_nonpositive():
    data = [math.e**3, -5.0, 0.0, math.e**2, math.e]
    assert hill(data, 2) == pytest.approx(2 / 3, abs=1e-12)
    with pytest.raises(NonPositiveTail):
        hill([-1.0, 0.0, 2.0, 3.0], 2)


def test_hill_errors():
    with pytest.raises(InsufficientData):
        hill([1.0, 2.0], 2)
    with pytest.raises(DegenerateFit):
        hill([5.0, 5.0, 5.0, 1.0], 2)


def test_hill_curve_matches_pointwise():
    data = sample_pareto(1.5, 2000, seed=4)
    c = hill_curve(data, [10, 50, 200])
    assert c.values == pytest.approx([hill(data, k) for k in (10, 50, 200)], rel=1e-12)


def test_alt_hill_definition():
    data = sample_pareto(2.0, 10_000, seed=5)
    c = alt_hill_curve(data, [0.5])
    assert c.ks.tolist() == [100]
    assert c.values[0] == pytest.approx(hill(data, 100), rel=1e-12)
    assert c.thetas.tolist() == [0.5]


def test_alt_hill_monte_carlo():
    data = sample_pareto(2.5, 30_000, seed=7)
    c = alt_hill_curve(data, [0.3, 0.5, 0.7])
    assert np.all(np.abs(c.values[1:] - 2.5) <= 0.4)
    # k=23 at theta=0.3: sd of the estimate is about alpha/sqrt(k)
    assert abs(c.values[0] - 2.5) <= 3 * 2.5 / math.sqrt(c.ks[0])


def test_alt_hill_flat_on_quantiles():
    n = 5000
    data = 3.0 * np.arange(1, n + 1) ** (-1 / 2.0)
    c = alt_hill_curve(data, [0.5, 0.6, 0.7, 0.8, 0.9])
    assert np.ptp(c.values) < 0.1
    assert np.all(np.abs(c.values - 2.0) < 0.1)
    # small-k bias shrinks as k grows
    assert np.all(np.diff(np.abs(c.values - 2.0)) <= 0)


def test_alt_hill_grid_checks():
    data = sample_pareto(2.0, 100, seed=1)
    with pytest.raises(ValueError):
        alt_hill_curve(data, [0.5, 0.4])
    with pytest.raises(ValueError):
        alt_hill_curve(data, [0.0, 0.5])
    c = alt_hill_curve(data, [0.999])
    assert c.ks[0] == 99
    assert DEFAULT_THETA_GRID[0] == pytest.approx(0.1) and DEFAULT_THETA_GRID[-1] == pytest.approx(0.95)
    assert len(DEFAULT_THETA_GRID) == 86


def test_qq_slope_quantiles():
    n = 1000
    for a in (1.0, 1.5, 2.5):
        data = (n / np.arange(1, n + 1)) ** (1 / a)
        assert qq_slope(data, 100) == pytest.approx(a, abs=0.05)


def test_qq_scale_invariance_and_errors():
    data = sample_pareto(2.0, 500, seed=9)
    assert qq_slope(3.3 * data, 80) == pytest.approx(qq_slope(data, 80), abs=1e-12)
    with pytest.raises(DegenerateFit):
        qq_slope([4.0, 4.0, 4.0, 4.0, 1.0], 3)
    c = qq_curve(data, [20, 40])
    assert c.values[1] == pytest.approx(qq_slope(data, 40), rel=1e-12)


def test_concomitant_examples():
    assert concomitant_ranks([5, 3], [10, 20], 2).ranks.tolist() == [1, 2]
    assert concomitant_ranks([3, 2, 1], [4, 4, 4], 3).ranks.tolist() == [3, 3, 3]
    assert concomitant_ranks([1, 2, 3], [9, 8, 7], 3).ranks.tolist() == [1, 2, 3]


def test_concomitant_xi_ties_stable():
    # ties in xi keep input order
    r = concomitant_ranks([2, 2, 1], [5, 1, 3], 2)
    assert r.ranks.tolist() == [2, 1]


def test_concomitant_errors():
    with pytest.raises(LengthMismatch):
        concomitant_ranks([1, 2], [1], 1)
    with pytest.raises(InsufficientData):
        concomitant_ranks([1, 2], [1, 2], 3)


def test_hillish_hand_case():
    assert hillish([5, 3], [10, 20], 2) == pytest.approx(math.log(2) ** 2 / 2, abs=1e-12)


def test_hillish_concordant():
    # eta decreasing along decreasing xi gives N_j = j
    for k in (4, 10, 57):
        xi = np.arange(k, 0, -1, dtype=float)
        eta = -xi
        assert concomitant_ranks(xi, eta, k).ranks.tolist() == list(range(1, k + 1))
        expected = sum(math.log(k / j) ** 2 for j in range(1, k + 1)) / k
        assert hillish(xi, eta, k) == pytest.approx(expected, abs=1e-12)
    assert hillish([4, 3, 2, 1], [1, 2, 3, 4], 4) == pytest.approx(0.6212565111002897, abs=1e-12)


def test_hillish_product_oracle():
    xi = sample_pareto(1.0, 100_000, seed=1)
    eta = np.random.default_rng(3).uniform(size=100_000)
    pos, neg = hillish_pair_curve(xi, eta, [1000])
    assert abs(pos.values[0] - 1) <= 0.1
    assert abs(neg.values[0] - 1) <= 0.1


def test_hillish_full_dependence_far_from_one():
    xi = sample_pareto(1.0, 20_000, seed=2)
    c = hillish_curve(xi, xi, [200, 1000])
    assert np.all(np.abs(c.values - 1) > 0.3)


def test_hillish_pair_k2_reduces():
    pos, neg = hillish_pair_curve([5, 3], [10, 20], [2])
    assert pos.values[0] == pytest.approx(math.log(2) ** 2 / 2, abs=1e-12)
    assert neg.name == "hillish_neg"


def test_hillish_curve_matches_pointwise():
    rng = np.random.default_rng(8)
    xi, eta = rng.pareto(2, 3000), rng.normal(size=3000)
    ks = [2, 17, 300, 3000]
    c = hillish_curve(xi, eta, ks)
    assert c.values == pytest.approx([hillish(xi, eta, k) for k in ks], abs=1e-12)


def test_jitter_deterministic_and_small():
    v = np.array([1.0, 1.0, 2.0, 5.0])
    a, b = jitter(v, seed=4), jitter(v, seed=4)
    assert np.array_equal(a, b)
    assert np.all(np.abs(a - v) <= 1e-9 * np.abs(v))
    assert len(set(a.tolist())) == 4


def test_curve_invariants():
    with pytest.raises(ValueError):
        EstimatorCurve(np.array([3, 2]), np.array([1.0, 1.0]))
    # repeated k is fine when theta indexes the curve
    EstimatorCurve(np.array([2, 2]), np.array([1.0, 1.1]), thetas=np.array([0.1, 0.11]))
    c = EstimatorCurve(np.array([2, 5, 9]), np.array([1.0, 2.0, 3.0]))
    assert c.entries() == [(2, 1.0), (5, 2.0), (9, 3.0)]
    assert c.restrict(3, 9).ks.tolist() == [5, 9]


ints = st.integers(min_value=-10_000, max_value=10_000)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(ints, ints), min_size=3, max_size=40), st.data())
def test_hillish_monotone_invariance(pairs, data):
    xi = np.array([p[0] for p in pairs], dtype=float)
    eta = np.array([p[1] for p in pairs], dtype=float)
    k = data.draw(st.integers(1, len(xi)))
    base = hillish(xi, eta, k)
    # strictly increasing maps, exact on these integers
    assert hillish(xi**3 + xi, eta, k) == pytest.approx(base, abs=1e-12)
    assert hillish(xi, 2 * eta + 7, k) == pytest.approx(base, abs=1e-12)
    assert hillish(np.exp(xi / 1e4), np.exp(eta / 1e4), k) == pytest.approx(base, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1e3, allow_nan=False), min_size=2, max_size=60, unique=True), st.data())
def test_ranks_permutation(eta, data):
    n = len(eta)
    xi = data.draw(st.permutations(list(range(n))))
    k = data.draw(st.integers(1, n))
    r = concomitant_ranks(np.array(xi, dtype=float), np.array(eta), k).ranks
    assert sorted(r.tolist()) == list(range(1, k + 1))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1e3, allow_nan=False), min_size=2, max_size=60), st.data())
def test_ranks_bounds_with_ties(eta, data):
    n = len(eta)
    k = data.draw(st.integers(1, n))
    r = concomitant_ranks(np.arange(n, dtype=float), np.array(eta), k).ranks
    assert np.all((r >= 1) & (r <= k))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(1e-3, 1e6), min_size=10, max_size=80), st.floats(1e-3, 1e3))
def test_hill_qq_scale_property(data, c):
    data = np.array(data)
    k = len(data) // 2
    try:
        h = hill(data, k)
    except DegenerateFit:
        return
    assert hill(c * data, k) == pytest.approx(h, rel=1e-9)
    try:
        q = qq_slope(data, k)
    except DegenerateFit:
        return
    assert qq_slope(c * data, k) == pytest.approx(q, rel=1e-7)
