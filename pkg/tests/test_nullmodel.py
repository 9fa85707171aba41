import math
import random

import numpy as np
import pytest
from conftest import as_array, random_net, random_values, to_communities, to_graph
from hypothesis import given
from hypothesis import strategies as st
from oracles import STATUS_FUNCS, counts, exhaustive_expected_magnitude

from sentiparadox.graph import ConnectionType, SocialGraph
from sentiparadox.nullmodel import (
    NullConfig,
    expected_magnitude,
    naive_magnitudes,
    null_counts,
    permute_values,
    permuted_assignment,
    run_null_model,
    surprise,
)
from sentiparadox.paradox import AggKind, Kind, prepare
from sentiparadox.synth import GenSpec, Model, SwbAssignment, assign_swb, generate_graph

F = ConnectionType.FRIENDS
STAR = SocialGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
STAR_SWB = np.array([0.1, -0.2, -0.3, -0.4])


@pytest.mark.parametrize("n,m,me,want", [(79_453, 0.5511, 0.5010, 28.21), (81_941, 0.5411, 0.4950, 26.41)])
def test_surprise_reference_rows(n, m, me, want):
    assert surprise(n, m, me) == pytest.approx(want, abs=0.1)


def test_surprise_zero_and_errors():
    assert surprise(100, 0.3, 0.3) == 0.0
    for bad in (0.0, 1.0):
        with pytest.raises(ValueError):
            surprise(10, 0.5, bad)
    with pytest.raises(ValueError):
        surprise(0, 0.5, 0.5)


@given(st.integers(1, 10**6), st.floats(0.01, 0.99), st.floats(-0.5, 0.5))
def test_surprise_antisymmetric(n, me, d):
    assert surprise(n, me + d, me) == pytest.approx(-surprise(n, me - d, me), rel=1e-9, abs=1e-9)


@given(st.lists(st.one_of(st.none(), st.floats(-1, 1)), max_size=40), st.integers(0, 2**32 - 1), st.integers(0, 50))
def test_permutation_preserves_multiset_and_undefined(vals, seed, r):
    x = as_array(vals)
    y = permuted_assignment(x, seed, r)
    assert np.array_equal(np.isnan(x), np.isnan(y))
    assert sorted(x[~np.isnan(x)].tolist()) == sorted(y[~np.isnan(y)].tolist())


@given(st.lists(st.integers(-(2**62), 2**62), max_size=30), st.integers(0, 1000))
def test_permute_values_multiset(vals, seed):
    assert sorted(permute_values(np.array(vals, dtype=np.int64), seed).tolist()) == sorted(vals)


def test_replicates_reproducible_and_distinct():
    x = np.linspace(-1, 1, 50)
    assert np.array_equal(permuted_assignment(x, 3, 7), permuted_assignment(x, 3, 7))
    assert not np.array_equal(permuted_assignment(x, 3, 7), permuted_assignment(x, 3, 8))
    assert not np.array_equal(permuted_assignment(x, 3, 7), permuted_assignment(x, 4, 7))


def star_magnitude(v):
    v = np.asarray(v, dtype=float)
    return prepare(Kind.GENERAL, STAR, v, F, AggKind.MEAN).stats().magnitude


def test_star_exhaustive_expectation_and_monte_carlo():
    exact = exhaustive_expected_magnitude(star_magnitude, STAR_SWB.tolist())
    assert exact == pytest.approx(0.5)
    prep = prepare(Kind.GENERAL, STAR, STAR_SWB, F, AggKind.MEAN)
    mc = expected_magnitude(prep, NullConfig(10_000, 1))
    assert abs(mc - exact) <= 0.02


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("kind", ["general", "triad", "common-neighbor", "community", "common-interest"])
def test_fast_path_equals_naive_recomputation(seed, kind):
    rng = random.Random(seed)
    net = random_net(rng, rng.randint(5, 50), p_friend=0.15, p_follow=0.1)
    vals = random_values(rng, net.n)
    g, comms = to_graph(net), to_communities(net, 4)
    t = [ConnectionType.FRIENDS, ConnectionType.FOLLOWEES, ConnectionType.FOLLOWERS][seed % 3]
    agg = [AggKind.MEAN, AggKind.MEDIAN][seed % 2]
    x = as_array(vals)
    cfg = NullConfig(40, seed)
    prep = prepare(Kind(kind), g, x, t, agg, comms)
    fast = run_null_model(prep, cfg)

    def oracle(v):
        h, d, k = counts(STATUS_FUNCS[kind](net, [None if math.isnan(a) else a for a in v.tolist()], t.value, agg.value))
        return h / (h + d + k) if h + d + k else 0.0

    slow = naive_magnitudes(oracle, x, cfg)
    assert np.array_equal(fast.magnitudes, slow)
    assert expected_magnitude(prep, cfg) == pytest.approx(expected_magnitude(oracle, cfg, values=x), abs=1e-15)


@pytest.mark.parametrize("threads", [2, 3, 4, 8])
def test_null_counts_invariant_to_threads(threads):
    net = random_net(random.Random(9), 50, p_friend=0.2)
    g = to_graph(net)
    x = as_array(random_values(random.Random(10), net.n, grid=False))
    for agg in AggKind:
        prep = prepare(Kind.GENERAL, g, x, F, agg)
        cfg = NullConfig(70, 5)
        assert np.array_equal(null_counts(prep, cfg, threads), null_counts(prep, cfg, 1))


def test_null_result_summaries():
    prep = prepare(Kind.GENERAL, STAR, STAR_SWB, F, AggKind.MEAN)
    res = run_null_model(prep, NullConfig(500, 2))
    assert res.counts.shape == (500, 3)
    assert np.all(res.counts.sum(axis=1) == res.total)
    m = res.magnitudes
    assert np.all((0 <= m) & (m <= 1))
    props = res.expected_proportions()
    assert sum(props) == pytest.approx(1.0)
    p = res.empirical_p()
    assert p == (1 + np.sum(res.counts[:, 0] >= 3)) / 501
    r = res.result()
    assert r.observed == 0.75 and r.n == 4
    assert r.surprise == pytest.approx(surprise(4, 0.75, res.expected))


def test_surprise_undefined_when_null_degenerate():
    g = SocialGraph.from_edges(3, [(0, 1), (1, 2)])
    prep = prepare(Kind.GENERAL, g, np.full(3, 0.2), F, AggKind.MEAN)
    res = run_null_model(prep, NullConfig(10, 0))
    assert res.expected == 0.0
    assert res.surprise_for(0) is None
    assert math.isnan(res.result().surprise)


def test_callable_route_needs_values():
    with pytest.raises(ValueError):
        expected_magnitude(star_magnitude, NullConfig(5))


def test_config_validation():
    with pytest.raises(ValueError):
        NullConfig(0)


@given(st.integers(0, 2**31), st.integers(1, 60))
def test_expected_magnitude_bounded_and_reproducible(seed, reps):
    prep = prepare(Kind.GENERAL, STAR, STAR_SWB, F, AggKind.MEDIAN)
    a = expected_magnitude(prep, NullConfig(reps, seed))
    assert 0.0 <= a <= 1.0
    assert a == expected_magnitude(prep, NullConfig(reps, seed))


def test_permute_single_value():
    assert permute_values(np.array([0.4]), 9).tolist() == [0.4]


def test_permutation_orders_uniform():
    base = np.array([1, 2, 3])
    tally = {}
    for s in range(100_000):
        key = tuple(permute_values(base, s).tolist())
        tally[key] = tally.get(key, 0) + 1
    assert len(tally) == 6
    for k in tally.values():
        assert abs(k / 100_000 - 1 / 6) <= 0.01


def test_identical_values_expected_zero():
    prep = prepare(Kind.GENERAL, STAR, np.full(4, 0.2), F, AggKind.MEAN)
    assert expected_magnitude(prep, NullConfig(50, 0)) == 0.0


def test_large_iid_graph_expected_half():
    g = generate_graph(GenSpec(Model.ER, 20_000, p=5e-4, seed=1))
    x = assign_swb(g, SwbAssignment(seed=2))
    for agg in AggKind:
        assert abs(expected_magnitude(prepare(Kind.GENERAL, g, x, F, agg), NullConfig(50, 3)) - 0.5) <= 0.02
