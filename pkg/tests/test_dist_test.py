import numpy as np
import pytest

from sublin_csp import GraphOracle, ParameterError
from sublin_csp.dist_test import (l2_difference_statistic, l2_difference_test, repetitions,
                                  sample_size)
from sublin_csp.lemmas import engineered_pair, weighted_distance

from conftest import complete, cycle


def point(u):
    return lambda k: np.full(k, u, dtype=np.int64)


def test_identical_point_masses_estimate_formula():
    o = GraphOracle(complete(2))
    rng = np.random.default_rng(0)
    s = l2_difference_statistic(point(0), point(0), o, 50, rng)
    x, y = s.k_p, s.k_q
    assert s.estimate == pytest.approx(((x - y) ** 2 - x - y) / 50**2)


def test_identical_distributions_mean_zero():
    o = GraphOracle(cycle(10))
    rng = np.random.default_rng(1)
    unif = lambda k: rng.integers(0, 10, size=k)
    est = [l2_difference_statistic(unif, unif, o, 40, rng).estimate for _ in range(1000)]
    assert abs(np.mean(est)) <= 3 * np.std(est) / np.sqrt(len(est))


def test_disjoint_point_masses_mean_two():
    o = GraphOracle(complete(2))
    rng = np.random.default_rng(2)
    est = [l2_difference_statistic(point(0), point(1), o, 30, rng).estimate for _ in range(2000)]
    assert abs(np.mean(est) - 2.0) <= 3 * np.std(est) / np.sqrt(len(est))


def test_engineered_pair_hits_target():
    g = cycle(20)
    p, q = engineered_pair(g, 1e-3)
    assert weighted_distance(g, p, q) == pytest.approx(1e-3)
    assert q.min() >= 0 and q.sum() == pytest.approx(1)


def test_accepts_identical_and_rejects_far():
    o = GraphOracle(complete(2))
    rng = np.random.default_rng(3)
    acc = sum(l2_difference_test(point(0), point(0), o, 0.01, 0.05, 1.0, rng).accepted
              for _ in range(200))
    assert acc >= 190
    rej = sum(not l2_difference_test(point(0), point(1), o, 0.1, 0.05, 1.0, rng).accepted
              for _ in range(200))
    assert rej >= 190


def test_gap_region_is_only_recorded():
    # distance exactly 2 xi: no guarantee either way, just make sure it runs
    o = GraphOracle(complete(2))
    v = l2_difference_test(point(0), point(1), o, 1.0, 0.05, 1.0, np.random.default_rng(4))
    assert v.diagnostics["threshold"] == 2.0


def test_sizes_and_repetitions():
    assert sample_size(1.0, 0.1, 16) == 160
    assert repetitions(0.05, 12) % 2 == 1
    assert repetitions(0.5, 0.01) == 1


@pytest.mark.parametrize("kw", [dict(xi=0), dict(delta=1.0), dict(b_bound=0)])
def test_parameter_errors(kw):
    args = dict(xi=0.1, delta=0.1, b_bound=1.0) | kw
    with pytest.raises(ParameterError):
        l2_difference_test(point(0), point(0), GraphOracle(complete(2)), rng=np.random.default_rng(0),
                           **args)


def test_early_stop_agrees_with_full_median():
    o = GraphOracle(cycle(12))
    for seed in range(20):
        rng_a, rng_b = np.random.default_rng(seed), np.random.default_rng(seed)
        sa = lambda k, r=rng_a: r.integers(0, 6, size=k)
        sb = lambda k, r=rng_b: r.integers(0, 6, size=k)
        ta = lambda k, r=rng_a: r.integers(3, 12, size=k)
        tb = lambda k, r=rng_b: r.integers(3, 12, size=k)
        a = l2_difference_test(sa, ta, o, 0.02, 0.2, 0.1, rng_a, c_dist=1, c_rep=3)
        b = l2_difference_test(sb, tb, o, 0.02, 0.2, 0.1, rng_b, c_dist=1, c_rep=3, early_stop=False)
        assert a.decision == b.decision
