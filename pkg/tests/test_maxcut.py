import math

import numpy as np
import pytest

from sublin_csp import GraphOracle, ParameterError
from sublin_csp.generators import gen_planted_maxcut
from sublin_csp.lemmas import maxcut_point
from sublin_csp.maxcut import MaxCutConfig, parameters, query_budget, test_expander_maxcut

from conftest import complete


def test_walk_length_and_threshold_formulas():
    cfg = MaxCutConfig(phi=0.2, eps=0.01, rho=0.3, C_mc=1.0, xi_scale=2.0)
    mu = 1000.0
    assert cfg.walk_length(mu) == math.ceil(math.log(mu) / (16 * 0.04 * 0.3))
    assert cfg.exponent() == pytest.approx(0.01 / (2 * 0.04 * 0.3))
    assert cfg.xi_trm(mu) == pytest.approx(1 / (2.0 * mu ** (1 + cfg.exponent())))


def test_infeasible_eps_rejected():
    with pytest.raises(ParameterError, match="infeasible"):
        MaxCutConfig(phi=0.1, eps=0.2, rho=0.1, C_mc=1.0).validate()


@pytest.mark.parametrize("bad", [dict(phi=0), dict(rho=1.0), dict(C_mc=-1), dict(mu_mode="guess"),
                                 dict(n_start_vertices=0)])
def test_config_validation(bad):
    args = dict(phi=0.2, eps=0.001, rho=0.3) | bad
    with pytest.raises(ParameterError):
        MaxCutConfig(**args).validate()


def test_parameters_default_delta():
    o = GraphOracle(complete(5))
    p = parameters(o, MaxCutConfig(phi=0.5, eps=0.001, rho=0.5))
    assert p["delta"] == pytest.approx(1 / 25) and p["repetitions"] % 2 == 1


@pytest.fixture(scope="module")
def planted():
    return gen_planted_maxcut(600, 8, 0.0, seed=11, phi_min=0.16).graph


@pytest.fixture(scope="module")
def corrupted():
    return gen_planted_maxcut(600, 8, 0.45, seed=11, phi_min=0.16).graph


def test_accepts_bipartite_expander(planted):
    cfg = maxcut_point()
    acc = [test_expander_maxcut(GraphOracle(planted), cfg, seed=s).accepted for s in range(5)]
    assert sum(acc) >= 4


def test_rejects_far_from_bipartite(corrupted):
    cfg = maxcut_point()
    acc = [test_expander_maxcut(GraphOracle(corrupted), cfg, seed=s).accepted for s in range(3)]
    assert sum(acc) == 0


def test_seeded_runs_are_reproducible(planted):
    cfg = maxcut_point()
    a, b = GraphOracle(planted), GraphOracle(planted)
    va, vb = test_expander_maxcut(a, cfg, seed=3), test_expander_maxcut(b, cfg, seed=3)
    assert va.decision == vb.decision and a.query_count == b.query_count


def test_queries_within_budget(corrupted):
    cfg = maxcut_point()
    o = GraphOracle(corrupted)
    test_expander_maxcut(o, cfg, seed=0)
    assert o.query_count <= query_budget(GraphOracle(corrupted), cfg)
    assert o.query_count < corrupted.volume * 1e6  # sanity: finite, recorded


def test_estimated_volume_mode(planted):
    cfg = maxcut_point(mu_mode="estimated")
    v = test_expander_maxcut(GraphOracle(planted), cfg, seed=1)
    assert abs(v.diagnostics["mu"] - planted.volume) / planted.volume < 0.5


def test_exact_diagnostics_flag(planted):
    cfg = maxcut_point(exact_diagnostics=True)
    v = test_expander_maxcut(GraphOracle(planted), cfg, seed=2)
    assert all("exact_delta" in s for s in v.diagnostics["seeds"])
    assert np.isfinite(v.diagnostics["seeds"][0]["exact_delta"])
