import pytest

from sublin_csp import ParameterError
from sublin_csp.lemmas import (InvariantResult, check_beta_lemma, check_completeness_mass,
                               check_walk_decay, engineered_pair, expander_corpus, run_suite,
                               small_corpus, suite_e2lin, suite_exact, suite_walks,
                               weighted_distance, _with_maxcut)
from sublin_csp.generators import gen_random_regular


def test_invariant_line_format():
    r = InvariantResult("demo", checked=3, detail={"x": 0.5})
    assert r.line() == "PASS demo: checked=3 violations=0 x=0.5"
    r.fail({"k": 1})
    assert r.line().startswith("FAIL") and r.examples == [{"k": 1}]
    assert InvariantResult("empty").line().startswith("FAIL")
    info = InvariantResult("i", checked=1, informational=True)
    info.fail({})
    assert info.line().startswith("INFO") and info.to_dict()["status"] == "INFO"


def test_unknown_suite():
    with pytest.raises(ParameterError, match="unknown suite"):
        run_suite("nope")


def test_small_corpus_is_connected_and_named_uniquely():
    corpus = small_corpus(n_max=9)
    names = [n for n, _ in corpus]
    assert len(names) == len(set(names))
    from sublin_csp import exact
    assert all(exact.is_connected(g) for _, g in corpus)


def test_walk_suite_small():
    res = suite_walks(n_graphs=3, n_max=20, t_max=10)
    assert all(r.passed for r in res)


def test_exact_suite_small():
    res = suite_exact(n_max=8)
    assert all(r.passed for r in res), [r.line() for r in res]


def test_walk_decay_on_small_expanders():
    r = check_walk_decay(expander_corpus(sizes=((64, 3), (128, 4))), starts_per_graph=5, t_max=30)
    assert r.passed and r.detail["min_slack"] >= 0


def test_beta_and_mass_on_small_corpus():
    corpus = _with_maxcut(small_corpus(n_max=8))
    assert check_beta_lemma(corpus).passed
    assert check_completeness_mass(corpus, t_max=20).passed


def test_e2lin_suite_structure():
    vol, cond, ident, sound, eig = suite_e2lin(count=30)
    assert vol.passed and sound.passed and eig.passed
    # section conductance is exactly 1 - OPT, twice the eps/2 requirement
    assert ident.passed and ident.informational


def test_engineered_pair_hits_target():
    g = gen_random_regular(100, 4, seed=0).graph
    p, q = engineered_pair(g, 1e-5, seed=1)
    assert weighted_distance(g, p, q) == pytest.approx(1e-5, rel=1e-9)
    with pytest.raises(ParameterError):
        engineered_pair(g, 1.0)
