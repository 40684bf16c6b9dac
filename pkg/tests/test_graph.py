import numpy as np
import pytest
from scipy import stats

from sublin_csp import GraphFormatError, GraphOracle, ParameterError
from sublin_csp.graph import Decision, Verdict, format_graph, parse_graph, read_graph, write_graph

from conftest import complete, cycle, from_edges, path, petersen, star


def test_degrees_of_small_graphs():
    assert GraphOracle(complete(2)).degree(0) == 1
    assert GraphOracle(cycle(4)).degree(2) == 2
    o = GraphOracle(petersen())
    assert {o.degree(v) for v in range(10)} == {3}


def test_neighbor_plain():
    assert GraphOracle(complete(2)).neighbor(0, 0) == (1, None)


def test_neighbor_e2lin_offsets_invert():
    g = from_edges(2, [(0, 1)], kind="e2lin", q=3, edge_payload=[2])
    o = GraphOracle(g)
    assert o.neighbor(0, 0) == (1, 2)
    assert o.neighbor(1, 0) == (0, 1)


def test_neighbor_ulc_permutation_inverse():
    g = from_edges(2, [(0, 1)], kind="ulc", q=3, edge_payload=[[1, 2, 0]])
    o = GraphOracle(g)
    u, fwd = o.neighbor(0, 0)
    _, back = o.neighbor(1, 0)
    assert u == 1 and fwd == (1, 2, 0)
    assert all(back[fwd[i]] == i for i in range(3))


def test_query_counter():
    o = GraphOracle(cycle(5))
    assert o.query_count == 0
    o.degree(0)
    assert o.query_count == 1
    for i in range(2):
        o.neighbor(3, i)
    assert o.query_count == 3
    o.degrees([0, 1, 2])
    assert o.query_count == 6


def test_bad_queries_raise():
    o = GraphOracle(cycle(4))
    with pytest.raises(IndexError):
        o.degree(4)
    with pytest.raises(IndexError):
        o.neighbor(0, 2)
    with pytest.raises(ValueError):
        o.charge(-1)


def test_degree_weighted_sampling_star_and_path():
    rng = np.random.default_rng(0)
    s = GraphOracle(star(3)).sample_vertices(20000, rng)
    assert abs(np.mean(s == 0) - 0.5) < 0.02
    p = GraphOracle(path(3)).sample_vertices(100000, rng)
    counts = np.bincount(p, minlength=3)
    assert stats.chisquare(counts, [25000, 50000, 25000]).pvalue > 0.01


def test_strict_sublinear_sampler_matches_degree_law():
    rng = np.random.default_rng(1)
    o = GraphOracle(star(3), strict_sublinear=True)
    draws = o.sample_vertices(4000, rng)
    assert abs(np.mean(draws == 0) - 0.5) < 0.05
    assert o.query_count > 4000  # rejection sampling pays for degree probes


def test_format_round_trip(tmp_path):
    g = from_edges(3, [(0, 1), (1, 2)], kind="ulc", q=2, edge_payload=[[1, 0], [0, 1]])
    text = format_graph(g)
    assert text.splitlines()[0] == "graph 3 2 ulc 2"
    h = parse_graph(text)
    assert np.array_equal(h.edge_payload, g.edge_payload)
    write_graph(g, tmp_path / "g.txt")
    assert format_graph(read_graph(tmp_path / "g.txt")) == text


def test_parse_comments_and_e2lin_reduction():
    g = parse_graph("# hello\ngraph 2 1 e2lin 3\n0 1 5  # trailing\n")
    assert g.edge_payload.tolist() == [2]


@pytest.mark.parametrize("text, where", [
    ("", "line 1"),
    ("graph 2 2\n0 1\n", "line 3"),
    ("graph 2 1\n0 2\n", "line 2"),
    ("graph 2 1 ulc 2\n0 1 0 0\n", "line 2"),
    ("graph 3 1\n0 1\n", "no incident edge"),
    ("graph 2 1 e2lin\n0 1 1\n", "needs q"),
])
def test_parse_errors_name_the_line(text, where):
    with pytest.raises(GraphFormatError, match=where):
        parse_graph(text)


def test_graph_rejects_bad_payload():
    with pytest.raises(ParameterError):
        from_edges(2, [(0, 1)], kind="ulc", q=2, edge_payload=[[0, 0]])
    with pytest.raises(ParameterError):
        from_edges(2, [(0, 3)])


def test_verdict_dict():
    v = Verdict(Decision.ACCEPT, {"x": 1})
    assert v.accepted and v.to_dict()["decision"] == "accept"
