import itertools
import math

import networkx as nx
import numpy as np
import pytest

from sublin_csp import LimitExceeded, ParameterError, exact

from conftest import complete, cycle, from_edges, from_nx, petersen, star, two_triangles


# -- independent brute-force references -------------------------------


def ref_laplacian(g):
    A = np.zeros((g.n, g.n))
    for u, v in g.edges():
        A[u, v] += 1
        A[v, u] += 1
    d = A.sum(axis=1)
    return np.eye(g.n) - A / np.sqrt(np.outer(d, d))


def ref_conductance(g, k=2):
    deg = g.deg
    best = math.inf
    for bits in itertools.product((0, 1), repeat=g.n):
        s = np.array(bits, dtype=bool)
        vol = deg[s].sum()
        if 0 < vol <= g.volume / k:
            cut = sum(1 for u, v in g.edges() if s[u] != s[v])
            best = min(best, cut / vol)
    return best


def ref_beta(g):
    best = math.inf
    for lab in itertools.product((0, 1, 2), repeat=g.n):  # 0 = outside, 1 = L, 2 = R
        lab = np.array(lab)
        vol = g.deg[lab > 0].sum()
        if vol == 0:
            continue
        val = 0
        for u, v in g.edges():
            a, b = lab[u], lab[v]
            if a and b and a == b:
                val += 2
            elif (a == 0) != (b == 0):
                val += 1
        best = min(best, val / vol)
    return best


def ref_maxcut(g):
    best = 0
    for bits in itertools.product((0, 1), repeat=g.n):
        best = max(best, sum(1 for u, v in g.edges() if bits[u] != bits[v]))
    return best / g.m


# -- spectra -----------------------------------------------------------


def test_laplacian_entries():
    assert np.allclose(exact.normalized_laplacian(complete(2)), [[1, -1], [-1, 1]])
    L = exact.normalized_laplacian(star(3))
    assert np.isclose(L[0, 1], -1 / math.sqrt(3))
    L4 = exact.normalized_laplacian(cycle(4))
    assert np.allclose(np.diag(L4), 1) and np.isclose(L4[0, 1], -0.5) and L4[0, 2] == 0


@pytest.mark.parametrize("g, expected", [
    (complete(2), [0, 2]),
    (cycle(4), [0, 1, 1, 2]),
    (complete(4), [0, 4 / 3, 4 / 3, 4 / 3]),
])
def test_spectra_frozen(g, expected):
    prof = exact.spectral_profile(g)
    assert np.allclose(prof.eigenvalues, expected, atol=1e-9)
    assert np.allclose(prof.eigenvalues, np.linalg.eigvalsh(ref_laplacian(g)), atol=1e-9)


def test_cycle_spectrum_formula():
    n = 9
    want = sorted(1 - math.cos(2 * math.pi * k / n) for k in range(n))
    assert np.allclose(exact.spectral_profile(cycle(n)).eigenvalues, want, atol=1e-9)


def test_jacobi_matches_lapack_on_random_graph():
    g = from_nx(nx.random_regular_graph(5, 40, seed=3))
    a = exact.eigenvalues_symmetric(ref_laplacian(g), method="jacobi").eigenvalues
    b = exact.eigenvalues_symmetric(ref_laplacian(g), method="lapack").eigenvalues
    assert np.max(np.abs(a - b)) < 1e-9


def test_eigensolver_rejects_asymmetric():
    with pytest.raises(ParameterError):
        exact.eigenvalues_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_spectral_extremes_sparse_path_agrees():
    g = from_nx(nx.random_regular_graph(4, 1100, seed=1))
    lam, top = exact.spectral_extremes(g, 3)
    ev = np.linalg.eigvalsh(ref_laplacian(g))
    assert np.allclose(lam, ev[1:3], atol=1e-7) and abs(top - ev[-1]) < 1e-7


def test_disconnected_graph_rejected():
    g = from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(ParameterError):
        exact.spectral_profile(g)
    assert exact.spectral_profile(g, check_connected=False).lam(2) == pytest.approx(0, abs=1e-12)


# -- walks -------------------------------------------------------------


def test_walk_parity_k2():
    g = complete(2)
    pe, po = exact.exact_walk_distributions(g, 0, 0)
    assert pe.tolist() == [1, 0] and po.tolist() == [0, 0]
    pe, po = exact.exact_walk_distributions(g, 0, 1)
    assert np.allclose(pe, [0.5, 0]) and np.allclose(po, [0, 0.5])


def test_signed_measure_equals_parity_difference():
    g = petersen()
    for t in (0, 1, 5, 17):
        pe, po = exact.exact_walk_distributions(g, 3, t)
        assert np.allclose(exact.exact_signed_measure(g, 3, t), pe - po, atol=1e-14)


def test_delta_frozen_on_k2():
    g = complete(2)
    assert exact.exact_delta(g, 0, 0) == 1.0
    for t in (1, 2, 7):
        assert exact.exact_delta(g, 0, t) == pytest.approx(0.5)
    # M = (I - D^-1 A)/2 by matrix powers
    M = 0.5 * (np.eye(2) - np.array([[0, 1], [1, 0]]))
    x = np.linalg.matrix_power(M, 3)[0]
    assert exact.exact_delta(g, 0, 3) == pytest.approx(float(x @ x))


def test_delta_all_matches_single():
    g = two_triangles()
    allv = exact.exact_delta_all(g, 6)
    assert np.allclose(allv, [exact.exact_delta(g, v, 6) for v in range(g.n)])


def test_walk_norms_start_at_inverse_degree():
    g = star(3)
    out = exact.walk_norms_all(g, 4, [0, 1])
    assert np.allclose(out[0], [1 / 3, 1.0])


# -- conductance family --------------------------------------------------


@pytest.mark.parametrize("g, k, expected", [
    (cycle(6), 2, 1 / 3),
    (complete(4), 2, 2 / 3),
    (complete(2), 2, 1.0),
    (two_triangles(), 2, 1 / 7),
])
def test_conductance_frozen(g, k, expected):
    assert exact.exact_conductance_profile(g, k) == pytest.approx(expected)
    assert ref_conductance(g, k) == pytest.approx(expected)


def test_conductance_matches_reference_on_random_graphs():
    rng = np.random.default_rng(5)
    for _ in range(5):
        h = nx.gnp_random_graph(9, 0.45, seed=int(rng.integers(1000)))
        if not nx.is_connected(h):
            continue
        g = from_nx(h)
        for k in (2, 3):
            assert exact.exact_conductance_profile(g, k) == pytest.approx(ref_conductance(g, k))


def test_set_conductance():
    assert exact.set_conductance(two_triangles(), [0, 1, 2]) == pytest.approx(1 / 7)


@pytest.mark.parametrize("g, k, expected", [
    (two_triangles(), 2, 1 / 7),
    (cycle(4), 2, 1 / 2),
    (complete(3), 1, 0.0),
])
def test_rho_frozen(g, k, expected):
    assert exact.exact_rho(g, k) == pytest.approx(expected)


def test_rho_monotone_in_k():
    g = cycle(8)
    vals = [exact.exact_rho(g, k) for k in range(1, 5)]
    assert vals == sorted(vals)


@pytest.mark.parametrize("g, expected", [
    (complete(3), 1 / 3),
    (complete(4), 1 / 3),
    (cycle(6), 0.0),
    (petersen(), None),
])
def test_bipartiteness_ratio(g, expected):
    got = exact.exact_bipartiteness_ratio(g)
    if expected is not None:
        assert got == pytest.approx(expected)
    if g.n <= 8:
        assert got == pytest.approx(ref_beta(g))


def test_beta_within_spectral_bounds():
    # lambda_max is within [2 - 2 beta, 2 - beta^2 / 2]
    for g in (complete(3), complete(5), petersen(), two_triangles()):
        beta = exact.exact_bipartiteness_ratio(g)
        lmax = exact.spectral_profile(g).lambda_max
        assert 2 - 2 * beta - 1e-9 <= lmax <= 2 - beta**2 / 2 + 1e-9


@pytest.mark.parametrize("g, expected", [
    (cycle(6), 1.0),
    (complete(3), 2 / 3),
    (petersen(), 12 / 15),
])
def test_maxcut_frozen(g, expected):
    assert exact.exact_maxcut(g) == pytest.approx(expected)
    assert ref_maxcut(g) == pytest.approx(expected)


def test_maxcut_returns_witness():
    g = petersen()
    frac, side = exact.exact_maxcut(g, return_cut=True)
    assert exact.count_satisfied(g, side) == round(frac * g.m)


def test_limits_raise():
    with pytest.raises(LimitExceeded):
        exact.exact_bipartiteness_ratio(cycle(exact.BETA_LIMIT + 1))
    with pytest.raises(LimitExceeded):
        exact.exact_maxcut(cycle(exact.MAXCUT_LIMIT + 2))


# -- CSP optima ------------------------------------------------------------


def test_e2lin_opt_frozen():
    single = from_edges(2, [(0, 1)], kind="e2lin", q=2, edge_payload=[1])
    assert exact.exact_opt_e2lin(single) == 1.0
    tri = from_edges(3, [(0, 1), (1, 2), (0, 2)], kind="e2lin", q=2, edge_payload=[1, 1, 1])
    assert exact.exact_opt_e2lin(tri) == pytest.approx(2 / 3)
    # brute force over 8 assignments
    best = max(sum((a[u] - a[v] - 1) % 2 == 0 for u, v in [(0, 1), (1, 2), (0, 2)])
               for a in itertools.product(range(2), repeat=3))
    assert best == 2


def test_ulc_opt_odd_cycle_swaps():
    n = 5
    g = from_edges(n, [(i, (i + 1) % n) for i in range(n)], kind="ulc", q=2,
                   edge_payload=[[1, 0]] * n)
    assert exact.exact_opt_ulc(g) == pytest.approx(1 - 1 / n)
    ident = from_edges(n, [(i, (i + 1) % n) for i in range(n)], kind="ulc", q=2)
    assert exact.exact_opt_ulc(ident) == 1.0


def test_opt_kind_mismatch():
    with pytest.raises(ParameterError):
        exact.exact_opt_e2lin(cycle(3))


def test_count_satisfied_matches_assignment():
    g = from_edges(3, [(0, 1), (1, 2)], kind="e2lin", q=3, edge_payload=[1, 2])
    val, psi = exact.exact_opt_e2lin(g, return_assignment=True)
    assert val == 1.0 and exact.count_satisfied(g, psi) == 2


# -- colouring and SAT -------------------------------------------------------


def test_three_colouring():
    assert exact.exact_3colorable(complete(3))
    assert not exact.exact_3colorable(complete(4))
    ok, col = exact.exact_3colorable(petersen(), return_coloring=True)
    assert ok and exact.is_proper_coloring(petersen(), col)
    # odd wheel W_5 (hub + C_5) needs four colours
    assert not exact.exact_3colorable(from_nx(nx.wheel_graph(6)))


def test_three_colouring_agrees_with_networkx_greedy_bound():
    for seed in range(5):
        h = nx.gnp_random_graph(12, 0.3, seed=seed)
        g = from_nx(h)
        if g.m == 0 or g.deg.min() == 0:
            continue
        greedy = max(nx.greedy_color(h, strategy="DSATUR").values()) + 1
        if greedy <= 3:
            assert exact.exact_3colorable(g)


def test_sat_brute():
    assert exact.sat_brute((3, [(1, 2, 3)]))
    assert not exact.sat_brute((1, [(1,), (-1,)]))
    assert not exact.sat_brute((3, [tuple(s * v for s, v in zip(signs, (1, 2, 3)))
                                    for signs in itertools.product((1, -1), repeat=3)]))
