"""Seeded instance generators: certified expanders, planted CSPs and the
3-colouring hardness graphs built from 3-CNF formulas."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx
import numba as nb
import numpy as np

from . import exact
from .errors import CertificationError, ParameterError
from .graph import Graph
from .rng import kernel_seed, stream

MAX_ATTEMPTS = 100


@dataclass
class PlantedInstance:
    graph: Graph
    planted_solution: np.ndarray | None
    corruption: float
    violations: int
    certificate: float  # lambda_2 / 2, a lower bound on conductance
    extras: dict = field(default_factory=dict)

    def sidecar(self):
        return {
            "kind": self.graph.kind,
            "n": self.graph.n,
            "m": self.graph.m,
            "q": self.graph.q,
            "planted_solution": None if self.planted_solution is None else [int(x) for x in self.planted_solution],
            "corruption": self.corruption,
            "violations": self.violations,
            "phi_certificate": self.certificate,
            **self.extras,
        }


def certify(g: Graph):
    """(lambda_2 / 2, lambda_max); raises if the graph is disconnected."""
    lam2, lam_max = exact.spectral_extremes(g, 2)
    return float(lam2[0]) / 2, float(lam_max)


def _check_regular_params(n, d):
    if d < 1 or n < 2:
        raise ParameterError("need n >= 2 and d >= 1")
    if (n * d) % 2:
        raise ParameterError("n*d must be even")
    if d >= n:
        raise ParameterError("need d < n for a simple d-regular graph")


def gen_random_regular(n, d, seed, phi_min=0.0, *, vertex_expansion=False, tag="regular"):
    """Simple d-regular graph with certified lambda_2/2 >= phi_min."""
    _check_regular_params(n, d)
    if d < 3 and phi_min > 0 and n > 4:
        raise ParameterError("d >= 3 needed for expansion")
    for attempt in range(MAX_ATTEMPTS):
        rng = stream(seed, "gen", tag, attempt)
        G = nx.random_regular_graph(d, n, seed=kernel_seed(rng) % (2**32))
        g = Graph(n, np.array(G.edges(), dtype=np.int64).reshape(-1, 2))
        if not exact.is_connected(g):
            continue
        phi_cert, lam_max = certify(g)
        if phi_cert < phi_min:
            continue
        extras = {"lambda_max": lam_max, "attempts": attempt + 1, "seed": seed}
        if vertex_expansion:
            if n <= 24:
                if not neighbor_expansion_holds(g):
                    continue
                extras["vertex_expansion"] = "exhaustive"
            else:
                extras["vertex_expansion"] = "spectral-only"
        return PlantedInstance(g, None, 0.0, 0, phi_cert, extras)
    raise CertificationError("cannot certify expansion")


@nb.njit(cache=True)
def _neighbor_expansion(n, nbr_mask):
    # |N(S)| >= |S| for every nonempty S with |S| <= n/2
    cover = np.zeros(1 << n, dtype=np.int32)
    for s in range(1, 1 << n):
        low = s & (-s)
        v = 0
        while (1 << v) != low:
            v += 1
        cover[s] = cover[s ^ low] | nbr_mask[v]
        size = 0
        x = s
        while x:
            x &= x - 1
            size += 1
        if 2 * size <= n:
            c = 0
            x = cover[s]
            while x:
                x &= x - 1
                c += 1
            if c < size:
                return False
    return True


def neighbor_expansion_holds(g: Graph):
    if g.n > 24:
        raise ParameterError("exhaustive expansion check limited to n <= 24")
    masks = np.zeros(g.n, dtype=np.int32)
    for v in range(g.n):
        for u in g.neighbors(v):
            masks[v] |= 1 << int(u)
    return bool(_neighbor_expansion(g.n, masks))


def gen_two_cluster(n, d, cross, seed, phi_min=0.0):
    """Two disjoint d-regular expanders on n/2 vertices joined by ``cross``
    degree-preserving swaps; each swap adds two crossing edges."""
    if n % 2:
        raise ParameterError("n must be even")
    half = n // 2
    if cross < 0 or 2 * cross > half * d // 2:
        raise ParameterError("cross out of range")
    for attempt in range(MAX_ATTEMPTS):
        rng = stream(seed, "gen", "two-cluster", attempt)
        a = gen_random_regular(half, d, int(rng.integers(2**31)), phi_min, tag="cluster-a").graph
        b = gen_random_regular(half, d, int(rng.integers(2**31)), phi_min, tag="cluster-b").graph
        ea = a.edges()
        eb = b.edges() + half
        ia = rng.choice(len(ea), size=cross, replace=False)
        ib = rng.choice(len(eb), size=cross, replace=False)
        new = []
        for i, j in zip(ia, ib):
            (u, v), (x, y) = ea[i], eb[j]
            new += [(u, x), (v, y)]
        keep_a = np.delete(ea, ia, axis=0)
        keep_b = np.delete(eb, ib, axis=0)
        edges = np.concatenate([keep_a, keep_b, np.array(new, dtype=np.int64).reshape(-1, 2)])
        g = Graph(n, edges)
        if not g.is_simple() or not exact.is_connected(g):
            continue
        labels = np.repeat(np.arange(2, dtype=np.int64), half)
        phi_cert, _ = certify(g)
        return PlantedInstance(g, labels, 2 * cross / g.m, 2 * cross, phi_cert,
                               {"cross_edges": 2 * cross, "seed": seed})
    raise CertificationError("cannot build a connected two-cluster graph")


# ----------------------------------------------------------------------
# planted Max Cut


def _swap_pass(edges, eset, rng, n_half, steps, crossing_only):
    """Degree-preserving double-edge swaps on the bipartite base graph."""
    m = len(edges)
    for _ in range(steps):
        i, j = rng.integers(m, size=2)
        a, b = edges[i]
        c, e = edges[j]
        if a == c or b == e:
            continue
        n1, n2 = (a, e), (c, b)
        if n1 in eset or n2 in eset:
            continue
        eset.discard(edges[i])
        eset.discard(edges[j])
        eset.add(n1)
        eset.add(n2)
        edges[i], edges[j] = n1, n2


def _corrupt_cut(edges, eset, rng, n_half, swaps):
    """Each swap turns two crossing edges (a,b), (c,e) into (a,c), (b,e)."""
    m = len(edges)
    done = 0
    guard = 0
    while done < swaps:
        guard += 1
        if guard > 1000 * (swaps + 10):
            raise CertificationError("corruption swaps stalled")
        i, j = rng.integers(m, size=2)
        a, b = edges[i]
        c, e = edges[j]
        if not (a < n_half <= b and c < n_half <= e) or a == c or b == e:
            continue
        n1, n2 = (min(a, c), max(a, c)), (min(b, e), max(b, e))
        if n1 in eset or n2 in eset:
            continue
        eset.discard(edges[i])
        eset.discard(edges[j])
        eset.add(n1)
        eset.add(n2)
        edges[i], edges[j] = n1, n2
        done += 1


def gen_planted_maxcut(n, d, eps, seed, phi_min=0.0, mix_factor=10):
    """Random bipartite d-regular graph with floor(eps*m/2) corrupting swaps.

    Every swap makes exactly two edges monochromatic under the planted
    bipartition, so the cut value stays >= 1 - eps.
    """
    if n % 2:
        raise ParameterError("n must be even")
    if not 0 <= eps < 1:
        raise ParameterError("eps must lie in [0, 1)")
    h = n // 2
    if d > h:
        raise ParameterError("need d <= n/2")
    for attempt in range(MAX_ATTEMPTS):
        rng = stream(seed, "gen", "maxcut", attempt)
        edges = [(i, h + (i + j) % h) for i in range(h) for j in range(d)]
        eset = set(edges)
        _swap_pass(edges, eset, rng, h, mix_factor * len(edges), True)
        swaps = int(np.floor(eps * len(edges) / 2 + 1e-9))
        _corrupt_cut(edges, eset, rng, h, swaps)
        perm = rng.permutation(n)  # hide the bipartition
        arr = perm[np.array(edges, dtype=np.int64)]
        g = Graph(n, arr)
        if not exact.is_connected(g):
            continue
        phi_cert, lam_max = certify(g)
        if phi_cert < phi_min:
            continue
        side = np.zeros(n, dtype=np.int64)
        side[perm[h:]] = 1
        viol = int(np.count_nonzero(side[g.edge_u] == side[g.edge_v]))
        return PlantedInstance(g, side, eps, viol, phi_cert,
                               {"lambda_max": lam_max, "attempts": attempt + 1, "seed": seed,
                                "cut_lower_bound": 1 - viol / g.m})
    raise CertificationError("cannot certify expansion")


# ----------------------------------------------------------------------
# planted E2Lin / ULC


def _ulc_completion(q, a, b, rng, completion):
    """A permutation of range(q) sending label a to label b."""
    if completion == "shift":
        return (np.arange(q) + (b - a)) % q
    dom = [i for i in range(q) if i != a]
    img = [i for i in range(q) if i != b]
    if completion == "random":
        img = list(rng.permutation(img))
    elif completion != "identity":
        raise ParameterError(f"unknown completion {completion!r}")
    perm = np.empty(q, dtype=np.int64)
    perm[a] = b
    perm[dom] = img
    return perm


def gen_planted_e2lin(n, d, q, eps, seed, phi_min=0.0):
    if q < 1:
        raise ParameterError("q must be >= 1")
    if not 0 <= eps <= 1:
        raise ParameterError("eps must lie in [0, 1]")
    base = gen_random_regular(n, d, seed, phi_min)
    g0 = base.graph
    rng = stream(seed, "gen", "e2lin", "labels")
    psi = rng.integers(0, q, size=n)
    c = (psi[g0.edge_u] - psi[g0.edge_v]) % q
    k = int(round(eps * g0.m))
    idx = rng.choice(g0.m, size=k, replace=False)
    c[idx] = rng.integers(0, q, size=k)
    g = g0.with_payload("e2lin", q, c)
    viol = g.m - exact.count_satisfied(g, psi)
    return PlantedInstance(g, psi, eps, viol, base.certificate,
                           {**base.extras, "resampled": k})


def gen_planted_ulc(n, d, q, eps, seed, phi_min=0.0, completion="random"):
    if q < 1:
        raise ParameterError("q must be >= 1")
    if not 0 <= eps <= 1:
        raise ParameterError("eps must lie in [0, 1]")
    base = gen_random_regular(n, d, seed, phi_min)
    g0 = base.graph
    rng = stream(seed, "gen", "ulc", "labels")
    psi = rng.integers(0, q, size=n)
    perms = np.empty((g0.m, q), dtype=np.int64)
    for e in range(g0.m):
        perms[e] = _ulc_completion(q, psi[g0.edge_u[e]], psi[g0.edge_v[e]], rng, completion)
    k = int(round(eps * g0.m))
    for e in rng.choice(g0.m, size=k, replace=False):
        perms[e] = rng.permutation(q)
    g = g0.with_payload("ulc", q, perms)
    viol = g.m - exact.count_satisfied(g, psi)
    return PlantedInstance(g, psi, eps, viol, base.certificate,
                           {**base.extras, "resampled": k, "completion": completion})


# ----------------------------------------------------------------------
# 3-CNF and the colouring construction


@dataclass(frozen=True)
class Cnf3:
    n_vars: int
    clauses: tuple  # tuples of three nonzero ints, sign = polarity, 1-based
    k_bound: int

    def __post_init__(self):
        for cl in self.clauses:
            if len(cl) != 3:
                raise ParameterError("malformed CNF: every clause needs 3 literals")
            vs = [abs(x) for x in cl]
            if len(set(vs)) != 3 or min(vs) < 1 or max(vs) > self.n_vars:
                raise ParameterError("malformed CNF: clause needs 3 distinct variables in range")
        if self.max_occurrence() > self.k_bound:
            raise ParameterError("malformed CNF: a literal exceeds the occurrence bound")

    def max_occurrence(self):
        counts = {}
        for cl in self.clauses:
            for x in cl:
                counts[x] = counts.get(x, 0) + 1
        return max(counts.values(), default=0)

    def as_tuple(self):
        return self.n_vars, self.clauses


def all_cnfs_on_three_vars(k=2, max_clauses=None):
    """Every multiset of clauses over variables 1..3 respecting the bound k."""
    patterns = [tuple(s * v for s, v in zip(signs, (1, 2, 3)))
                for signs in itertools.product((1, -1), repeat=3)]
    # each clause uses every variable, so 2k literal slots per variable cap the count
    top = 2 * k if max_clauses is None else max_clauses
    out = [Cnf3(3, (), k)]
    for size in range(1, top + 1):
        for combo in itertools.combinations_with_replacement(patterns, size):
            try:
                out.append(Cnf3(3, combo, k))
            except ParameterError:
                pass
    return out


def random_cnf(n_vars, n_clauses, k, rng, max_tries=1000):
    counts = {}
    clauses = []
    for _ in range(n_clauses):
        for _ in range(max_tries):
            vs = rng.choice(n_vars, size=3, replace=False) + 1
            cl = tuple(int(v) if rng.random() < 0.5 else -int(v) for v in vs)
            if all(counts.get(x, 0) < k for x in cl):
                break
        else:
            break
        for x in cl:
            counts[x] = counts.get(x, 0) + 1
        clauses.append(cl)
    return Cnf3(n_vars, tuple(clauses), k)


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges = []

    def add(self, k=1):
        start = self.n
        self.n += k
        return list(range(start, start + k))

    def edge(self, a, b):
        self.edges.append((a, b))

    def equality(self, y1, y2):
        # K4 minus the edge y1-y2: both apexes see y1 and y2 and each other
        a, b = self.add(2)
        for x in (y1, y2):
            self.edge(x, a)
            self.edge(x, b)
        self.edge(a, b)

    def clause(self, lits, trues):
        """lits/trues: literal vertices x1, x2, x3 and their T-class partners."""
        n2, n4, n5, n6, n22, n222 = self.add(6)
        self.edge(lits[1], n2)
        self.edge(trues[1], n2)
        self.edge(n2, n4)
        self.edge(n4, n5)
        self.edge(n5, n6)
        self.edge(n4, n6)
        self.edge(lits[0], n22)
        self.edge(trues[0], n22)
        self.edge(n5, n22)
        self.edge(lits[2], n222)
        self.edge(trues[2], n222)
        self.edge(n6, n222)


def literal_index(var, negated, copy, k):
    """Position of copy ``copy`` of literal (var, negated); var is 0-based."""
    return var * 2 * k + (k if negated else 0) + copy


def gen_hardness_3col(f: Cnf3, d_exp=3, seed=0):
    """Build the degree-bounded colouring instance for formula f.

    Returns (graph, info) where info records the layout, the literal/colour
    correspondence and the degree bound d'.
    """
    k = f.k_bound
    size = 2 * k * f.n_vars
    if size < 2:
        raise ParameterError("formula too small for the construction")
    d_layer = min(d_exp, size - 1)
    if (size * d_layer) % 2:
        d_layer -= 1
    b = _Builder()
    layers = {name: b.add(size) for name in ("D", "T", "F")}
    lits = b.add(size)
    layer_certs = {}
    for li, name in enumerate(("D", "T", "F")):
        if d_layer >= 1:
            inst = gen_random_regular(size, d_layer, seed, phi_min=1e-9 if size > 2 else 0.0,
                                      vertex_expansion=True, tag=f"layer-{name}")
            layer_certs[name] = {"phi_certificate": inst.certificate,
                                 "vertex_expansion": inst.extras.get("vertex_expansion")}
            for u, v in inst.graph.edges():
                b.equality(layers[name][u], layers[name][v])
    for idx in range(size):
        b.edge(layers["D"][idx], layers["T"][idx])
        b.edge(layers["T"][idx], layers["F"][idx])
        b.edge(layers["D"][idx], layers["F"][idx])
        b.edge(lits[idx], layers["D"][idx])
    for var in range(f.n_vars):
        for neg in (False, True):
            copies = [lits[literal_index(var, neg, j, k)] for j in range(k)]
            for x, y in itertools.combinations(copies, 2):
                b.equality(x, y)
        for j in range(k):
            b.edge(lits[literal_index(var, False, j, k)], lits[literal_index(var, True, j, k)])
    used = {}
    for cl in f.clauses:
        xs, ts = [], []
        for lit in cl:
            var, neg = abs(lit) - 1, lit < 0
            j = used.get(lit, 0)
            used[lit] = j + 1
            idx = literal_index(var, neg, j, k)
            xs.append(lits[idx])
            ts.append(layers["T"][idx])
        b.clause(xs, ts)
    g = Graph(b.n, np.array(b.edges, dtype=np.int64).reshape(-1, 2))
    bound = max(2 * d_layer + 3, 2 * k + 1)
    info = {
        "layers": {k_: [v[0], v[-1] + 1] for k_, v in layers.items()},
        "literals": [lits[0], lits[-1] + 1],
        "degree_bound": bound,
        "max_degree": int(g.deg.max()),
        "layer_degree": d_layer,
        "layer_certificates": layer_certs,
        "correspondence": "literal (var, sign, copy) <-> colour index var*2k + sign*k + copy",
    }
    return g, info


def equality_gadget_check():
    """Enumerate 3-colourings of the 4-vertex gadget; y1 and y2 must agree."""
    b = _Builder()
    y1, y2 = b.add(2)
    b.equality(y1, y2)
    ok = True
    count = 0
    for col in itertools.product(range(3), repeat=b.n):
        if all(col[u] != col[v] for u, v in b.edges):
            count += 1
            ok &= col[y1] == col[y2]
    return {"proper_colorings": count, "forces_equal": bool(ok and count > 0)}


def clause_gadget_check():
    """For each true/false pattern on the three literals, does a proper
    extension exist?  Expected: exactly the all-false pattern fails."""
    DCOL, TCOL, FCOL = 0, 1, 2
    b = _Builder()
    xs = b.add(3)
    tv = b.add(3)
    first_inner = b.n
    b.clause(xs, tv)
    inner = list(range(first_inner, b.n))
    result = {}
    for pattern in itertools.product((TCOL, FCOL), repeat=3):
        fixed = {**{x: c for x, c in zip(xs, pattern)}, **{t: TCOL for t in tv}}
        ext = False
        for col in itertools.product(range(3), repeat=len(inner)):
            full = {**fixed, **dict(zip(inner, col))}
            if all(full[u] != full[v] for u, v in b.edges):
                ext = True
                break
        result["".join("T" if c == TCOL else "F" for c in pattern)] = ext
    del DCOL
    return result
