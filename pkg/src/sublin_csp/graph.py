"""Adjacency-list graphs and the query-counted oracle that testers talk to."""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import GraphFormatError, ParameterError

KINDS = ("plain", "e2lin", "ulc")
_NO_OFF = np.zeros(1, dtype=np.int64)
_NO_PERM = np.zeros((1, 1), dtype=np.int64)


class Graph:
    """Undirected multigraph stored as CSR half-edges.

    ``payload`` is None for plain graphs, an int array of offsets in Z_q for
    e2lin instances, or an (2m, q) array of label permutations for ulc
    instances.  The payload of half-edge u->v always inverts that of v->u.
    Edge ``e`` produces half-edges ``out_index[2e]`` (u->v) and
    ``out_index[2e+1]`` (v->u).
    """

    def __init__(self, n, edges, kind="plain", q=None, edge_payload=None):
        if kind not in KINDS:
            raise ParameterError(f"unknown graph kind {kind!r}")
        if kind != "plain" and (q is None or q < 1):
            raise ParameterError("annotated instances need q >= 1")
        self.n = int(n)
        self.kind = kind
        self.q = int(q) if q is not None else None
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        self.m = len(edges)
        if self.m and (edges.min() < 0 or edges.max() >= self.n):
            raise ParameterError("edge endpoint out of range")
        self.edge_u = edges[:, 0].copy()
        self.edge_v = edges[:, 1].copy()

        src = np.empty(2 * self.m, dtype=np.int64)
        dst = np.empty(2 * self.m, dtype=np.int64)
        src[0::2], dst[0::2] = self.edge_u, self.edge_v
        src[1::2], dst[1::2] = self.edge_v, self.edge_u
        order = np.argsort(src, kind="stable")
        self.targets = dst[order]
        self.half_edge = order  # CSR slot -> half-edge id
        counts = np.bincount(src, minlength=self.n)
        self.offsets = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(counts, out=self.offsets[1:])
        self.deg = counts.astype(np.int64)
        self.out_index = np.empty(2 * self.m, dtype=np.int64)
        self.out_index[order] = np.arange(2 * self.m)

        self.edge_payload = None
        self.payload = None
        if kind == "e2lin":
            c = np.zeros(self.m, dtype=np.int64) if edge_payload is None else np.asarray(edge_payload, dtype=np.int64)
            c = np.mod(c.reshape(self.m), self.q)
            half = np.empty(2 * self.m, dtype=np.int64)
            half[0::2] = c
            half[1::2] = np.mod(-c, self.q)
            self.edge_payload = c
            self.payload = half[order]
        elif kind == "ulc":
            if edge_payload is None:
                p = np.tile(np.arange(self.q, dtype=np.int64), (self.m, 1))
            else:
                p = np.asarray(edge_payload, dtype=np.int64).reshape(self.m, self.q)
            ident = np.arange(self.q)
            if self.m and not np.all(np.sort(p, axis=1) == ident):
                raise ParameterError("ulc payload rows must be permutations of 0..q-1")
            inv = np.empty_like(p)
            rows = np.arange(self.m)[:, None]
            inv[rows, p] = ident[None, :]
            half = np.empty((2 * self.m, self.q), dtype=np.int64)
            half[0::2] = p
            half[1::2] = inv
            self.edge_payload = p
            self.payload = half[order]

    # basic quantities -------------------------------------------------
    @property
    def volume(self):
        return int(2 * self.m)

    def neighbors(self, v):
        return self.targets[self.offsets[v]:self.offsets[v + 1]]

    def edges(self):
        return np.stack([self.edge_u, self.edge_v], axis=1)

    def is_simple(self):
        if np.any(self.edge_u == self.edge_v):
            return False
        a = np.minimum(self.edge_u, self.edge_v)
        b = np.maximum(self.edge_u, self.edge_v)
        keys = a * self.n + b
        return len(np.unique(keys)) == self.m

    def with_payload(self, kind, q, edge_payload):
        return Graph(self.n, self.edges(), kind=kind, q=q, edge_payload=edge_payload)

    def plain(self):
        return Graph(self.n, self.edges())

    def check_invariants(self):
        if self.n and self.deg.min() < 1:
            raise ParameterError("every vertex must have degree >= 1")
        # symmetry holds by construction; verify the payload inversion anyway
        if self.kind == "e2lin":
            fwd = self.payload[self.out_index[0::2]]
            bwd = self.payload[self.out_index[1::2]]
            assert np.all((fwd + bwd) % self.q == 0)
        elif self.kind == "ulc":
            fwd = self.payload[self.out_index[0::2]]
            bwd = self.payload[self.out_index[1::2]]
            rows = np.arange(self.m)[:, None]
            assert np.all(bwd[rows, fwd] == np.arange(self.q)[None, :])
        return True

    def __repr__(self):
        extra = f", q={self.q}" if self.q else ""
        return f"Graph(n={self.n}, m={self.m}, kind={self.kind!r}{extra})"


# ----------------------------------------------------------------------
# file format


def format_graph(g: Graph) -> str:
    head = f"graph {g.n} {g.m}"
    if g.kind != "plain":
        head += f" {g.kind} {g.q}"
    lines = [head]
    for e in range(g.m):
        u, v = int(g.edge_u[e]), int(g.edge_v[e])
        if g.kind == "e2lin":
            lines.append(f"{u} {v} {int(g.edge_payload[e])}")
        elif g.kind == "ulc":
            lines.append(f"{u} {v} " + " ".join(str(int(x)) for x in g.edge_payload[e]))
        else:
            lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.split("#", 1)[0].strip()
        if s:
            records.append((lineno, s.split()))
    if not records:
        raise GraphFormatError("line 1: missing header 'graph <n> <m> [kind]'")
    lineno, head = records[0]
    if head[0] != "graph" or len(head) < 3:
        raise GraphFormatError(f"line {lineno}: expected header 'graph <n> <m> [plain|e2lin <q>|ulc <q>]'")
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError:
        raise GraphFormatError(f"line {lineno}: n and m must be integers") from None
    kind, q = "plain", None
    if len(head) > 3:
        kind = head[3]
        if kind not in KINDS:
            raise GraphFormatError(f"line {lineno}: unknown kind {kind!r}")
        if kind != "plain":
            if len(head) != 5:
                raise GraphFormatError(f"line {lineno}: kind {kind} needs q")
            try:
                q = int(head[4])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: q must be an integer") from None
            if q < 1:
                raise GraphFormatError(f"line {lineno}: q must be >= 1")
    body = records[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (records[-1][0] + 1)
        raise GraphFormatError(f"line {where}: header declares {m} edges, found {len(body)}")
    want = {"plain": 2, "e2lin": 3, "ulc": 2 + (q or 0)}[kind]
    edges = np.empty((m, 2), dtype=np.int64)
    pay = []
    for i, (ln, tok) in enumerate(body):
        if len(tok) != want:
            raise GraphFormatError(f"line {ln}: expected {want} fields, got {len(tok)}")
        try:
            vals = [int(t) for t in tok]
        except ValueError:
            raise GraphFormatError(f"line {ln}: non-integer field") from None
        u, v = vals[0], vals[1]
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {ln}: vertex out of range 0..{n - 1}")
        edges[i] = (u, v)
        if kind == "e2lin":
            pay.append(vals[2] % q)
        elif kind == "ulc":
            perm = vals[2:]
            if sorted(perm) != list(range(q)):
                raise GraphFormatError(f"line {ln}: not a permutation of 0..{q - 1}")
            pay.append(perm)
    g = Graph(n, edges, kind=kind, q=q, edge_payload=(pay if kind != "plain" else None))
    if n and g.deg.min() < 1:
        v = int(np.argmin(g.deg))
        raise GraphFormatError(f"line {lineno}: vertex {v} has no incident edge")
    return g


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())


def write_graph(g: Graph, path):
    Path(path).write_text(format_graph(g))


# ----------------------------------------------------------------------
# verdicts


class Decision(str, enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"


@dataclass
class Verdict:
    decision: Decision
    diagnostics: dict = field(default_factory=dict)

    @property
    def accepted(self):
        return self.decision is Decision.ACCEPT

    def to_dict(self):
        return {"decision": self.decision.value, "diagnostics": self.diagnostics}


# ----------------------------------------------------------------------
# oracle


class GraphOracle:
    """Query access to a graph with an exact tally of every query.

    Vertices are 0..n-1.  ``n`` itself is part of the input (the algorithms
    are told the vertex count), everything else costs queries.
    """

    def __init__(self, graph: Graph, strict_sublinear=False, d_max=None):
        self.graph = graph
        self.strict_sublinear = strict_sublinear
        self.d_max = int(d_max) if d_max is not None else int(graph.deg.max())
        self._count = 0
        self._lock = threading.Lock()

    # accounting
    @property
    def query_count(self):
        return self._count

    def charge(self, k):
        """Record ``k`` queries made by a compiled kernel on this oracle's behalf."""
        if k < 0:
            raise ValueError("query charge must be non-negative")
        with self._lock:
            self._count += int(k)

    @property
    def n(self):
        return self.graph.n

    @property
    def q(self):
        return self.graph.q

    @property
    def kind(self):
        return self.graph.kind

    def _check_vertex(self, v):
        if not (0 <= v < self.graph.n):
            raise IndexError("invalid vertex")

    # the three query types
    def degree(self, v):
        self._check_vertex(v)
        self.charge(1)
        return int(self.graph.deg[v])

    def neighbor(self, v, i):
        self._check_vertex(v)
        d = self.graph.deg[v]
        if not (0 <= i < d):
            raise IndexError("index out of range")
        self.charge(1)
        slot = self.graph.offsets[v] + i
        u = int(self.graph.targets[slot])
        g = self.graph
        if g.kind == "e2lin":
            return u, int(g.payload[slot])
        if g.kind == "ulc":
            return u, tuple(int(x) for x in g.payload[slot])
        return u, None

    def sample_vertex(self, rng):
        """Vertex drawn with probability d(v)/mu."""
        g = self.graph
        if not self.strict_sublinear:
            self.charge(1)
            slot = int(rng.integers(0, g.volume))
            return int(np.searchsorted(g.offsets, slot, side="right") - 1)
        for _ in range(100000):
            v = int(rng.integers(0, g.n))
            if rng.random() * self.d_max < self.degree(v):
                return v
        raise RuntimeError("rejection sampler did not terminate")

    def sample_uniform_vertex(self, rng):
        self.charge(1)
        return int(rng.integers(0, self.graph.n))

    # batched variants, charged one query per item
    def degrees(self, vs):
        vs = np.asarray(vs, dtype=np.int64)
        if vs.size and (vs.min() < 0 or vs.max() >= self.graph.n):
            raise IndexError("invalid vertex")
        self.charge(vs.size)
        return self.graph.deg[vs]

    def sample_vertices(self, k, rng):
        if self.strict_sublinear:
            return np.array([self.sample_vertex(rng) for _ in range(k)], dtype=np.int64)
        self.charge(k)
        slots = rng.integers(0, self.graph.volume, size=k)
        return np.searchsorted(self.graph.offsets, slots, side="right") - 1

    def sample_uniform_vertices(self, k, rng):
        self.charge(k)
        return rng.integers(0, self.graph.n, size=k)

    # trusted compiled kernels read these arrays and charge() their queries
    def walk_spec(self):
        """(offsets, targets, kind code, offsets payload, perm payload, q)."""
        g = self.graph
        return g.offsets, g.targets, 0, _NO_OFF, _NO_PERM, 1

    def volume(self):
        """mu_G; known to the algorithm by assumption (stored degree array)."""
        return self.graph.volume
