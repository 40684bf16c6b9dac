"""Label-extended views of E2Lin and ULC instances.

Vertex (v, i) is encoded as v*q + i.  For E2Lin the payload on directed
v->u is c_vu with the constraint psi(v) - psi(u) = c_vu, and traversal maps
label i to i - c_vu, so every shifted planted section {(v, psi(v) + s)} is
closed.  For ULC the payload on v->u maps v's label to u's label.
"""
from __future__ import annotations

import numpy as np

from .errors import LimitExceeded, ParameterError
from .graph import Graph, GraphOracle

MATERIALIZE_LIMIT = 4096
_CODES = {"e2lin": 1, "ulc": 2}


def encode(v, i, q):
    return v * q + i


def decode(x, q):
    return x // q, x % q


class LabelExtendedOracle:
    """GraphOracle-compatible view; queries are charged to the base oracle."""

    def __init__(self, base: GraphOracle):
        g = base.graph
        if g.kind not in _CODES:
            raise ParameterError("label extension needs an e2lin or ulc instance")
        self.base = base
        self.q = g.q
        self.kind = g.kind
        self._code = _CODES[g.kind]
        self._materialized = None

    @property
    def n(self):
        return self.base.n * self.q

    @property
    def query_count(self):
        return self.base.query_count

    def charge(self, k):
        self.base.charge(k)

    def volume(self):
        return self.q * self.base.volume()

    def _step(self, lab, payload):
        if self._code == 1:
            return (lab - payload) % self.q
        return payload[lab]

    def _check(self, x):
        if not 0 <= x < self.n:
            raise IndexError("invalid vertex")

    def degree(self, x):
        self._check(x)
        return self.base.degree(x // self.q)

    def neighbor(self, x, j):
        self._check(x)
        v, lab = decode(x, self.q)
        u, payload = self.base.neighbor(v, j)
        return encode(u, self._step(lab, payload), self.q), None

    def sample_vertex(self, rng):
        return encode(self.base.sample_vertex(rng), int(rng.integers(0, self.q)), self.q)

    def sample_vertices(self, k, rng):
        vs = self.base.sample_vertices(k, rng)
        return vs * self.q + rng.integers(0, self.q, size=k)

    def sample_uniform_vertex(self, rng):
        return encode(self.base.sample_uniform_vertex(rng), int(rng.integers(0, self.q)), self.q)

    def sample_uniform_vertices(self, k, rng):
        return self.base.sample_uniform_vertices(k, rng) * self.q + rng.integers(0, self.q, size=k)

    def degrees(self, xs):
        xs = np.asarray(xs, dtype=np.int64)
        if xs.size and (xs.min() < 0 or xs.max() >= self.n):
            raise IndexError("invalid vertex")
        return self.base.degrees(xs // self.q)

    def walk_spec(self):
        g = self.base.graph
        if self._code == 1:
            return g.offsets, g.targets, 1, g.payload, np.zeros((1, 1), dtype=np.int64), self.q
        return g.offsets, g.targets, 2, np.zeros(1, dtype=np.int64), g.payload, self.q

    @property
    def graph(self):
        """The extension as an explicit Graph (no queries charged)."""
        if self._materialized is None:
            self._materialized = materialize_extension(self.base.graph)
        return self._materialized


def extend_e2lin(oracle: GraphOracle):
    if oracle.graph.kind != "e2lin":
        raise ParameterError("expected an e2lin instance")
    return LabelExtendedOracle(oracle)


def extend_ulc(oracle: GraphOracle):
    if oracle.graph.kind != "ulc":
        raise ParameterError("expected a ulc instance")
    return LabelExtendedOracle(oracle)


def materialize_extension(g: Graph, limit=MATERIALIZE_LIMIT):
    if g.kind not in _CODES:
        raise ParameterError("label extension needs an e2lin or ulc instance")
    q = g.q
    if g.n * q > limit:
        raise LimitExceeded(f"extension has {g.n * q} vertices, over the limit {limit}")
    labels = np.arange(q)
    u = np.repeat(g.edge_u, q)
    v = np.repeat(g.edge_v, q)
    i = np.tile(labels, g.m)
    if g.kind == "e2lin":
        j = (i - np.repeat(g.edge_payload, q)) % q
    else:
        j = g.edge_payload[np.repeat(np.arange(g.m), q), i]
    return Graph(g.n * q, np.stack([u * q + i, v * q + j], axis=1))


def planted_sections(psi, q):
    """The q shifted sections {(v, psi(v) + s)} as boolean masks (E2Lin)."""
    psi = np.asarray(psi)
    n = len(psi)
    out = []
    for s in range(q):
        mask = np.zeros(n * q, dtype=bool)
        mask[np.arange(n) * q + (psi + s) % q] = True
        out.append(mask)
    return out


def assignment_section(psi, q):
    """{(v, psi(v))} as a boolean mask (ULC)."""
    psi = np.asarray(psi)
    mask = np.zeros(len(psi) * q, dtype=bool)
    mask[np.arange(len(psi)) * q + psi] = True
    return mask
