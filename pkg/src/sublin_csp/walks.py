"""Lazy random walks with hop-parity tracking.

``lazy_walk`` and ``sample_parity_conditioned`` go through the oracle one
query at a time.  ``walk_batch`` runs many walks in a compiled kernel that
reads the oracle's arrays directly and charges the same number of queries
(one degree plus one neighbour query per non-lazy move).
"""
from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

from .errors import SamplingError
from .rng import kernel_seed

PARITY_CAP = 200


@dataclass(frozen=True)
class WalkOutcome:
    endpoint: int
    hop_parity: int  # 0 even, 1 odd
    steps_taken: int

    @property
    def even(self):
        return self.hop_parity == 0


def _parity_code(parity):
    if parity in (0, "even", "e"):
        return 0
    if parity in (1, "odd", "o"):
        return 1
    raise ValueError(f"parity must be even or odd, got {parity!r}")


def lazy_walk(oracle, v, length, rng):
    if length < 0:
        raise ValueError("walk length must be >= 0")
    x, hops = int(v), 0
    for _ in range(length):
        if rng.random() < 0.5:
            continue
        d = oracle.degree(x)
        x, _ = oracle.neighbor(x, int(rng.integers(0, d)))
        hops += 1
    return WalkOutcome(x, hops & 1, length)


def sample_parity_conditioned(oracle, v, length, parity, rng):
    if length < 1:
        raise ValueError("parity conditioning needs length >= 1")
    want = _parity_code(parity)
    for _ in range(PARITY_CAP):
        w = lazy_walk(oracle, v, length, rng)
        if w.hop_parity == want:
            return w.endpoint
    raise SamplingError("parity-conditioned sampler exceeded its attempt cap")


@nb.njit(cache=True)
def _walk_kernel(offsets, targets, kind, off, perm, q, starts, length, seed):
    np.random.seed(seed)
    count = starts.shape[0]
    ends = np.empty(count, dtype=np.int64)
    par = np.empty(count, dtype=np.int8)
    moves = 0
    for w in range(count):
        x = starts[w]
        # lazy steps never move the walker, so only the number of real
        # moves matters; it is Binomial(length, 1/2)
        h = np.random.binomial(length, 0.5)
        for _ in range(h):
            if kind == 0:
                b = x
                lab = 0
            else:
                b = x // q
                lab = x % q
            lo = offsets[b]
            d = offsets[b + 1] - lo
            j = int(np.random.random() * d)
            if j >= d:
                j = d - 1
            s = lo + j
            u = targets[s]
            if kind == 0:
                x = u
            elif kind == 1:
                x = u * q + ((lab - off[s]) % q + q) % q
            else:
                x = u * q + perm[s, lab]
        moves += h
        ends[w] = x
        par[w] = h & 1
    return ends, par, moves


def walk_batch(oracle, starts, length, rng):
    """Run one lazy walk from each start; returns (endpoints, parities)."""
    starts = np.ascontiguousarray(starts, dtype=np.int64)
    if length < 0:
        raise ValueError("walk length must be >= 0")
    offsets, targets, kind, off, perm, q = oracle.walk_spec()
    ends, par, moves = _walk_kernel(offsets, targets, kind, off, perm, q, starts, int(length),
                                    kernel_seed(rng))
    oracle.charge(2 * int(moves))
    return ends, par


class ParityWalkSampler:
    """Draws from the two parity-conditioned endpoint laws of one start vertex.

    Walks are generated in batches; every endpoint lands in the pool of its
    parity and is handed out at most once, so both pools stay i.i.d.
    """

    def __init__(self, oracle, v, length, rng):
        if length < 1:
            raise ValueError("parity conditioning needs length >= 1")
        self.oracle = oracle
        self.v = int(v)
        self.length = int(length)
        self.rng = rng
        self.pools = {0: [], 1: []}
        self.walks = 0

    def _refill(self, want, k):
        have = sum(len(c) for c in self.pools[want])
        while have < k:
            need = k - have
            batch = max(64, int(2.2 * need) + 16)
            ends, par = walk_batch(self.oracle, np.full(batch, self.v, dtype=np.int64),
                                   self.length, self.rng)
            self.walks += batch
            for p in (0, 1):
                sel = ends[par == p]
                if sel.size:
                    self.pools[p].append(sel)
            have = sum(len(c) for c in self.pools[want])

    def sample(self, parity, k):
        p = _parity_code(parity)
        if k <= 0:
            return np.empty(0, dtype=np.int64)
        self._refill(p, k)
        pool = np.concatenate(self.pools[p])
        out, rest = pool[:k], pool[k:]
        self.pools[p] = [rest] if rest.size else []
        return out

    def sampler(self, parity):
        """A callable k -> k i.i.d. draws, the form the distance tester expects."""
        p = _parity_code(parity)
        return lambda k: self.sample(p, k)
