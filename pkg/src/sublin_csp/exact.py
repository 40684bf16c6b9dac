"""Ground-truth computations for small graphs.

Everything here is exact (enumeration) or numerically exact to ~1e-9
(dense eigensolvers).  Limits are module constants; going past one raises
LimitExceeded instead of silently approximating.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb
import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph
from scipy.sparse.linalg import eigsh

from .errors import LimitExceeded, ParameterError
from .graph import Graph

DENSE_LIMIT = 4096
JACOBI_LIMIT = 256
CONDUCTANCE_LIMIT = 24
RHO_LIMIT = 12
BETA_LIMIT = 13
MAXCUT_LIMIT = 24
OPT_LIMIT = 10**7
DUAL_CHEEGER_LIMIT = 10
COLOR_LIMIT = 2000
SAT_LIMIT = 20


def _limit(what, n, lim):
    if n > lim:
        raise LimitExceeded(f"{what}: n={n} exceeds brute-force limit {lim}")


# ----------------------------------------------------------------------
# matrices


def adjacency(g: Graph, sparse=False):
    # a self-loop contributes 2 to both A[v, v] and d(v)
    rows = np.concatenate([g.edge_u, g.edge_v])
    cols = np.concatenate([g.edge_v, g.edge_u])
    A = sp.coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n)).tocsr()
    A.sum_duplicates()
    return A if sparse else A.toarray()


def is_connected(g: Graph):
    ncomp, _ = csgraph.connected_components(adjacency(g, sparse=True), directed=False)
    return ncomp == 1


def component_labels(g: Graph):
    return csgraph.connected_components(adjacency(g, sparse=True), directed=False)


def transition_matrix(g: Graph):
    """Sparse P = D^-1 A."""
    A = adjacency(g, sparse=True)
    return sp.diags(1.0 / g.deg) @ A


def normalized_laplacian(g: Graph, check_connected=True):
    _limit("normalized_laplacian", g.n, DENSE_LIMIT)
    if check_connected and not is_connected(g):
        raise ParameterError("graph is disconnected")
    A = adjacency(g)
    s = 1.0 / np.sqrt(g.deg)
    return np.eye(g.n) - s[:, None] * A * s[None, :]


@nb.njit(cache=True)
def _jacobi_eigenvalues(M, tol):
    A = M.copy()
    n = A.shape[0]
    for sweep in range(100):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += A[i, j] * A[i, j]
        if math.sqrt(off) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
    out = np.empty(n)
    for i in range(n):
        out[i] = A[i, i]
    return np.sort(out)


@dataclass
class SpectralProfile:
    eigenvalues: np.ndarray
    tolerance: float
    method: str = "jacobi"

    def lam(self, k):
        """k-th smallest eigenvalue, 1-indexed."""
        return float(self.eigenvalues[k - 1])

    @property
    def lambda2(self):
        return self.lam(2)

    @property
    def lambda_max(self):
        return float(self.eigenvalues[-1])

    @property
    def phi_lower(self):
        return self.lambda2 / 2

    def to_dict(self):
        return {"lambda2": self.lambda2, "lambda_max": self.lambda_max, "n": len(self.eigenvalues),
                "tolerance": self.tolerance, "method": self.method}


def eigenvalues_symmetric(M, tol=1e-12, method="auto"):
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ParameterError("matrix must be square")
    if M.size and np.max(np.abs(M - M.T)) > 1e-12:
        raise ParameterError("matrix is not symmetric")
    n = M.shape[0]
    if method == "auto":
        method = "jacobi" if n <= JACOBI_LIMIT else "lapack"
    if method == "jacobi":
        ev = _jacobi_eigenvalues(M, tol)
    elif method == "lapack":
        ev = np.linalg.eigvalsh(M)
    else:
        raise ParameterError(f"unknown eigensolver {method!r}")
    return SpectralProfile(ev, 1e-9, method)


def spectral_profile(g: Graph, method="auto", check_connected=True):
    return eigenvalues_symmetric(normalized_laplacian(g, check_connected), method=method)


def spectral_extremes(g: Graph, k=2):
    """(lambda_2 .. lambda_k, lambda_max) without a dense solve.

    Uses ARPACK on the shifted operator so it scales past the dense limit;
    accuracy is ~1e-8, fine for certificates with slack.
    """
    if g.n <= 1024:
        prof = spectral_profile(g)
        return prof.eigenvalues[1:k], prof.lambda_max
    if not is_connected(g):
        raise ParameterError("graph is disconnected")
    A = adjacency(g, sparse=True)
    s = sp.diags(1.0 / np.sqrt(g.deg))
    N = s @ A @ s  # eigenvalues 1 - lambda
    top = eigsh(N, k=k, which="LA", tol=1e-10, return_eigenvectors=False)
    bottom = eigsh(N, k=1, which="SA", tol=1e-10, return_eigenvectors=False)
    lams = np.sort(1.0 - top)
    return lams[1:k], float(1.0 - bottom[0])


# ----------------------------------------------------------------------
# walk distributions


def _start(g, v):
    if not 0 <= v < g.n:
        raise IndexError("invalid vertex")
    x = np.zeros(g.n)
    x[v] = 1.0
    return x


def exact_walk_distributions(g: Graph, v: int, t: int):
    """Lazy-walk endpoint law after t steps split by hop parity."""
    P = transition_matrix(g).T.tocsr()
    pe, po = _start(g, v), np.zeros(g.n)
    for _ in range(t):
        me, mo = P @ pe, P @ po
        pe, po = 0.5 * pe + 0.5 * mo, 0.5 * po + 0.5 * me
    return pe, po


def exact_signed_measure(g: Graph, v: int, t: int):
    """1_v M^t for M = (I - D^-1 A)/2."""
    P = transition_matrix(g).T.tocsr()
    x = _start(g, v)
    for _ in range(t):
        x = 0.5 * (x - P @ x)
    return x


def exact_delta(g: Graph, v: int, t: int):
    x = exact_signed_measure(g, v, t)
    return float(np.sum(x * x / g.deg))


def exact_delta_all(g: Graph, t: int):
    """Delta_t(v) for every start vertex at once (dense, n <= DENSE_LIMIT)."""
    _limit("exact_delta_all", g.n, DENSE_LIMIT)
    P = transition_matrix(g).tocsr()
    X = np.eye(g.n)
    for _ in range(t):
        X = 0.5 * (X - (P.T @ X.T).T)
    return (X * X / g.deg[None, :]).sum(axis=1)


def walk_norms_all(g: Graph, t_max: int, starts):
    """||p_v^t D^-1/2||^2 for t = 0..t_max, one row per start vertex."""
    PT = transition_matrix(g).T.tocsr()
    X = np.zeros((g.n, len(starts)))
    X[np.asarray(starts), np.arange(len(starts))] = 1.0
    out = np.empty((t_max + 1, len(starts)))
    for t in range(t_max + 1):
        out[t] = (X * X / g.deg[:, None]).sum(axis=0)
        X = 0.5 * X + 0.5 * (PT @ X)
    return out


# ----------------------------------------------------------------------
# subset enumeration kernels


@nb.njit(cache=True)
def _gray_conductance(n, offsets, targets, deg, vol_cap):
    in_s = np.zeros(n, dtype=np.bool_)
    vol = 0
    cut = 0
    total = 0
    for v in range(n):
        total += deg[v]
    best = np.inf
    best_mask = 0
    mask = 0
    for i in range(1, 1 << n):
        v = 0
        x = i
        while (x & 1) == 0:
            x >>= 1
            v += 1
        if in_s[v]:
            in_s[v] = False
            vol -= deg[v]
            for s in range(offsets[v], offsets[v + 1]):
                u = targets[s]
                if u != v:
                    cut += 1 if in_s[u] else -1
        else:
            in_s[v] = True
            vol += deg[v]
            for s in range(offsets[v], offsets[v + 1]):
                u = targets[s]
                if u != v:
                    cut += -1 if in_s[u] else 1
        mask ^= 1 << v
        if vol > 0 and vol < total and vol <= vol_cap:
            val = cut / vol
            if val < best:
                best = val
                best_mask = mask
    return best, best_mask


def exact_conductance_profile(g: Graph, k: int = 2, return_set=False):
    """min conductance over nonempty proper S with vol(S) <= vol(G)/k."""
    _limit("exact_conductance_profile", g.n, CONDUCTANCE_LIMIT)
    if k < 1:
        raise ParameterError("k must be >= 1")
    cap = g.volume / k
    best, mask = _gray_conductance(g.n, g.offsets, g.targets, g.deg, cap)
    if not np.isfinite(best):
        best = math.inf
    if return_set:
        return float(best), np.array([(mask >> v) & 1 for v in range(g.n)], dtype=bool)
    return float(best)


def exact_conductance(g: Graph):
    return exact_conductance_profile(g, 2)


def set_conductance(g: Graph, members):
    s = np.zeros(g.n, dtype=bool)
    s[np.asarray(members)] = True
    vol = g.deg[s].sum()
    cut = np.count_nonzero(s[g.edge_u] != s[g.edge_v])
    return cut / vol if vol else math.inf


def _all_subset_conductances(g: Graph):
    n = g.n
    masks = np.arange(1, 1 << n, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    vol = bits.astype(np.int64) @ g.deg
    cut = (bits[:, g.edge_u] != bits[:, g.edge_v]).sum(axis=1)
    return masks, cut / vol


def _pack(cands, k):
    """Search k pairwise disjoint masks among cands (depth-first)."""
    cands = sorted(cands, key=lambda m: bin(m).count("1"))

    def go(start, used, left):
        if left == 0:
            return []
        for i in range(start, len(cands)):
            c = cands[i]
            if c & used == 0:
                rest = go(i + 1, used | c, left - 1)
                if rest is not None:
                    return [c] + rest
        return None

    return go(0, 0, k)


def exact_rho(g: Graph, k: int, return_sets=False):
    """k-way constant: min over disjoint nonempty S_1..S_k of max phi(S_i).

    Threshold search over the distinct conductance values; at each threshold
    only inclusion-minimal qualifying sets matter for a disjoint packing.
    """
    _limit("exact_rho", g.n, RHO_LIMIT)
    if not 1 <= k <= g.n:
        raise ParameterError("need 1 <= k <= n")
    masks, phis = _all_subset_conductances(g)
    values = np.unique(phis)

    def feasible(tau):
        sel = [int(m) for m in masks[phis <= tau]]
        minimal = []
        for m in sorted(sel, key=lambda m: bin(m).count("1")):
            if not any((s & m) == s for s in minimal):
                minimal.append(m)
        return _pack(minimal, k)

    lo, hi = 0, len(values) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(values[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    val = float(values[lo])
    if return_sets:
        packed = feasible(values[lo])
        return val, [np.array([(m >> v) & 1 for v in range(g.n)], dtype=bool) for m in packed]
    return val


@nb.njit(cache=True)
def _ternary_scan(n, eu, ev, deg, mode):
    # mode 0: bipartiteness ratio (min); mode 1: dual Cheeger h(2) (max)
    side = np.zeros(n, dtype=np.int64)  # 0 out, 1 L, 2 R
    best = np.inf if mode == 0 else -np.inf
    best_code = 0
    total = 1
    for _ in range(n):
        total *= 3
    for code in range(1, total):
        x = code
        for v in range(n):
            side[v] = x % 3
            x //= 3
        vol = 0
        has_l = False
        has_r = False
        for v in range(n):
            if side[v] != 0:
                vol += deg[v]
            if side[v] == 1:
                has_l = True
            elif side[v] == 2:
                has_r = True
        if vol == 0:
            continue
        num = 0
        for e in range(eu.shape[0]):
            a = side[eu[e]]
            b = side[ev[e]]
            if mode == 0:
                if a != 0 and a == b:
                    num += 2
                elif (a == 0) != (b == 0):
                    num += 1
            else:
                if a != 0 and b != 0 and a != b:
                    num += 2
        if mode == 1 and not (has_l and has_r):
            continue
        val = num / vol
        if (mode == 0 and val < best) or (mode == 1 and val > best):
            best = val
            best_code = code
    return best, best_code


def exact_bipartiteness_ratio(g: Graph, return_sides=False):
    """beta = min over disjoint (L, R), L u R nonempty, including L u R = V."""
    _limit("exact_bipartiteness_ratio", g.n, BETA_LIMIT)
    best, code = _ternary_scan(g.n, g.edge_u, g.edge_v, g.deg, 0)
    if return_sides:
        side = np.array([(code // 3**v) % 3 for v in range(g.n)])
        return float(best), side
    return float(best)


def exact_dual_cheeger2(g: Graph):
    """max over disjoint nonempty V1, V2 of 2 e(V1, V2) / vol(V1 u V2)."""
    _limit("exact_dual_cheeger2", g.n, DUAL_CHEEGER_LIMIT)
    best, _ = _ternary_scan(g.n, g.edge_u, g.edge_v, g.deg, 1)
    return float(best)


@nb.njit(cache=True)
def _gray_maxcut(n, offsets, targets):
    in_s = np.zeros(n, dtype=np.bool_)
    cut = 0
    best = 0
    best_mask = 0
    mask = 0
    # vertex n-1 stays on side 0 (cut is symmetric)
    for i in range(1, 1 << (n - 1)):
        v = 0
        x = i
        while (x & 1) == 0:
            x >>= 1
            v += 1
        delta = 0
        for s in range(offsets[v], offsets[v + 1]):
            u = targets[s]
            if u != v:
                delta += 1 if in_s[u] == in_s[v] else -1
        in_s[v] = not in_s[v]
        cut += delta
        mask ^= 1 << v
        if cut > best:
            best = cut
            best_mask = mask
    return best, best_mask


def exact_maxcut(g: Graph, return_cut=False):
    _limit("exact_maxcut", g.n, MAXCUT_LIMIT)
    if g.m == 0:
        raise ParameterError("graph has no edges")
    best, mask = _gray_maxcut(g.n, g.offsets, g.targets)
    frac = best / g.m
    if return_cut:
        return frac, np.array([(mask >> v) & 1 for v in range(g.n)], dtype=np.int64)
    return frac


# ----------------------------------------------------------------------
# CSP optima


@nb.njit(cache=True)
def _sat_at(v, psi, q, offsets, targets, kind, off_pay, perm_pay):
    # doubled count of satisfied constraints incident to v (loops count once)
    s2 = 0
    for s in range(offsets[v], offsets[v + 1]):
        u = targets[s]
        if kind == 1:
            ok = (psi[v] - psi[u] - off_pay[s]) % q == 0
        else:
            ok = perm_pay[s, psi[v]] == psi[u]
        if ok:
            s2 += 1 if u == v else 2
    return s2


@nb.njit(cache=True)
def _odometer_opt(n, q, offsets, targets, kind, off_pay, perm_pay):
    # kind 1: e2lin, half-edge v->u satisfied iff psi(v) - psi(u) == c_vu
    # kind 2: ulc, half-edge v->u satisfied iff perm[psi(v)] == psi(u)
    psi = np.zeros(n, dtype=np.int64)
    # cur2 holds four times the satisfied count
    cur2 = 0
    for v in range(n):
        for s in range(offsets[v], offsets[v + 1]):
            if kind == 1:
                ok = (psi[v] - psi[targets[s]] - off_pay[s]) % q == 0
            else:
                ok = perm_pay[s, psi[v]] == psi[targets[s]]
            if ok:
                cur2 += 2
    best2 = cur2
    best_psi = psi.copy()
    while True:
        v = 0
        while v < n:
            before = _sat_at(v, psi, q, offsets, targets, kind, off_pay, perm_pay)
            psi[v] += 1
            wrapped = psi[v] == q
            if wrapped:
                psi[v] = 0
            # edges at v are seen from v and from the other end
            cur2 += 2 * (_sat_at(v, psi, q, offsets, targets, kind, off_pay, perm_pay) - before)
            if not wrapped:
                break
            v += 1
        if v == n:
            break
        if cur2 > best2:
            best2 = cur2
            best_psi = psi.copy()
    return best2 // 4, best_psi


def _opt(g: Graph, kind_code):
    if g.q ** g.n > OPT_LIMIT:
        raise LimitExceeded(f"q^n = {g.q}^{g.n} exceeds brute-force limit {OPT_LIMIT}")
    if kind_code == 1:
        off = g.payload.astype(np.int64)
        perm = np.zeros((1, 1), dtype=np.int64)
    else:
        off = np.zeros(1, dtype=np.int64)
        perm = g.payload.astype(np.int64)
    best, psi = _odometer_opt(g.n, g.q, g.offsets, g.targets, kind_code, off, perm)
    return best / g.m, psi


def exact_opt_e2lin(g: Graph, return_assignment=False):
    if g.kind != "e2lin":
        raise ParameterError("expected an e2lin instance")
    val, psi = _opt(g, 1)
    return (val, psi) if return_assignment else val


def exact_opt_ulc(g: Graph, return_assignment=False):
    if g.kind != "ulc":
        raise ParameterError("expected a ulc instance")
    val, psi = _opt(g, 2)
    return (val, psi) if return_assignment else val


def count_satisfied(g: Graph, psi):
    psi = np.asarray(psi, dtype=np.int64)
    if g.kind == "e2lin":
        return int(np.count_nonzero((psi[g.edge_u] - psi[g.edge_v] - g.edge_payload) % g.q == 0))
    if g.kind == "ulc":
        img = g.edge_payload[np.arange(g.m), psi[g.edge_u]]
        return int(np.count_nonzero(img == psi[g.edge_v]))
    return int(np.count_nonzero(psi[g.edge_u] != psi[g.edge_v]))


# ----------------------------------------------------------------------
# colouring and SAT


def exact_3colorable(g: Graph, return_coloring=False):
    """Backtracking with DSATUR ordering and singleton propagation."""
    _limit("exact_3colorable", g.n, COLOR_LIMIT)
    n = g.n
    adj = [set(int(u) for u in g.neighbors(v)) for v in range(n)]
    if any(v in adj[v] for v in range(n)):
        return (False, None) if return_coloring else False
    full = 0b111

    def propagate(dom, stack):
        # singleton domains are removed from neighbours; two adjacent vertices
        # sharing the same 2-colour domain exclude both colours from every
        # common neighbour (this is what makes equality gadgets propagate)
        while stack:
            v = stack.pop()
            c = dom[v]
            if c & (c - 1) == 0:
                for u in adj[v]:
                    if dom[u] & c:
                        dom[u] &= ~c
                        if dom[u] == 0:
                            return False
                        stack.append(u)
            else:
                if c == full:
                    continue
                for u in adj[v]:
                    if dom[u] != c:
                        continue
                    for w in adj[v] & adj[u]:
                        if dom[w] & c:
                            dom[w] &= ~c
                            if dom[w] == 0:
                                return False
                            stack.append(w)
        return True

    def solve(dom):
        best, best_key = -1, None
        for v in range(n):
            d = dom[v]
            if d & (d - 1):
                key = (bin(d).count("1"), -len(adj[v]))
                if best_key is None or key < best_key:
                    best, best_key = v, key
        if best < 0:
            return dom
        for c in (1, 2, 4):
            if dom[best] & c:
                nd = list(dom)
                nd[best] = c
                if propagate(nd, [best]):
                    res = solve(nd)
                    if res is not None:
                        return res
        return None

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * n + 100))
    try:
        dom = [full] * n
        res = None
        if n == 0:
            res = dom
        else:
            # colour symmetry: fix the first vertex
            dom[0] = 1
            if propagate(dom, [0]):
                res = solve(dom)
    finally:
        sys.setrecursionlimit(old)
    ok = res is not None
    if return_coloring:
        col = None if res is None else np.array([{1: 0, 2: 1, 4: 2}[d] for d in res])
        return ok, col
    return ok


def is_proper_coloring(g: Graph, col):
    col = np.asarray(col)
    return bool(np.all(col[g.edge_u] != col[g.edge_v]))


def sat_brute(cnf):
    """cnf: (n_vars, clauses) where literals are +-(1-based var)."""
    n_vars, clauses = cnf
    _limit("sat_brute", n_vars, SAT_LIMIT)
    if n_vars == 0:
        return len(clauses) == 0
    assign = ((np.arange(1 << n_vars)[:, None] >> np.arange(n_vars)) & 1).astype(bool)
    alive = np.ones(1 << n_vars, dtype=bool)
    for clause in clauses:
        sat = np.zeros_like(alive)
        for lit in clause:
            col = assign[:, abs(lit) - 1]
            sat |= col if lit > 0 else ~col
        alive &= sat
        if not alive.any():
            return False
    return bool(alive.any())
