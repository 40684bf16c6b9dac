"""Unique Label Cover on expanders.

A nearly satisfiable instance has a label-extended graph containing a set of
volume mu/q with tiny outer conductance: the graph of a good assignment.  The
driver looks for such a set among the parts of a clustering oracle and
measures its outer conductance by sampling.

The clustering oracle here is a spectral reference implementation that
reads the whole extension.  Everything downstream of ``ClusteringOracle``
only uses membership queries, so a sublinear oracle can be plugged in.

The asymptotic constants of the method are astronomically small or large at
any size that fits in memory, so every one of them is a named multiplier.
Multipliers are stored as base-10 logarithms and combined with the formula
shapes in log space.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import defaults, exact
from .errors import LimitExceeded, ParameterError
from .graph import Decision, Graph, Verdict
from .label_extended import MATERIALIZE_LIMIT, extend_ulc
from .rng import RngTree

LN10 = math.log(10.0)
LLOYD_ROUNDS = 20
ORACLE_SEED = 20240601


# ----------------------------------------------------------------------
# the f(r) staircase


def log_f_schedule(r, q, eps, phi):
    """Natural log of f(r) = (eps/(2 q^20))^(4^(2-r)) * q^(100-40r) * phi^((r-2)/(q-1))."""
    if q < 2:
        raise ParameterError("q must be >= 2")
    if not 2 <= r <= q + 1:
        raise ParameterError(f"r must lie in [2, {q + 1}], got {r}")
    if not (eps >= 0 and phi > 0):
        raise ParameterError("need eps >= 0 and phi > 0")
    if eps == 0:
        return -math.inf
    lq = math.log(q)
    base = math.log(eps / 2.0) - 20 * lq
    return 4.0 ** (2 - r) * base + (100 - 40 * r) * lq + (r - 2) / (q - 1) * math.log(phi)


def f_schedule(r, q, eps, phi):
    """f(r) as a float; 0.0 when it underflows (use ``log_f_schedule``)."""
    if r == 2:
        log_f_schedule(r, q, eps, phi)  # range checks
        return eps / 2.0
    lv = log_f_schedule(r, q, eps, phi)
    return math.exp(lv) if lv > -745.0 else 0.0


def log_alpha_beta(r, q, eps, phi):
    """(ln alpha, ln beta) with alpha = f(r+1)/(30r) and beta = r f(r)."""
    la = log_f_schedule(r + 1, q, eps, phi) - math.log(30 * r)
    lb = math.log(r) + log_f_schedule(r, q, eps, phi)
    return la, lb


# ----------------------------------------------------------------------
# configuration


@dataclass
class UlcConfig:
    q: int
    d: int
    phi: float
    eps: float
    rho: float
    # log10 multipliers in front of each asymptotic shape
    log10_c_xi: float = defaults.ULC["log10_c_xi"]  # xi = c * beta q^10 / alpha^3
    log10_c_xi0: float = defaults.ULC["log10_c_xi0"]  # xi0 = c * q^50 eps^(4^(1-r)) / phi^((2r-1)/(q-1))
    log10_c_thr: float = defaults.ULC["log10_c_thr"]  # threshold, same shape with q^(85q)
    log10_c_outer: float = defaults.ULC["log10_c_outer"]  # outer samples = c * alpha^2 q d ln n / beta
    c_volume: float = defaults.ULC["c_volume"]  # |T| = c * d q ln n / xi0^2
    c_members: float = defaults.ULC["c_members"]  # s = c * d q ln n
    log10_c_eps: float = defaults.ULC["log10_c_eps"]  # eps <= c (phi^2 / q^100)^(4^(q-1))
    log10_c_rho: float = defaults.ULC["log10_c_rho"]  # rho >= c q^(86q) eps^(4^(1-q)) / phi^4
    max_samples: int = defaults.ULC["max_samples"]
    oracle: str = "exact-ref"
    extras: dict = field(default_factory=dict)

    def validate(self):
        if self.q < 2:
            raise ParameterError("q must be >= 2")
        if self.d < 1:
            raise ParameterError("d must be >= 1")
        for name in ("phi", "eps", "rho"):
            if not 0 < getattr(self, name) < 1:
                raise ParameterError(f"{name} must lie in (0, 1)")
        if self.oracle != "exact-ref":
            raise ParameterError("only the exact-ref clustering oracle is available")
        q, lq = self.q, math.log(self.q)
        log_eps_cap = self.log10_c_eps * LN10 + 4.0 ** (q - 1) * (2 * math.log(self.phi) - 100 * lq)
        if math.log(self.eps) > log_eps_cap:
            raise ParameterError(
                f"infeasible: eps={self.eps} above the hypothesis cap 10^{log_eps_cap / LN10:.4g}")
        log_rho_floor = (self.log10_c_rho * LN10 + 86 * q * lq
                         + 4.0 ** (1 - q) * math.log(self.eps) - 4 * math.log(self.phi))
        if math.log(self.rho) < log_rho_floor:
            raise ParameterError(
                f"infeasible: rho={self.rho} below the hypothesis floor 10^{log_rho_floor / LN10:.4g}")
        return self

    def to_dict(self):
        return asdict(self)

    # derived quantities, all in log space until the end
    def _log_xi0_shape(self, r):
        q = self.q
        return 50 * math.log(q) + 4.0 ** (1 - r) * math.log(self.eps) \
            - (2 * r - 1) / (q - 1) * math.log(self.phi)

    def xi0(self):
        # the formula names r outside the loop; r = q is the most conservative
        return math.exp(self.log10_c_xi0 * LN10 + self._log_xi0_shape(self.q))

    def alpha_beta(self, r):
        la, lb = log_alpha_beta(r, self.q, self.eps, self.phi)
        return la, lb

    def xi(self, r):
        la, lb = self.alpha_beta(r)
        return math.exp(min(700.0, self.log10_c_xi * LN10 + lb + 10 * math.log(self.q) - 3 * la))

    def threshold(self, r):
        lv = self.log10_c_thr * LN10 + 85 * self.q * math.log(self.q) + self._log_xi0_shape(r) \
            - 50 * math.log(self.q)
        return math.exp(min(700.0, lv))

    def _cap(self, x):
        return int(min(self.max_samples, max(1, math.ceil(x))))

    def volume_samples(self, n):
        return self._cap(self.c_volume * self.d * self.q * math.log(n) / self.xi0() ** 2)

    def member_samples(self, n):
        return self._cap(self.c_members * self.d * self.q * math.log(n))

    def outer_samples(self, r, n_ext):
        la, lb = self.alpha_beta(r)
        lv = self.log10_c_outer * LN10 + 2 * la - lb + math.log(self.q * self.d * math.log(n_ext))
        return self._cap(math.exp(min(700.0, lv)))

    def schedule(self, n):
        """Every derived constant, for manifests."""
        rows = []
        n_ext = n * self.q
        for r in range(2, self.q + 1):
            la, lb = self.alpha_beta(r)
            rows.append({"r": r, "log10_alpha": la / LN10, "log10_beta": lb / LN10,
                         "xi": self.xi(r), "threshold": self.threshold(r),
                         "outer_samples": self.outer_samples(r, n_ext)})
        return {"xi0": self.xi0(), "volume_samples": self.volume_samples(n),
                "member_samples": self.member_samples(n), "per_r": rows}


# ----------------------------------------------------------------------
# clustering oracles


class ClusteringOracle:
    """Consistent membership queries into an r-part partition."""

    def __init__(self, labels, r, alpha=None, beta=None, q=None, report=None):
        self._labels = np.asarray(labels, dtype=np.int64)
        self.r = int(r)
        self.alpha = alpha
        self.beta = beta
        self.q = q
        self.report = report or {}
        self.membership_queries = 0

    @property
    def n(self):
        return len(self._labels)

    def __call__(self, x):
        self.membership_queries += 1
        return int(self._labels[x])

    def members(self, xs):
        xs = np.asarray(xs, dtype=np.int64)
        self.membership_queries += xs.size
        return self._labels[xs]

    def parts(self):
        return [np.flatnonzero(self._labels == i) for i in range(self.r)]


def _lloyd(points, weights, r, rng, rounds=LLOYD_ROUNDS):
    n = len(points)
    # farthest-point seeding from a random start
    centers = [points[int(rng.integers(0, n))]]
    dist = np.sum((points - centers[0]) ** 2, axis=1)
    for _ in range(1, r):
        centers.append(points[int(np.argmax(dist))])
        dist = np.minimum(dist, np.sum((points - centers[-1]) ** 2, axis=1))
    centers = np.array(centers)
    labels = np.zeros(n, dtype=np.int64)
    for _ in range(rounds):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new = np.argmin(d2, axis=1)
        if np.array_equal(new, labels) and _ > 0:
            break
        labels = new
        for i in range(r):
            sel = labels == i
            if sel.any():
                w = weights[sel]
                centers[i] = (points[sel] * w[:, None]).sum(axis=0) / w.sum()
    return labels


def part_report(g: Graph, labels, r, exact_limit=exact.CONDUCTANCE_LIMIT):
    """Per-part volume, outer conductance (edge scan) and inner conductance
    (exact when small, lambda_2/2 lower bound otherwise)."""
    out = []
    mu = g.volume
    cross = labels[g.edge_u] != labels[g.edge_v]
    for i in range(r):
        members = np.flatnonzero(labels == i)
        vol = int(g.deg[members].sum())
        e_out = int(np.count_nonzero(cross & ((labels[g.edge_u] == i) | (labels[g.edge_v] == i))))
        outer = e_out / min(vol, mu - vol) if 0 < vol < mu else 0.0
        rec = {"part": i, "size": int(members.size), "volume": vol, "outer_conductance": outer}
        sub = induced_subgraph(g, members)
        if sub.n <= 1 or sub.m == 0:
            rec["inner_conductance"] = None
        elif not exact.is_connected(sub):
            rec["inner_conductance"], rec["inner_method"] = 0.0, "disconnected"
        elif sub.n <= exact_limit:
            rec["inner_conductance"], rec["inner_method"] = exact.exact_conductance(sub), "exact"
        else:
            lam2 = exact.spectral_profile(sub).lambda2
            rec["inner_conductance"], rec["inner_method"] = lam2 / 2, "spectral-lower-bound"
        out.append(rec)
    return out


def induced_subgraph(g: Graph, members):
    members = np.asarray(members, dtype=np.int64)
    index = -np.ones(g.n, dtype=np.int64)
    index[members] = np.arange(members.size)
    keep = (index[g.edge_u] >= 0) & (index[g.edge_v] >= 0)
    edges = np.stack([index[g.edge_u[keep]], index[g.edge_v[keep]]], axis=1)
    return Graph(int(members.size), edges)


def build_reference_clustering_oracle(g_ext: Graph, r, alpha=None, beta=None, q=None,
                                      seed=ORACLE_SEED, report=True):
    """Spectral clustering of an explicit graph into r parts.

    Bottom-r eigenvectors of the normalized Laplacian, scaled by D^{-1/2},
    then farthest-point seeding and Lloyd refinement with degree weights.
    """
    if r < 1:
        raise ParameterError("r must be >= 1")
    if g_ext.n > MATERIALIZE_LIMIT:
        raise LimitExceeded(f"reference oracle needs n <= {MATERIALIZE_LIMIT}")
    if r == 1:
        labels = np.zeros(g_ext.n, dtype=np.int64)
    else:
        lap = exact.normalized_laplacian(g_ext, check_connected=False)
        _, vecs = np.linalg.eigh(lap)
        deg = g_ext.deg.astype(float)
        emb = vecs[:, :r] / np.sqrt(np.maximum(deg, 1.0))[:, None]
        emb /= max(np.abs(emb).max(), 1e-300)
        rng = np.random.default_rng(seed)
        labels = _lloyd(emb, np.maximum(deg, 1.0), r, rng)
    rep = {"parts": part_report(g_ext, labels, r)} if report else {}
    return ClusteringOracle(labels, r, alpha, beta, q, rep)


def contract_error(g: Graph, oracle: ClusteringOracle, truth):
    """max_i mu(C_i symmetric-difference C^_{tau(i)}) / mu(C_i), minimised over tau.

    ``truth`` is a list of boolean masks or index arrays, one per true cluster.
    """
    masks = []
    for t in truth:
        t = np.asarray(t)
        if t.dtype != bool:
            m = np.zeros(g.n, dtype=bool)
            m[t] = True
            t = m
        masks.append(t)
    parts = []
    for p in oracle.parts():
        m = np.zeros(g.n, dtype=bool)
        m[p] = True
        parts.append(m)
    deg = g.deg
    k = len(masks)
    if len(parts) < k:
        raise ParameterError("oracle has fewer parts than the ground truth")
    best = math.inf
    for tau in itertools.permutations(range(len(parts)), k):
        worst = 0.0
        for i, j in enumerate(tau):
            vol = deg[masks[i]].sum()
            sym = deg[masks[i] ^ parts[j]].sum()
            worst = max(worst, sym / vol if vol else math.inf)
        best = min(best, worst)
    return float(best)


# ----------------------------------------------------------------------
# outer-conductance estimator


def test_outer_conductance(ext_oracle, n, d, q, alpha, beta, oracle: ClusteringOracle, i, rng,
                           samples=None):
    """Fraction of lazy one-step moves from uniform members of part i that leave it.

    ``samples`` overrides the nominal count alpha^2 q d ln n / beta.
    """
    if samples is None:
        if not (alpha > 0 and beta > 0):
            raise ParameterError("alpha and beta must be positive")
        samples = math.ceil(alpha**2 * q * d * math.log(n) / beta)
    samples = int(samples)
    if samples < 1:
        raise ParameterError("need at least one sample")
    a = b = 0
    for _ in range(samples):
        x = ext_oracle.sample_uniform_vertex(rng)
        dx = ext_oracle.degree(x)
        y = x
        if dx and rng.random() < dx / d:
            y, _ = ext_oracle.neighbor(x, int(rng.integers(0, dx)))
        if oracle(x) == i:
            b += 1
            if oracle(y) != i:
                a += 1
    if b == 0:
        raise ParameterError("cluster too small")
    return a / b


test_outer_conductance.__test__ = False  # not a pytest test


# ----------------------------------------------------------------------
# the tester


class _OracleCache:
    def __init__(self, ext):
        self.ext = ext
        self.built = {}

    def get(self, r, alpha, beta, q):
        if r not in self.built:
            g = self.ext.graph
            self.built[r] = build_reference_clustering_oracle(g, r, alpha, beta, q, report=False)
        return self.built[r]


def unique_label_cover_test(instance_oracle, cfg: UlcConfig, seed=0, oracle_factory=None):
    """Accept iff some oracle part has volume near mu and small outer conductance.

    ``oracle_factory(ext_oracle, r, alpha, beta, q)`` may replace the spectral
    reference oracle.  Building the reference oracle reads the whole
    extension; that work is reported separately and not counted as queries.
    """
    cfg.validate()
    tree = seed if isinstance(seed, RngTree) else RngTree(seed)
    g = instance_oracle.graph
    if g.kind != "ulc":
        raise ParameterError("expected a ulc instance")
    if g.q != cfg.q:
        raise ParameterError(f"instance has q={g.q}, config says q={cfg.q}")
    ext = extend_ulc(instance_oracle)
    n, q, d = instance_oracle.n, cfg.q, cfg.d
    if ext.n > MATERIALIZE_LIMIT and oracle_factory is None:
        raise LimitExceeded(f"reference oracle needs n*q <= {MATERIALIZE_LIMIT}")
    if oracle_factory is None:
        cache = _OracleCache(ext)
        oracle_factory = lambda _ext, r, a, b, qq: cache.get(r, a, b, qq)  # noqa: E731

    rng_vol = tree.child("volume").generator()
    t_size = cfg.volume_samples(n)
    sample = instance_oracle.sample_uniform_vertices(t_size, rng_vol)
    x = n / t_size * float(instance_oracle.degrees(sample).sum())

    rounds = []
    decision = Decision.REJECT
    for r in range(2, q + 1):
        la, lb = cfg.alpha_beta(r)
        alpha, beta = math.exp(la), math.exp(lb)
        xi = cfg.xi(r)
        thr = cfg.threshold(r)
        rng = tree.child("members", r).generator()
        s = cfg.member_samples(n)
        oracle = oracle_factory(ext, r, alpha, beta, q)
        vs = ext.sample_uniform_vertices(s, rng)
        degs = ext.degrees(vs)
        labels = oracle.members(vs)
        f = np.bincount(labels, weights=degs, minlength=r)[:r]
        est = n * q / s * f
        rec = {"r": r, "log10_alpha": la / LN10, "log10_beta": lb / LN10, "xi": xi,
               "threshold": thr, "s": s, "s_i": est.tolist()}
        floor = x * q / (4 * (q + 1))
        rec["floor"] = floor
        if not np.all(est >= floor):
            rec["outcome"] = "volume-floor"
            rounds.append(rec)
            continue
        window = [i for i in range(r) if (1 - xi) * x <= est[i] <= (1 + xi) * x]
        rec["window"] = window
        etas = {}
        for i in window:
            rng_i = tree.child("outer", r, i).generator()
            try:
                eta = test_outer_conductance(ext, n * q, d, q, alpha, beta, oracle, i, rng_i,
                                             samples=cfg.outer_samples(r, n * q))
            except ParameterError:
                continue
            etas[i] = eta
            if eta <= thr:
                decision = Decision.ACCEPT
                break
        rec["eta"] = {str(k): v for k, v in etas.items()}
        rec["outcome"] = "accept" if decision is Decision.ACCEPT else "no-sparse-part"
        rounds.append(rec)
        if decision is Decision.ACCEPT:
            break

    diag = {"x": x, "mu": instance_oracle.volume(), "T": t_size, "xi0": cfg.xi0(),
            "rounds": rounds, "seed": tree.seed, "queries": instance_oracle.query_count,
            "config": cfg.to_dict()}
    return Verdict(decision, diag)
