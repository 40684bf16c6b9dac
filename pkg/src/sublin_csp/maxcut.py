"""Sublinear Max Cut tester for expanders.

From a few degree-weighted start vertices, compare the even-hop and
odd-hop endpoint laws of a lazy walk.  On a nearly bipartite graph the two
laws stay far apart; on an expander whose every cut is far from perfect
they converge.  So the graph is accepted as soon as one start vertex shows
a large parity gap.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import defaults
from .dist_test import l2_difference_test, repetitions, sample_size
from .errors import ParameterError
from .graph import Decision, Verdict
from .rng import RngTree
from .walks import ParityWalkSampler


@dataclass
class MaxCutConfig:
    phi: float
    eps: float
    rho: float
    C_mc: float = defaults.MAXCUT["C_mc"]
    n_start_vertices: int = defaults.MAXCUT["n_start_vertices"]
    mu_mode: str = "exact"  # or "estimated"
    xi_scale: float = defaults.MAXCUT["xi_scale"]  # constant in the termination threshold
    b_scale: float = 4.0  # b_bound = b_scale / mu
    c_dist: float = defaults.MAXCUT["c_dist"]
    c_rep: float = defaults.MAXCUT["c_rep"]
    c_feas: float = defaults.MAXCUT["c_feas"]
    delta: float | None = None  # inner failure probability; default 1/n^2
    volume_samples: int = 0  # estimated mode; 0 means ceil(sqrt(n) * 10)
    exact_diagnostics: bool = False

    def validate(self):
        for name in ("phi", "eps", "rho"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ParameterError(f"{name} must lie in (0, 1)")
        if self.C_mc <= 0 or self.xi_scale <= 0:
            raise ParameterError("constants must be positive")
        if self.n_start_vertices < 1:
            raise ParameterError("need at least one start vertex")
        if self.mu_mode not in ("exact", "estimated"):
            raise ParameterError("mu_mode must be exact or estimated")
        if self.eps * self.c_feas > self.C_mc * self.phi**2 * self.rho:
            raise ParameterError(
                f"infeasible: eps={self.eps} exceeds C*phi^2*rho/c_feas="
                f"{self.C_mc * self.phi**2 * self.rho / self.c_feas:.4g}")
        return self

    def walk_length(self, mu):
        return max(1, math.ceil(math.log(mu) / (16 * self.C_mc * self.phi**2 * self.rho)))

    def exponent(self):
        return self.eps / (2 * self.C_mc * self.phi**2 * self.rho)

    def xi_trm(self, mu):
        return 1.0 / (self.xi_scale * mu ** (1 + self.exponent()))

    def to_dict(self):
        return asdict(self)


def estimate_volume(oracle, samples, rng):
    """(n / s) * sum of degrees of s uniform vertices."""
    vs = oracle.sample_uniform_vertices(samples, rng)
    return oracle.n * float(np.mean(oracle.degrees(vs)))


def parameters(oracle, cfg: MaxCutConfig, rng_tree=None):
    """Walk length, threshold and inner-test sizes for this oracle."""
    n = oracle.n
    if cfg.mu_mode == "exact":
        mu = float(oracle.volume())
        mu_walk, b_mult = mu, 1.0
    else:
        s = cfg.volume_samples or math.ceil(10 * math.sqrt(n))
        mu = estimate_volume(oracle, s, rng_tree.child("volume").generator())
        mu_walk, b_mult = 2 * mu, 2.0
    ell = cfg.walk_length(mu_walk)
    xi = cfg.xi_trm(mu)
    b = b_mult * cfg.b_scale / mu
    delta = cfg.delta if cfg.delta is not None else 1.0 / n**2
    return {"mu": mu, "ell": ell, "xi_trm": xi, "b_bound": b, "delta": delta,
            "r": sample_size(b, xi, cfg.c_dist), "repetitions": repetitions(delta, cfg.c_rep)}


def query_budget(oracle, cfg: MaxCutConfig):
    """Hard cap on the queries of one run (exact volume mode)."""
    p = parameters(oracle, cfg)
    r, reps, ell = p["r"], p["repetitions"], p["ell"]
    # per statistic: at most 8r draws per side, each draw paid by walks of
    # cost <= 2*ell; batches overshoot by < 2.2x plus 64 walks
    per_stat = 2 * (2.2 * 8 * r + 80) * 2 * ell * 2 + 16 * r
    return int(cfg.n_start_vertices * (1 + reps * per_stat))


def test_expander_maxcut(oracle, cfg: MaxCutConfig, seed=0):
    """Run the tester.  ``seed`` is an int or an RngTree."""
    cfg.validate()
    tree = seed if isinstance(seed, RngTree) else RngTree(seed)
    p = parameters(oracle, cfg, tree)
    starts = oracle.sample_vertices(cfg.n_start_vertices, tree.child("seeds").generator())
    per_seed = []
    decision = Decision.REJECT
    for i, v in enumerate(starts):
        v = int(v)
        sampler = ParityWalkSampler(oracle, v, p["ell"], tree.child("walks", i).generator())
        inner = l2_difference_test(sampler.sampler(0), sampler.sampler(1), oracle,
                                   p["xi_trm"], p["delta"], p["b_bound"],
                                   tree.child("dist", i).generator(), cfg.c_dist, cfg.c_rep)
        rec = {"vertex": v, "inner": inner.decision.value,
               "median_estimate": inner.diagnostics["median_estimate"],
               "runs": inner.diagnostics["runs"], "aborts": inner.diagnostics["aborts"],
               "walks": sampler.walks}
        if cfg.exact_diagnostics and hasattr(oracle, "graph"):
            from .exact import exact_delta
            d = exact_delta(oracle.graph, v, p["ell"])
            rec["exact_delta"] = d
            rec["gap_region"] = bool(p["xi_trm"] / 4 < d < p["xi_trm"])
        per_seed.append(rec)
        if inner.decision is Decision.REJECT:
            decision = Decision.ACCEPT
            break
    diag = {
        **{k: v for k, v in p.items()},
        "threshold_inner": 2 * p["xi_trm"],
        "seeds": per_seed,
        "seed": tree.seed,
        "queries": oracle.query_count,
        "config": cfg.to_dict(),
    }
    return Verdict(decision, diag)


test_expander_maxcut.__test__ = False  # not a pytest test
