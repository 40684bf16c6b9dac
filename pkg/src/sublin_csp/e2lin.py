"""Max E2Lin(q) tester: a satisfiable-enough instance splits its
label-extended graph into q sparse sections, which the clusterability test
detects."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from . import defaults
from .cluster_test import ClusterabilityParams, test_clusterability
from .errors import ParameterError
from .graph import Decision, Verdict
from .label_extended import extend_e2lin
from .rng import RngTree

LAMBDA_RULES = ("lemma", "algorithm")


@dataclass
class E2LinConfig:
    phi: float
    eps: float
    rho: float
    q: int
    lambda_rule: str = "lemma"
    c_lambda: float = defaults.E2LIN["c_lambda"]  # lemma rule: rho^2 phi^2 / (c_lambda q^6)
    c_lambda_alg: float = defaults.E2LIN["c_lambda_alg"]  # algorithm rule: rho phi^2 / (c q^12)
    c_feas: float = defaults.E2LIN["c_feas"]  # rho >= c_feas * q^3 sqrt(eps) / phi
    variant: str = "exact"
    cluster: dict = field(default_factory=dict)  # overrides for ClusterabilityParams

    def validate(self):
        for name in ("phi", "rho"):
            if not 0 < getattr(self, name) < 1:
                raise ParameterError(f"{name} must lie in (0, 1)")
        if not 0 <= self.eps < 1:
            raise ParameterError("eps must lie in [0, 1)")
        if self.q < 1:
            raise ParameterError("q must be >= 1")
        if self.lambda_rule not in LAMBDA_RULES:
            raise ParameterError(f"lambda rule must be one of {LAMBDA_RULES}")
        need = self.c_feas * self.q**3 * math.sqrt(self.eps) / self.phi
        if self.rho < need:
            raise ParameterError(f"infeasible: rho={self.rho} < {need:.4g}")
        return self

    def lam(self):
        if self.lambda_rule == "lemma":
            return self.rho**2 * self.phi**2 / (self.c_lambda * self.q**6)
        return self.rho * self.phi**2 / (self.c_lambda_alg * self.q**12)

    def cluster_params(self):
        return ClusterabilityParams(k=self.q - 1, lam=self.lam(), eps_cond=self.eps / 2,
                                    variant=self.variant, **self.cluster)

    def to_dict(self):
        return asdict(self)


def test_expander_e2lin(oracle, cfg: E2LinConfig, seed=0):
    cfg.validate()
    tree = seed if isinstance(seed, RngTree) else RngTree(seed)
    if oracle.graph.q != cfg.q:
        raise ParameterError(f"instance has q={oracle.graph.q}, config says q={cfg.q}")
    ext = extend_e2lin(oracle)
    params = cfg.cluster_params()
    inner = test_clusterability(ext, params, tree.child("cluster"))
    decision = Decision.ACCEPT if inner.decision is Decision.REJECT else Decision.REJECT
    diag = {
        "lambda": params.lam,
        "lambda_rule": cfg.lambda_rule,
        "k": params.k,
        "eps_cond": params.eps_cond,
        "cluster": inner.to_dict(),
        "threshold": params.lam,
        "seed": tree.seed,
        "queries": oracle.query_count,
        "config": cfg.to_dict(),
    }
    return Verdict(decision, diag)


test_expander_e2lin.__test__ = False  # not a pytest test
