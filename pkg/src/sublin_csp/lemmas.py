"""Exact verification suites.

Each suite builds a small deterministic corpus, computes the relevant
quantities by brute force and checks an inequality on every member.  A
suite returns a list of ``InvariantResult``; one line per invariant is what
the ``verify-lemmas`` command prints.

Where an inequality has a free parameter (a bound that must hold for every
eps with OPT >= 1 - eps, say) the tightest admissible value is used, so the
check is as strong as the statement allows.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from . import defaults, exact
from .errors import CertificationError, ParameterError
from .generators import (Cnf3, all_cnfs_on_three_vars, clause_gadget_check, equality_gadget_check,
                         gen_hardness_3col, gen_planted_e2lin, gen_planted_maxcut,
                         gen_planted_ulc, gen_random_regular, gen_two_cluster, random_cnf)
from .dist_test import l2_difference_test
from .graph import Graph, GraphOracle
from .label_extended import assignment_section, materialize_extension, planted_sections
from .maxcut import MaxCutConfig
from .rng import stream
from .ulc import (ClusteringOracle, build_reference_clustering_oracle, f_schedule,
                  log_alpha_beta, part_report, test_outer_conductance)

TOL = 1e-12
SUITES = ("walks", "exact", "distance", "maxcut", "e2lin", "ulc", "bracket", "hardness")


@dataclass
class InvariantResult:
    name: str
    checked: int = 0
    violations: int = 0
    detail: dict = field(default_factory=dict)
    examples: list = field(default_factory=list)
    informational: bool = False  # reported, never fails the suite

    @property
    def passed(self):
        return self.violations == 0 and self.checked > 0

    def fail(self, example):
        self.violations += 1
        if len(self.examples) < 5:
            self.examples.append(example)

    def line(self):
        status = "INFO" if self.informational else ("PASS" if self.passed else "FAIL")
        extra = "".join(f" {k}={_fmt(v)}" for k, v in self.detail.items())
        return f"{status} {self.name}: checked={self.checked} violations={self.violations}{extra}"

    def to_dict(self):
        return {"name": self.name, "status": self.line().split()[0], "checked": self.checked,
                "violations": self.violations, "detail": self.detail, "examples": self.examples}


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


# ----------------------------------------------------------------------
# corpora


def _from_nx(h):
    h = nx.convert_node_labels_to_integers(h)
    return Graph(h.number_of_nodes(), np.array(list(h.edges()), dtype=np.int64).reshape(-1, 2))


def small_corpus(n_max=13, seed=0):
    """Connected graphs small enough for every brute-force oracle.

    All connected graphs on 2..7 vertices, named families up to n_max, and
    seeded random regular and G(n, p) graphs.
    """
    out = []
    for h in nx.graph_atlas_g():
        if 2 <= h.number_of_nodes() <= min(7, n_max) and nx.is_connected(h):
            out.append((f"atlas-{len(out)}", _from_nx(h)))
    named = []
    for n in range(3, n_max + 1):
        named.append((f"cycle-{n}", nx.cycle_graph(n)))
    for n in range(8, n_max + 1):
        named.append((f"complete-{n}", nx.complete_graph(n)))
        named.append((f"path-{n}", nx.path_graph(n)))
        named.append((f"wheel-{n}", nx.wheel_graph(n)))
    for a in range(1, n_max):
        for b in range(a, n_max - a + 1):
            if a + b >= 8:
                named.append((f"bipartite-{a}-{b}", nx.complete_bipartite_graph(a, b)))
    if n_max >= 10:
        named.append(("petersen", nx.petersen_graph()))
    if n_max >= 8:
        named.append(("cube", nx.hypercube_graph(3)))
    for name, h in named:
        out.append((name, _from_nx(h)))
    rng = stream(seed, "corpus", "small")
    for n in range(8, n_max + 1):
        for d in (3, 4):
            if (n * d) % 2 == 0:
                for s in range(3):
                    h = nx.random_regular_graph(d, n, seed=int(rng.integers(2**31)))
                    if nx.is_connected(h):
                        out.append((f"regular-{n}-{d}-{s}", _from_nx(h)))
        for s in range(3):
            for _ in range(100):
                h = nx.gnp_random_graph(n, 0.35, seed=int(rng.integers(2**31)))
                if nx.is_connected(h):
                    out.append((f"gnp-{n}-{s}", _from_nx(h)))
                    break
    for n in (8, 10, 12):
        if n <= n_max:
            inst = gen_planted_maxcut(n, 3, 0.2, seed)
            out.append((f"planted-maxcut-{n}", inst.graph))
    return out


def expander_corpus(sizes=((64, 3), (256, 4), (1024, 8), (4096, 8)), seed=0):
    """Certified random regular expanders; phi is lambda_2 / 2."""
    out = []
    for n, d in sizes:
        inst = gen_random_regular(n, d, seed, phi_min=1e-6)
        out.append((f"regular-{n}-{d}", inst.graph, inst.certificate))
    return out


# ----------------------------------------------------------------------
# walks: parity identities


def suite_walks(n_graphs=20, n_max=64, t_max=50, seed=0):
    rng = stream(seed, "suite", "walks")
    ident = InvariantResult("parity-identity q = p_even - p_odd")
    mass = InvariantResult("parity-mass both halves = 1/2")
    worst_i = worst_m = 0.0
    for gi in range(n_graphs):
        n = int(rng.integers(8, n_max + 1))
        while True:
            h = nx.gnp_random_graph(n, min(1.0, 4.0 / n), seed=int(rng.integers(2**31)))
            if nx.is_connected(h):
                break
        g = _from_nx(h)
        PT = exact.transition_matrix(g).T.toarray()
        E, O, Q = np.eye(n), np.zeros((n, n)), np.eye(n)  # columns are start vertices
        for t in range(1, t_max + 1):
            ME, MO = PT @ E, PT @ O
            E, O = 0.5 * E + 0.5 * MO, 0.5 * O + 0.5 * ME
            Q = 0.5 * (Q - PT @ Q)
            err = float(np.abs(Q - (E - O)).max())
            merr = float(max(np.abs(E.sum(axis=0) - 0.5).max(), np.abs(O.sum(axis=0) - 0.5).max()))
            worst_i, worst_m = max(worst_i, err), max(worst_m, merr)
            ident.checked += n
            mass.checked += n
            if err > TOL:
                ident.fail({"graph": gi, "t": t, "error": err})
            if merr > TOL:
                mass.fail({"graph": gi, "t": t, "error": merr})
    ident.detail["max_error"] = worst_i
    mass.detail["max_error"] = worst_m
    return [ident, mass]


# ----------------------------------------------------------------------
# exact: Cheeger-type sandwiches


def suite_exact(n_max=13, seed=0, corpus=None):
    corpus = corpus if corpus is not None else small_corpus(n_max, seed)
    cheeger = InvariantResult("cheeger lambda2/2 <= phi <= sqrt(2 lambda2)")
    higher = InvariantResult("higher-order lambda_k/2 <= rho(k), k <= 4, n <= 12")
    bip = InvariantResult("bipartiteness (2-lambda_n)/2 <= beta <= sqrt(2(2-lambda_n))")
    dual = InvariantResult("dual cheeger (2-lambda_n)/2 <= 1 - h(2), n <= 10")
    for name, g in corpus:
        prof = exact.spectral_profile(g)
        lam2, lam_n = prof.lambda2, prof.lambda_max
        phi = exact.exact_conductance(g)
        cheeger.checked += 1
        if not (lam2 / 2 - 1e-9 <= phi <= math.sqrt(2 * max(lam2, 0)) + 1e-9):
            cheeger.fail({"graph": name, "lambda2": lam2, "phi": phi})
        if g.n <= min(12, exact.RHO_LIMIT):
            for k in range(2, min(4, g.n) + 1):
                higher.checked += 1
                rk = exact.exact_rho(g, k)
                if prof.lam(k) / 2 > rk + 1e-9:
                    higher.fail({"graph": name, "k": k, "lambda_k": prof.lam(k), "rho": rk})
        if g.n <= exact.BETA_LIMIT:
            beta = exact.exact_bipartiteness_ratio(g)
            bip.checked += 1
            gap = 2 - lam_n
            if not (gap / 2 - 1e-9 <= beta <= math.sqrt(2 * max(gap, 0)) + 1e-9):
                bip.fail({"graph": name, "lambda_n": lam_n, "beta": beta})
        if g.n <= exact.DUAL_CHEEGER_LIMIT:
            h2 = exact.exact_dual_cheeger2(g)
            dual.checked += 1
            if (2 - lam_n) / 2 > 1 - h2 + 1e-9:
                dual.fail({"graph": name, "lambda_n": lam_n, "h2": h2})
    return [cheeger, higher, bip, dual]


# ----------------------------------------------------------------------
# maxcut: walk decay, the Delta gap, beta >= phi rho / 2, completeness mass


def check_walk_decay(corpus=None, starts_per_graph=20, t_max=100, seed=0):
    corpus = corpus if corpus is not None else expander_corpus(seed=seed)
    res = InvariantResult("walk-norm decay ||p D^-1/2||^2 <= 1/mu + (1-phi^2/4)^(2t)")
    slack = math.inf
    rng = stream(seed, "suite", "decay")
    for name, g, phi in corpus:
        starts = rng.choice(g.n, size=min(starts_per_graph, g.n), replace=False)
        norms = exact.walk_norms_all(g, t_max, starts)
        t = np.arange(t_max + 1)[:, None]
        bound = 1.0 / g.volume + (1 - phi**2 / 4) ** (2 * t)
        res.checked += norms.size
        bad = norms > bound + TOL
        slack = min(slack, float((bound - norms).min()))
        for ti, si in zip(*np.nonzero(bad)):
            res.fail({"graph": name, "t": int(ti), "v": int(starts[si])})
    res.detail["min_slack"] = slack
    res.detail["graphs"] = len(corpus)
    return res


def maxcut_point(**overrides):
    p = dict(defaults.MAXCUT_POINT)
    p.update(overrides)
    return MaxCutConfig(phi=p["phi"], eps=p["eps"], rho=p["rho"],
                        **{k: v for k, v in p.items() if k not in ("phi", "eps", "rho")})


def check_delta_gap(corpus, cfg: MaxCutConfig, planted=()):
    """Soundness: MC <= 1-rho and phi_G >= phi => Delta_l(v) <= xi/4 for all v.
    Completeness: MC >= 1-eps => Delta_l(v) >= xi on >= 1/8 of the volume."""
    sound = InvariantResult(f"delta-gap soundness Delta <= xi_trm/4 (C_mc={cfg.C_mc})")
    comp = InvariantResult(f"delta-gap completeness vol(Delta >= xi_trm) >= mu/8 (C_mc={cfg.C_mc})")
    worst_ratio = 0.0
    min_frac = math.inf
    for name, g, mc in list(corpus) + list(planted):
        phi_g = exact.exact_conductance(g) if g.n <= exact.CONDUCTANCE_LIMIT else None
        mu = g.volume
        ell = cfg.walk_length(mu)
        xi = cfg.xi_trm(mu)
        deltas = None
        if mc <= 1 - cfg.rho and phi_g is not None and phi_g >= cfg.phi:
            deltas = exact.exact_delta_all(g, ell)
            sound.checked += 1
            ratio = float(deltas.max() / (xi / 4))
            worst_ratio = max(worst_ratio, ratio)
            if ratio > 1:
                sound.fail({"graph": name, "n": g.n, "maxcut": mc, "phi": phi_g, "ell": ell,
                            "max_delta": float(deltas.max()), "xi_trm/4": xi / 4})
        if mc >= 1 - cfg.eps:
            deltas = exact.exact_delta_all(g, ell) if deltas is None else deltas
            comp.checked += 1
            frac = float(g.deg[deltas >= xi].sum() / mu)
            min_frac = min(min_frac, frac)
            if frac < 1 / 8:
                comp.fail({"graph": name, "n": g.n, "fraction": frac})
    sound.detail["worst_delta_over_bound"] = worst_ratio
    comp.detail["min_volume_fraction"] = min_frac
    return sound, comp


def check_beta_lemma(corpus):
    """beta_G >= phi rho / 2 at the tightest phi = phi_G, rho = 1 - MC."""
    res = InvariantResult("bipartiteness-ratio beta >= phi*rho/2")
    worst = math.inf
    for name, g, mc in corpus:
        if g.n > exact.BETA_LIMIT:
            continue
        phi = exact.exact_conductance(g)
        beta = exact.exact_bipartiteness_ratio(g)
        rho = 1 - mc
        res.checked += 1
        if rho > 0:
            worst = min(worst, beta / (phi * rho / 2))
        if beta < phi * rho / 2 - 1e-12:
            res.fail({"graph": name, "beta": beta, "phi": phi, "rho": rho})
    res.detail["min_beta_over_bound"] = worst
    return res


def check_completeness_mass(corpus, t_max=50):
    """MC >= 1-eps (eps < 1/2): >= 1/8 of the volume has ||q_v^t||_1 >= (1-2eps)^t / 60."""
    res = InvariantResult("completeness mass sum|q_v^t| >= (1-2eps)^t/60 on mu/8")
    for name, g, mc in corpus:
        eps = 1 - mc
        if eps >= 0.5 or g.n > exact.DENSE_LIMIT:
            continue
        PT = exact.transition_matrix(g).T.toarray()
        Q = np.eye(g.n)
        for t in range(1, t_max + 1):
            Q = 0.5 * (Q - PT @ Q)
            l1 = np.abs(Q).sum(axis=0)
            frac = g.deg[l1 >= (1 - 2 * eps) ** t / 60 - TOL].sum() / g.volume
            res.checked += 1
            if frac < 1 / 8:
                res.fail({"graph": name, "t": t, "fraction": float(frac)})
    return res


def _with_maxcut(corpus):
    return [(name, g, exact.exact_maxcut(g)) for name, g in corpus if g.n <= exact.MAXCUT_LIMIT]


def suite_maxcut(n_max=13, seed=0, cfg=None, expanders=None, corpus=None):
    cfg = cfg or maxcut_point()
    small = _with_maxcut(corpus if corpus is not None else small_corpus(n_max, seed))
    planted = []
    for n in (16, 32, 64):
        inst = gen_planted_maxcut(n, 4, cfg.eps, seed)
        mc_lb = 1 - inst.violations / inst.graph.m
        planted.append((f"planted-{n}", inst.graph, mc_lb))
    decay = check_walk_decay(expanders, seed=seed)
    sound, comp = check_delta_gap(small, cfg, planted)
    beta = check_beta_lemma(small)
    mass = check_completeness_mass(small + planted)
    return [decay, sound, comp, beta, mass]


# ----------------------------------------------------------------------
# label-extended structure


def _e2lin_instances(count, seed):
    rng = stream(seed, "suite", "e2lin")
    shapes = [(n, d, q) for q in (2, 3) for n, d in ((4, 3), (6, 3), (8, 3), (5, 4), (6, 4), (8, 4))
              if n * q <= exact.CONDUCTANCE_LIMIT]
    out = []
    i = 0
    while len(out) < count:
        n, d, q = shapes[i % len(shapes)]
        eps = (0.0, 0.1, 0.3, 1.0)[(i // len(shapes)) % 4]
        try:
            inst = gen_planted_e2lin(n, d, q, eps, int(rng.integers(2**31)), phi_min=1e-9)
        except CertificationError:
            i += 1
            continue
        out.append(inst)
        i += 1
    return out


def suite_e2lin(count=100, seed=0):
    vol = InvariantResult("e2lin planted sections have volume mu'/q")
    cond = InvariantResult("e2lin planted sections conductance <= eps/2 (eps = 1 - OPT)")
    ident = InvariantResult("e2lin section conductance equals 1 - OPT", informational=True)
    sound = InvariantResult("e2lin small-set phi'(q) >= rho*phi/(6q)")
    eig = InvariantResult("e2lin lambda_q(G') > 0 when OPT < 1")
    consts = []
    for idx, inst in enumerate(_e2lin_instances(count, seed)):
        g = inst.graph
        q = g.q
        opt, psi = exact.exact_opt_e2lin(g, return_assignment=True)
        ext = materialize_extension(g)
        mu_ext = ext.volume
        eps = 1 - opt
        for mask in planted_sections(psi, q):
            vol.checked += 1
            if ext.deg[mask].sum() * q != mu_ext:
                vol.fail({"instance": idx})
            phi_s = exact.set_conductance(ext, np.flatnonzero(mask))
            cond.checked += 1
            ident.checked += 1
            if phi_s > eps / 2 + 1e-12:
                cond.fail({"instance": idx, "n": g.n, "q": q, "opt": opt, "phi_S": phi_s,
                           "eps/2": eps / 2})
            if abs(phi_s - eps) > 1e-12:
                ident.fail({"instance": idx, "phi_S": phi_s, "eps": eps})
        if opt < 1:
            phi = exact.exact_conductance(g)
            rho = 1 - opt
            small = exact.exact_conductance_profile(ext, q)
            sound.checked += 1
            if small < rho * phi / (6 * q) - 1e-12:
                sound.fail({"instance": idx, "phi_q": small, "bound": rho * phi / (6 * q)})
            lam_q = exact.spectral_profile(ext, check_connected=False).lam(q)
            eig.checked += 1
            if lam_q <= 1e-9:
                eig.fail({"instance": idx, "lambda_q": lam_q})
            else:
                consts.append(lam_q * q**6 / (rho**2 * phi**2))
    eig.detail["measured_constant_min"] = min(consts) if consts else float("nan")
    eig.detail["measured_constant_median"] = float(np.median(consts)) if consts else float("nan")
    return [vol, cond, ident, sound, eig]


def _ulc_instances(count, planted, seed):
    rng = stream(seed, "suite", "ulc", int(planted))
    shapes = ((4, 3), (6, 3), (8, 3), (10, 3), (5, 4), (6, 4), (8, 4), (10, 4))
    out = []
    i = 0
    while len(out) < count:
        n, d = shapes[i % len(shapes)]
        eps = (0.0, 0.1)[(i // len(shapes)) % 2] if planted else 1.0
        i += 1
        try:
            inst = gen_planted_ulc(n, d, 2, eps, int(rng.integers(2**31)), phi_min=1e-9)
        except CertificationError:
            continue
        if not planted and exact.exact_opt_ulc(inst.graph) >= 1:
            continue  # satisfiable draw; not a soundness instance
        out.append(inst)
    return out


def suite_ulc(count=50, seed=0, staircase_limit=12):
    """q = 2, n*q <= 20."""
    q = 2
    expand = InvariantResult("ulc phi'(q+1) >= phi/(q(q+1))")
    comp_vol = InvariantResult("ulc assignment section has volume mu'/q")
    comp = InvariantResult("ulc assignment section conductance <= eps/2 (eps = 1 - OPT)")
    sound = InvariantResult("ulc small-set phi'(q) >= rho*phi/(6q)")
    stair = InvariantResult("ulc staircase rho'(r) <= f(r), rho'(r+1) > f(r+1) for some r")
    close = InvariantResult("ulc some oracle part within (4eps/alpha + q^2 beta) d mu(S) of S")
    unique = InvariantResult("ulc exactly one oracle part within the bound", informational=True)
    outside = 0
    for planted in (True, False):
        for idx, inst in enumerate(_ulc_instances(count, planted, seed)):
            g = inst.graph
            tag = {"planted": planted, "instance": idx, "n": g.n}
            opt, psi = exact.exact_opt_ulc(g, return_assignment=True)
            ext = materialize_extension(g)
            phi = exact.exact_conductance(g)
            expand.checked += 1
            val = exact.exact_conductance_profile(ext, q + 1)
            if val < phi / (q * (q + 1)) - 1e-12:
                expand.fail({**tag, "phi_q1": val})
            eps = 1 - opt
            if planted:
                s_mask = assignment_section(psi, q)
                comp_vol.checked += 1
                if ext.deg[s_mask].sum() * q != ext.volume:
                    comp_vol.fail(tag)
                phi_s = exact.set_conductance(ext, np.flatnonzero(s_mask))
                comp.checked += 1
                if phi_s > eps / 2 + 1e-12:
                    comp.fail({**tag, "opt": opt, "phi_S": phi_s, "eps/2": eps / 2})
                if eps > 0:
                    # the clustering lemmas need eps far below any 1/m at this size
                    outside += 1
                    continue
                if ext.n <= staircase_limit:
                    stair.checked += 1
                    ok = False
                    for r in range(2, q + 1):
                        if exact.exact_rho(ext, r) <= f_schedule(r, q, eps, phi) + 1e-12 and \
                                exact.exact_rho(ext, r + 1) > f_schedule(r + 1, q, eps, phi):
                            ok = True
                    if not ok:
                        stair.fail(tag)
                r = 2
                la, lb = log_alpha_beta(r, q, eps, phi)
                alpha, beta = math.exp(la), math.exp(lb)
                bound_factor = (4 * eps / alpha if alpha > 0 else 0.0) + q * q * beta
                oracle = build_reference_clustering_oracle(ext, r, alpha, beta, q, report=False)
                mu_s = ext.deg[s_mask].sum()
                d = int(g.deg.max())
                hits = 0
                for part in oracle.parts():
                    pm = np.zeros(ext.n, dtype=bool)
                    pm[part] = True
                    if ext.deg[pm ^ s_mask].sum() <= bound_factor * d * mu_s + 1e-9:
                        hits += 1
                close.checked += 1
                unique.checked += 1
                if hits == 0:
                    close.fail(tag)
                if hits != 1:
                    unique.fail({**tag, "hits": hits})
            else:
                rho = 1 - opt
                small = exact.exact_conductance_profile(ext, q)
                sound.checked += 1
                if small < rho * phi / (6 * q) - 1e-12:
                    sound.fail({**tag, "phi_q": small, "bound": rho * phi / (6 * q)})
    stair.detail["outside_hypothesis"] = outside
    close.detail["outside_hypothesis"] = outside
    return [expand, comp_vol, comp, sound, stair, close, unique]


# ----------------------------------------------------------------------
# distance tester


def engineered_pair(g: Graph, target, seed=0):
    """(p, q) on V(g) with ||(p - q) D^{-1/2}||^2 == target exactly.

    p is uniform; q moves mass a from a random half of the vertices to the
    other half, with a solved from the target.
    """
    rng = stream(seed, "pair")
    n = g.n
    order = rng.permutation(n)
    plus, minus = order[: n // 2], order[n // 2: 2 * (n // 2)]
    weight = float(np.sum(1.0 / g.deg[plus]) + np.sum(1.0 / g.deg[minus]))
    a = math.sqrt(target / weight)
    if a > 1.0 / n:
        raise ParameterError("target distance too large for this graph")
    p = np.full(n, 1.0 / n)
    q = p.copy()
    q[plus] += a
    q[minus] -= a
    q = np.maximum(q, 0.0)
    return p, q / q.sum()


def weighted_distance(g: Graph, p, q):
    return float(np.sum((p - q) ** 2 / g.deg))


def suite_distance(trials=200, n=200, xi_fraction=0.1, delta=0.05, seed=0, c_dist=None, c_rep=None):
    """Accept/reject rates of the closeness test on engineered pairs.

    xi is ``xi_fraction`` times the weighted norm of the uniform distribution.
    """
    c_dist = defaults.DIST["c_dist"] if c_dist is None else c_dist
    c_rep = defaults.DIST["c_rep"] if c_rep is None else c_rep
    h = nx.gnp_random_graph(n, 0.05, seed=seed)
    for v in range(n):
        if h.degree(v) == 0:
            h.add_edge(v, (v + 1) % n)
    g = _from_nx(h)
    oracle = GraphOracle(g)
    xi = xi_fraction * float(np.sum(1.0 / g.deg)) / n**2
    out = []
    for mult in (0.0, 0.5, 4.0, 8.0):
        target = mult * xi
        p, q = engineered_pair(g, target, seed=seed)
        dist = weighted_distance(g, p, q)
        b = max(float(np.sum(p**2 / g.deg)), float(np.sum(q**2 / g.deg)))
        close = dist <= xi
        res = InvariantResult(f"distance test {'accepts' if close else 'rejects'} at delta*={mult:g}*xi")
        rng = stream(seed, "distance", mult)
        hits = 0
        for _ in range(trials):
            v = l2_difference_test(lambda k: rng.choice(n, size=k, p=p),
                                   lambda k: rng.choice(n, size=k, p=q),
                                   oracle, xi, delta, b, rng, c_dist=c_dist, c_rep=c_rep)
            hits += v.accepted == close
        rate = hits / trials
        res.checked = trials
        res.detail.update({"distance": dist, "rate": rate, "required": 1 - delta})
        if rate < 1 - delta:
            res.violations = trials - hits
        out.append(res)
    return out


# ----------------------------------------------------------------------
# outer-conductance estimator


def suite_bracket(runs=100, n=512, d=8, cross=(2, 4, 8, 16), c_samples=4.0, seed=0):
    """Outer-conductance estimator against edge-scan truth on two-cluster graphs.

    The oracle is the planted partition itself; alpha is the smaller
    part's inner conductance (lambda_2/2 lower bound) and beta the larger
    outer conductance, both measured exactly.  ``c_samples`` is the
    constant in front of alpha^2 q d ln n / beta.
    """
    res = InvariantResult("outer-conductance estimate inside [phi/(2d) - beta/alpha^2, 1.5 phi + beta/alpha^2]")
    inside_tight = 0
    errors = []
    max_slack = 0.0
    for run in range(runs):
        c = cross[run % len(cross)]
        inst = gen_two_cluster(n, d, c, int(stream(seed, "bracket", run).integers(2**31)), phi_min=0.05)
        g = inst.graph
        labels = inst.planted_solution
        rep = part_report(g, labels, 2)
        alpha = min(p["inner_conductance"] for p in rep)
        beta = max(p["outer_conductance"] for p in rep)
        oracle = ClusteringOracle(labels, 2, alpha, beta, 1)
        i = run % 2
        phi_c = rep[i]["outer_conductance"]
        samples = math.ceil(c_samples * alpha**2 * d * math.log(g.n) / beta)
        est = test_outer_conductance(GraphOracle(g), g.n, d, 1, alpha, beta, oracle, i,
                                     stream(seed, "bracket", "walk", run), samples=samples)
        max_slack = max(max_slack, beta / alpha**2)
        lo = phi_c / (2 * d) - beta / alpha**2
        hi = 1.5 * phi_c + beta / alpha**2
        res.checked += 1
        if not lo <= est <= hi:
            res.fail({"run": run, "eta": est, "lo": lo, "hi": hi})
        if phi_c / (2 * d) <= est <= 1.5 * phi_c:
            inside_tight += 1
        errors.append(abs(est - phi_c))
    res.detail["in_bracket_rate"] = 1 - res.violations / max(res.checked, 1)
    res.detail["without_slack_rate"] = inside_tight / max(res.checked, 1)
    res.detail["max_slack"] = max_slack
    res.detail["median_abs_error"] = float(np.median(errors)) if errors else 0.0
    return [res]


# ----------------------------------------------------------------------
# hardness construction


def suite_hardness(n_random=100, seed=0, max_vars=8):
    gadget_eq = InvariantResult("equality gadget forces equal colours")
    gadget_cl = InvariantResult("clause gadget excludes only all-false")
    sat_col = InvariantResult("satisfiable formula gives 3-colourable graph")
    converse = InvariantResult("unsatisfiable formula gives non-3-colourable graph", informational=True)
    degree = InvariantResult("max degree <= d'")
    expansion = InvariantResult("lambda_2/2 > 0 (phi_0 reported)")
    eq = equality_gadget_check()
    gadget_eq.checked = 1
    if not eq["forces_equal"]:
        gadget_eq.fail(eq)
    cl = clause_gadget_check()
    gadget_cl.checked = 1
    if any(v != (k != "FFF") for k, v in cl.items()):
        gadget_cl.fail(cl)
    formulas = list(all_cnfs_on_three_vars(2))
    rng = stream(seed, "suite", "hardness")
    for _ in range(n_random):
        nv = int(rng.integers(3, max_vars + 1))
        formulas.append(random_cnf(nv, int(rng.integers(1, 2 * nv + 1)), 2, rng))
    # no 3-variable formula with k = 2 is unsatisfiable; add all eight sign patterns (k = 4)
    formulas.append(Cnf3(3, tuple(tuple(s * v for s, v in zip(signs, (1, 2, 3)))
                                  for signs in itertools.product((1, -1), repeat=3)), 4))
    phi0 = math.inf
    for fi, f in enumerate(formulas):
        g, info = gen_hardness_3col(f, seed=seed)
        sat = exact.sat_brute(f.as_tuple())
        col = exact.exact_3colorable(g)
        sat_col.checked += 1
        converse.checked += 1
        if sat and not col:
            sat_col.fail({"formula": fi, "clauses": f.clauses})
        if not sat and col:
            converse.fail({"formula": fi})
        degree.checked += 1
        if info["max_degree"] > info["degree_bound"]:
            degree.fail({"formula": fi, "max_degree": info["max_degree"]})
        lam2 = exact.spectral_extremes(g, 2)[0][0] if exact.is_connected(g) else 0.0
        expansion.checked += 1
        phi0 = min(phi0, lam2 / 2)
        if not lam2 > 1e-12:
            expansion.fail({"formula": fi, "lambda2": lam2})
    expansion.detail["phi0"] = phi0
    converse.detail["unsatisfiable_seen"] = sum(1 for f in formulas if not exact.sat_brute(f.as_tuple()))
    return [gadget_eq, gadget_cl, sat_col, converse, degree, expansion]


def run_suite(name, **kw):
    fns = {"walks": suite_walks, "exact": suite_exact, "maxcut": suite_maxcut,
           "e2lin": suite_e2lin, "ulc": suite_ulc, "bracket": suite_bracket,
           "distance": suite_distance,
           "hardness": suite_hardness}
    if name not in fns:
        raise ParameterError(f"unknown suite {name!r}; choose from {SUITES}")
    return fns[name](**kw)


__all__ = ["InvariantResult", "small_corpus", "expander_corpus", "run_suite", "SUITES",
           "suite_walks", "suite_exact", "suite_maxcut", "suite_e2lin", "suite_ulc",
           "suite_hardness", "suite_bracket", "suite_distance", "engineered_pair", "check_delta_gap", "check_beta_lemma", "check_walk_decay",
           "check_completeness_mass", "maxcut_point"]
