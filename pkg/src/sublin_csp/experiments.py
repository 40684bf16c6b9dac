"""Batch experiments: seeded trial runners, manifests with replay, the
calibration sweep and query-complexity profiling.

A run is fully described by a JSON-able ``params`` dict (instance source,
tester configuration, seed, trial count).  ``run_experiment`` turns params
into per-trial records; a manifest stores both, and ``replay`` re-executes
the params and compares verdicts and query counts.
"""
from __future__ import annotations

import concurrent.futures as cf
import csv
import hashlib
import io
import json
import os
import time
from dataclasses import fields

import numpy as np

from . import __version__
from .e2lin import E2LinConfig, test_expander_e2lin
from .errors import ParameterError
from .generators import (gen_planted_e2lin, gen_planted_maxcut, gen_planted_ulc,
                         gen_random_regular)
from .graph import Graph, GraphOracle, format_graph, read_graph
from .maxcut import MaxCutConfig, test_expander_maxcut
from .rng import RngTree, stream
from .ulc import UlcConfig, unique_label_cover_test

ALGOS = ("maxcut", "e2lin", "ulc")
INSTANCE_KINDS = ("file", "regular", "planted-maxcut", "planted-e2lin", "planted-ulc",
                  "random-e2lin", "random-ulc")


def default_jobs():
    try:
        return max(1, int(os.environ.get("SUBLIN_CSP_JOBS", "1")))
    except ValueError:
        raise ParameterError("SUBLIN_CSP_JOBS must be an integer")


def graph_digest(g: Graph):
    return hashlib.sha256(format_graph(g).encode()).hexdigest()


# ----------------------------------------------------------------------
# instances


def make_instance(desc: dict, seed: int):
    """(graph, metadata) for one trial.  ``file`` instances ignore the seed."""
    kind = desc.get("kind")
    if kind not in INSTANCE_KINDS:
        raise ParameterError(f"unknown instance kind {kind!r}")
    if kind == "file":
        g = read_graph(desc["path"])
        return g, {"path": desc["path"]}
    n, d = int(desc["n"]), int(desc["d"])
    phi_min = float(desc.get("phi_min", 0.0))
    if kind == "regular":
        inst = gen_random_regular(n, d, seed, phi_min)
    elif kind == "planted-maxcut":
        inst = gen_planted_maxcut(n, d, float(desc["eps"]), seed, phi_min)
    elif kind in ("planted-e2lin", "random-e2lin"):
        eps = 1.0 if kind == "random-e2lin" else float(desc["eps"])
        inst = gen_planted_e2lin(n, d, int(desc["q"]), eps, seed, phi_min)
    else:
        eps = 1.0 if kind == "random-ulc" else float(desc["eps"])
        inst = gen_planted_ulc(n, d, int(desc["q"]), eps, seed, phi_min,
                               completion=desc.get("completion", "random"))
    return inst.graph, {"certificate": inst.certificate, "violations": inst.violations}


def _config(algo, cfg: dict):
    cls = {"maxcut": MaxCutConfig, "e2lin": E2LinConfig, "ulc": UlcConfig}[algo]
    names = {f.name for f in fields(cls)}
    unknown = set(cfg) - names
    if unknown:
        raise ParameterError(f"unknown {algo} config keys: {sorted(unknown)}")
    try:
        return cls(**cfg)
    except TypeError as exc:
        raise ParameterError(str(exc)) from None


def _tester(algo):
    return {"maxcut": test_expander_maxcut, "e2lin": test_expander_e2lin,
            "ulc": unique_label_cover_test}[algo]


def _summary(algo, diag):
    if algo == "maxcut":
        keys = ("mu", "ell", "xi_trm", "r", "repetitions")
        out = {k: diag[k] for k in keys}
        out["seeds_run"] = len(diag["seeds"])
        return out
    if algo == "e2lin":
        return {"lambda": diag["lambda"], "variant": diag["cluster"]["diagnostics"].get("variant")}
    return {"x": diag["x"], "rounds": [r.get("outcome") for r in diag["rounds"]]}


def run_trial(algo, cfg: dict, instance: dict, seed: int, trial: int, verbose=False):
    """One seeded trial; instance seed is seed + trial."""
    conf = _config(algo, cfg)
    conf.validate()
    g, meta = make_instance(instance, seed + trial)
    oracle = GraphOracle(g)
    t0 = time.perf_counter()
    v = _tester(algo)(oracle, conf, RngTree(seed).child("trial", trial))
    rec = {"trial": trial, "decision": v.decision.value, "queries": oracle.query_count,
           "digest": graph_digest(g), "m": g.m, "n": g.n, "seconds": time.perf_counter() - t0,
           "summary": _summary(algo, v.diagnostics), **meta}
    if verbose:
        rec["diagnostics"] = v.diagnostics
    return rec


def _trial_star(args):
    return run_trial(*args)


def map_trials(arg_list, jobs=1):
    """Run trials, possibly in worker processes; results keep input order."""
    if jobs <= 1 or len(arg_list) <= 1:
        return [_trial_star(a) for a in arg_list]
    with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_trial_star, arg_list))


def run_experiment(params: dict, jobs=1):
    algo = params["algo"]
    if algo not in ALGOS:
        raise ParameterError(f"unknown algorithm {algo!r}")
    trials = int(params.get("trials", 1))
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    seed = int(params.get("seed", 0))
    args = [(algo, params.get("config", {}), params["instance"], seed, i,
             bool(params.get("verbose", False))) for i in range(trials)]
    records = map_trials(args, jobs)
    accepts = sum(r["decision"] == "accept" for r in records)
    return {"trials": records, "accept_rate": accepts / trials, "reject_rate": 1 - accepts / trials,
            "total_queries": int(sum(r["queries"] for r in records))}


# ----------------------------------------------------------------------
# manifests


def make_manifest(subcommand, params, results, wall_time):
    conf = _config(params["algo"], params.get("config", {}))
    return {"subcommand": subcommand, "version": __version__, "params": params,
            "constants": conf.to_dict(), "seed": params.get("seed", 0),
            "graph_digests": sorted({r["digest"] for r in results["trials"]}),
            "results": results, "wall_time": wall_time}


def write_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, default=_json_default)
        fh.write("\n")


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def dumps(obj):
    return json.dumps(obj, indent=2, default=_json_default)


def load_manifest(path):
    with open(path) as fh:
        m = json.load(fh)
    for key in ("subcommand", "params", "results"):
        if key not in m:
            raise ParameterError(f"manifest lacks {key!r}")
    return m


def replay(manifest: dict, jobs=1):
    """Re-run a manifest; returns (identical, mismatches, new results)."""
    new = run_experiment(manifest["params"], jobs)
    mismatches = []
    old_trials = manifest["results"]["trials"]
    if len(old_trials) != len(new["trials"]):
        mismatches.append({"field": "trial count"})
    for a, b in zip(old_trials, new["trials"]):
        for key in ("decision", "queries", "digest"):
            if a[key] != b[key]:
                mismatches.append({"trial": a["trial"], "field": key, "old": a[key], "new": b[key]})
    return not mismatches, mismatches, new


# ----------------------------------------------------------------------
# calibration


def calibration_grid(algo):
    """Candidate overrides, in the order they are tried (cheapest first)."""
    if algo == "maxcut":
        return [{"C_mc": c, "xi_scale": x, "c_dist": cd, "c_rep": cr}
                for c in (4.0, 6.3, 10.0) for x in (4.0, 16.0) for cd in (1.0,) for cr in (4.0, 8.0)]
    if algo == "e2lin":
        return [{"cluster": {"c_samples": s, "c_len": 0.15, "theta_scale": 0.75}}
                for s in (2.0, 3.0, 4.0, 6.0)]
    return [{"log10_c_thr": t} for t in (-57.0, -56.5, -55.88, -55.5)]


def calibration_instances(algo, n):
    if algo == "maxcut":
        return ({"kind": "planted-maxcut", "n": n, "d": 8, "eps": 0.01},
                {"kind": "planted-maxcut", "n": n, "d": 8, "eps": 0.45})
    if algo == "e2lin":
        return ({"kind": "planted-e2lin", "n": n, "d": 8, "q": 2, "eps": 0.01},
                {"kind": "random-e2lin", "n": n, "d": 8, "q": 2})
    return ({"kind": "planted-ulc", "n": n, "d": 4, "q": 2, "eps": 0.0, "completion": "identity"},
            {"kind": "random-ulc", "n": n, "d": 4, "q": 2})


def calibration_base(algo):
    if algo == "maxcut":
        return {"phi": 0.16, "eps": 0.01, "rho": 0.15}
    if algo == "e2lin":
        return {"phi": 0.16, "eps": 0.01, "rho": 0.16, "q": 2, "variant": "sublinear"}
    return {"q": 2, "d": 4, "phi": 0.05, "eps": 0.01, "rho": 0.1}


def calibrate(algo, n, trials, seed=0, target=0.95, grid=None, jobs=1, base=None):
    """Sweep the grid; select the first point with both rates >= target."""
    if algo not in ALGOS:
        raise ParameterError(f"unknown algorithm {algo!r}")
    grid = grid if grid is not None else calibration_grid(algo)
    base = dict(base if base is not None else calibration_base(algo))
    good, bad = calibration_instances(algo, n)
    rows = []
    chosen = None
    for gi, over in enumerate(grid):
        cfg = {**base, **over}
        comp = run_experiment({"algo": algo, "config": cfg, "instance": good,
                               "seed": seed, "trials": trials}, jobs)
        sound = run_experiment({"algo": algo, "config": cfg, "instance": bad,
                                "seed": seed + 10_000, "trials": trials}, jobs)
        row = {"point": gi, **_flat(over), "accept_rate_planted": comp["accept_rate"],
               "reject_rate_soundness": sound["reject_rate"],
               "mean_queries": (comp["total_queries"] + sound["total_queries"]) / (2 * trials)}
        rows.append(row)
        if chosen is None and comp["accept_rate"] >= target and sound["reject_rate"] >= target:
            chosen = row
    return {"algo": algo, "n": n, "trials": trials, "target": target, "base": base,
            "rows": rows, "selected": chosen}


def _flat(d, prefix=""):
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            out.update(_flat(v, prefix + k + "."))
        else:
            out[prefix + k] = v
    return out


# ----------------------------------------------------------------------
# query profiling


def parse_m_range(text):
    """'1024..65536' (powers of two) or a comma list."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
            if lo < 1 or hi < lo:
                raise ValueError
            vals, m = [], 1
            while m <= hi:
                if m >= lo:
                    vals.append(m)
                m *= 2
            if not vals:
                raise ValueError
            return vals
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParameterError(f"bad m range {text!r}") from None
    if not vals or min(vals) < 1:
        raise ParameterError(f"bad m range {text!r}")
    return vals


def fit_loglog(xs, ys):
    """Least-squares slope and intercept of log y against log x."""
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    if len(lx) < 2:
        raise ParameterError("need at least two points to fit")
    slope, intercept = np.polyfit(lx, ly, 1)
    return float(slope), float(intercept)


def profile_queries(algo, m_values, d, cfg: dict, trials=1, seed=0, jobs=1, phi_min=0.0, q=2):
    """Queries of the tester on certified random regular graphs with m edges."""
    if algo not in ("maxcut", "e2lin"):
        raise ParameterError("profiling supports maxcut and e2lin")
    rows = []
    for m in m_values:
        if (2 * m) % d:
            raise ParameterError(f"m={m} is not a multiple of d/2")
        n = 2 * m // d
        inst = ({"kind": "regular", "n": n, "d": d, "phi_min": phi_min} if algo == "maxcut"
                else {"kind": "random-e2lin", "n": n, "d": d, "q": q, "phi_min": phi_min})
        res = run_experiment({"algo": algo, "config": cfg, "instance": inst, "seed": seed,
                              "trials": trials}, jobs)
        for r in res["trials"]:
            rows.append({"m": m, "n": n, "trial": r["trial"], "queries": r["queries"],
                         "decision": r["decision"], "seconds": r["seconds"]})
    means = {}
    for r in rows:
        means.setdefault(r["m"], []).append(r["queries"])
    ms = sorted(means)
    slope, intercept = fit_loglog(ms, [np.mean(means[m]) for m in ms])
    return {"algo": algo, "d": d, "config": cfg, "rows": rows, "slope": slope,
            "intercept": intercept}


def rows_to_csv(rows):
    if not rows:
        return ""
    buf = io.StringIO()
    keys = list(rows[0].keys())
    for r in rows[1:]:
        for k in r:
            if k not in keys:
                keys.append(k)
    w = csv.DictWriter(buf, fieldnames=keys)
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def derive_seed(seed, *path):
    """An integer seed for a named sub-experiment."""
    return int(stream(seed, *path).integers(0, 2**31))


__all__ = ["run_experiment", "run_trial", "make_instance", "make_manifest", "replay",
           "load_manifest", "calibrate", "calibration_grid", "profile_queries", "fit_loglog",
           "parse_m_range", "rows_to_csv", "graph_digest", "default_jobs", "dumps",
           "write_json", "derive_seed"]
