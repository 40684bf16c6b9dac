"""Command-line front end.  JSON goes to stdout (and --json-out); sweeps can
also write CSV.  Exit codes: 0 success, 2 bad parameters, 1 runtime error."""
from __future__ import annotations

import argparse
import sys
import time

from . import defaults, exact
from .errors import GraphFormatError, LimitExceeded, ParameterError
from .experiments import (calibrate, default_jobs, dumps, load_manifest, make_manifest,
                          parse_m_range, profile_queries, replay, rows_to_csv, run_experiment,
                          write_json)
from .generators import (Cnf3, gen_hardness_3col, gen_planted_e2lin, gen_planted_maxcut,
                         gen_planted_ulc, gen_random_regular, random_cnf)
from .graph import read_graph, write_graph
from .lemmas import SUITES, run_suite
from .rng import stream


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _emit(obj, args):
    text = dumps(obj)
    if getattr(args, "json_out", None):
        write_json(obj, args.json_out)
    print(text)


# ----------------------------------------------------------------------
# gen / hardness-gen / oracle


def cmd_gen(args):
    kind = args.kind
    if kind == "regular":
        inst = gen_random_regular(args.n, args.d, args.seed, args.phi_min)
    elif kind == "planted-maxcut":
        inst = gen_planted_maxcut(args.n, args.d, args.eps, args.seed, args.phi_min)
    elif kind == "planted-e2lin":
        inst = gen_planted_e2lin(args.n, args.d, args.q, args.eps, args.seed, args.phi_min)
    else:
        inst = gen_planted_ulc(args.n, args.d, args.q, args.eps, args.seed, args.phi_min,
                               completion=args.completion)
    if args.out:
        write_graph(inst.graph, args.out)
    out = {"kind": kind, "seed": args.seed, "out": args.out, **inst.sidecar()}
    if not args.with_solution:
        out.pop("planted_solution", None)
    _emit(out, args)
    return 0


def _parse_dimacs(path):
    n_vars, clauses = None, []
    with open(path) as fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("c"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) < 4 or parts[1] != "cnf":
                    raise GraphFormatError(f"line {ln}: bad problem line")
                n_vars = int(parts[2])
                continue
            try:
                lits = [int(x) for x in line.split()]
            except ValueError:
                raise GraphFormatError(f"line {ln}: non-integer literal") from None
            if lits and lits[-1] == 0:
                lits = lits[:-1]
            if len(lits) != 3:
                raise GraphFormatError(f"line {ln}: expected three literals")
            clauses.append(tuple(lits))
    if n_vars is None:
        raise GraphFormatError("missing 'p cnf' line")
    return n_vars, clauses


def cmd_hardness_gen(args):
    if args.cnf:
        n_vars, clauses = _parse_dimacs(args.cnf)
        f = Cnf3(n_vars, tuple(clauses), args.k)
    else:
        if args.random_vars is None:
            raise ParameterError("give --cnf or --random-vars")
        rng = stream(args.seed, "cli", "cnf")
        f = random_cnf(args.random_vars, args.clauses or 2 * args.random_vars, args.k, rng)
    g, info = gen_hardness_3col(f, d_exp=args.d_exp, seed=args.seed)
    if args.out:
        write_graph(g, args.out)
    out = {"n_vars": f.n_vars, "clauses": [list(c) for c in f.clauses], "k": f.k_bound,
           "n": g.n, "m": g.m, **info}
    if args.certify:
        out["lambda2_half"] = float(exact.spectral_extremes(g, 2)[0][0]) / 2
        out["satisfiable"] = exact.sat_brute(f.as_tuple())
        out["colorable"] = exact.exact_3colorable(g)
    _emit(out, args)
    return 0


def cmd_oracle(args):
    g = read_graph(args.graph)
    what = args.what
    out = {"graph": args.graph, "n": g.n, "m": g.m, "query": what}
    if what == "spectrum":
        prof = exact.spectral_profile(g, check_connected=False)
        out["eigenvalues"] = prof.eigenvalues.tolist()
    elif what == "conductance":
        out["value"] = exact.exact_conductance_profile(g, args.k)
    elif what == "rho":
        out["value"] = exact.exact_rho(g, args.k)
    elif what == "beta":
        out["value"] = exact.exact_bipartiteness_ratio(g)
    elif what == "maxcut":
        out["value"] = exact.exact_maxcut(g)
    elif what == "opt":
        if g.kind == "e2lin":
            out["value"] = exact.exact_opt_e2lin(g)
        elif g.kind == "ulc":
            out["value"] = exact.exact_opt_ulc(g)
        else:
            out["value"] = exact.exact_maxcut(g)
    elif what == "delta":
        if args.v is None:
            out["values"] = exact.exact_delta_all(g, args.t).tolist()
        else:
            out["value"] = exact.exact_delta(g, args.v, args.t)
    elif what == "3col":
        out["value"] = exact.exact_3colorable(g)
    _emit(out, args)
    return 0


# ----------------------------------------------------------------------
# testers


def _instance_desc(args, default_kind):
    if args.graph:
        return {"kind": "file", "path": args.graph}
    if args.n is None:
        raise ParameterError("give --graph or --n")
    desc = {"kind": args.instance or default_kind, "n": args.n, "d": args.d,
            "phi_min": args.phi_min}
    if args.instance_eps is not None:
        desc["eps"] = args.instance_eps
    if getattr(args, "q", None) is not None:
        desc["q"] = args.q
    if desc["kind"].startswith("planted") and "eps" not in desc:
        raise ParameterError("planted instances need --instance-eps")
    return desc


def _run_tester(args, algo, config):
    jobs = args.jobs if args.jobs is not None else default_jobs()
    if args.replay:
        manifest = load_manifest(args.replay)
        same, mismatches, new = replay(manifest, jobs)
        _emit({"replay": args.replay, "identical": same, "mismatches": mismatches,
               "accept_rate": new["accept_rate"]}, args)
        return 0 if same else 1
    params = {"algo": algo, "config": config, "instance": _instance_desc(args, _DEFAULT_KIND[algo]),
              "seed": args.seed, "trials": args.trials, "verbose": args.verbose}
    t0 = time.perf_counter()
    res = run_experiment(params, jobs)
    manifest = make_manifest(args.command, params, res, time.perf_counter() - t0)
    _emit(manifest, args)
    return 0


_DEFAULT_KIND = {"maxcut": "planted-maxcut", "e2lin": "planted-e2lin", "ulc": "planted-ulc"}


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ParameterError("missing " + ", ".join(missing))


def cmd_maxcut(args):
    if args.replay:
        return _run_tester(args, "maxcut", None)
    _need(args, "phi", "eps")
    rho = 0.5 - args.eps if args.half_approx else args.rho
    if rho is None:
        raise ParameterError("give --rho or --half-approx")
    config = {"phi": args.phi, "eps": args.eps, "rho": rho, "C_mc": args.C_mc,
              "xi_scale": args.xi_scale, "c_dist": args.c_dist, "c_rep": args.c_rep,
              "n_start_vertices": args.seeds, "mu_mode": args.mu_mode,
              "exact_diagnostics": args.exact_diagnostics}
    return _run_tester(args, "maxcut", config)


def cmd_e2lin(args):
    if args.replay:
        return _run_tester(args, "e2lin", None)
    _need(args, "q", "phi", "eps", "rho")
    config = {"phi": args.phi, "eps": args.eps, "rho": args.rho, "q": args.q,
              "lambda_rule": args.lambda_rule, "c_lambda": args.c_lambda, "variant": args.variant}
    cluster = {}
    for key in ("c_samples", "c_len", "theta_scale", "c_seeds"):
        val = getattr(args, key)
        if val is not None:
            cluster[key] = val
    if cluster:
        config["cluster"] = cluster
    return _run_tester(args, "e2lin", config)


def cmd_ulc(args):
    if args.replay:
        return _run_tester(args, "ulc", None)
    _need(args, "q", "phi", "eps", "rho")
    config = {"q": args.q, "d": args.d, "phi": args.phi, "eps": args.eps, "rho": args.rho,
              "oracle": args.oracle}
    if args.log10_c_thr is not None:
        config["log10_c_thr"] = args.log10_c_thr
    return _run_tester(args, "ulc", config)


# ----------------------------------------------------------------------
# sweeps


def cmd_verify(args):
    names = SUITES if args.suite == "all" else (args.suite,)
    report, lines, ok = {}, [], True
    for name in names:
        kw = {"seed": args.seed}
        if name in ("exact", "maxcut") and args.n_max is not None:
            kw["n_max"] = args.n_max
        results = run_suite(name, **kw)
        report[name] = [r.to_dict() for r in results]
        for r in results:
            lines.append(f"[{name}] {r.line()}")
            ok &= r.passed or r.informational
    for line in lines:
        print(line, file=sys.stderr)
    _emit({"suites": report, "all_pass": ok}, args)
    return 0


def _write_csv(rows, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(rows_to_csv(rows))


def cmd_calibrate(args):
    jobs = args.jobs if args.jobs is not None else default_jobs()
    res = calibrate(args.algo, args.n, args.trials, args.seed, args.target, jobs=jobs)
    _write_csv(res["rows"], args.csv_out)
    _emit(res, args)
    return 0


def cmd_profile(args):
    jobs = args.jobs if args.jobs is not None else default_jobs()
    ms = parse_m_range(args.m)
    cfg = {"phi": args.phi, "eps": args.eps, "rho": args.rho}
    if args.algo == "e2lin":
        cfg.update({"q": 2, "variant": "sublinear"})
    res = profile_queries(args.algo, ms, args.d, cfg, args.trials, args.seed, jobs,
                          phi_min=args.phi if args.algo == "maxcut" else 0.0)
    _write_csv(res["rows"], args.csv_out)
    if not args.fit:
        res.pop("slope")
        res.pop("intercept")
    if not args.json_out:
        sys.stdout.write(rows_to_csv(res["rows"]))
        if args.fit:
            print(f"# slope={res['slope']:.4f} intercept={res['intercept']:.4f}")
        return 0
    _emit(res, args)
    return 0


# ----------------------------------------------------------------------
# parser


def _common_tester(p, d_default=8):
    p.add_argument("--graph", help="graph file; otherwise an instance is generated per trial")
    p.add_argument("--instance", help="generated instance kind")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, default=d_default)
    p.add_argument("--instance-eps", type=float)
    p.add_argument("--phi-min", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int)
    p.add_argument("--replay", help="re-run a manifest and compare")
    p.add_argument("--verbose", action="store_true", help="keep full diagnostics per trial")
    p.add_argument("--json-out")


def build_parser():
    ap = _Parser(prog="sublin-csp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a certified instance")
    p.add_argument("--kind", required=True,
                   choices=("regular", "planted-maxcut", "planted-e2lin", "planted-ulc"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--phi-min", type=float, default=0.0)
    p.add_argument("--completion", default="random", choices=("random", "identity", "shift"))
    p.add_argument("--with-solution", action="store_true")
    p.add_argument("--out")
    p.add_argument("--json-out")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("maxcut-test", help="run the Max Cut tester")
    p.add_argument("--phi", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--half-approx", action="store_true", help="set rho = 1/2 - eps")
    p.add_argument("--seeds", type=int, default=defaults.MAXCUT["n_start_vertices"],
                   help="start vertices per run")
    p.add_argument("--C-mc", dest="C_mc", type=float, default=defaults.MAXCUT["C_mc"])
    p.add_argument("--xi-scale", type=float, default=defaults.MAXCUT["xi_scale"])
    p.add_argument("--c-dist", type=float, default=defaults.MAXCUT["c_dist"])
    p.add_argument("--c-rep", type=float, default=defaults.MAXCUT["c_rep"])
    p.add_argument("--mu-mode", default="exact", choices=("exact", "estimated"))
    p.add_argument("--exact-diagnostics", action="store_true")
    _common_tester(p)
    p.set_defaults(fn=cmd_maxcut)

    p = sub.add_parser("e2lin-test", help="run the Max E2Lin(q) tester")
    p.add_argument("--q", type=int)
    p.add_argument("--phi", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--variant", default="exact", choices=("exact", "sublinear"))
    p.add_argument("--lambda-rule", default="lemma", choices=("lemma", "algorithm"))
    p.add_argument("--c-lambda", type=float, default=defaults.E2LIN["c_lambda"])
    p.add_argument("--c-samples", type=float)
    p.add_argument("--c-len", type=float)
    p.add_argument("--c-seeds", type=float)
    p.add_argument("--theta-scale", type=float)
    _common_tester(p)
    p.set_defaults(fn=cmd_e2lin)

    p = sub.add_parser("ulc-test", help="run the Unique Label Cover tester")
    p.add_argument("--q", type=int)
    p.add_argument("--phi", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--oracle", default="exact-ref", choices=("exact-ref",))
    p.add_argument("--log10-c-thr", type=float)
    _common_tester(p, d_default=4)
    p.set_defaults(fn=cmd_ulc)

    p = sub.add_parser("oracle", help="exact brute-force quantities of a small graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--what", required=True,
                   choices=("spectrum", "conductance", "rho", "beta", "maxcut", "opt", "delta", "3col"))
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--v", type=int)
    p.add_argument("--t", type=int, default=10)
    p.add_argument("--json-out")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("verify-lemmas", help="exact verification suites")
    p.add_argument("--suite", default="all", choices=SUITES + ("all",))
    p.add_argument("--n-max", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json-out")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("calibrate", help="sweep tester constants")
    p.add_argument("--algo", required=True, choices=("maxcut", "e2lin", "ulc"))
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--target", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int)
    p.add_argument("--csv-out")
    p.add_argument("--json-out")
    p.set_defaults(fn=cmd_calibrate)

    p = sub.add_parser("profile-queries", help="queries versus m on random regular graphs")
    p.add_argument("--algo", default="maxcut", choices=("maxcut", "e2lin"))
    p.add_argument("--m", required=True, help="'1024..65536' (powers of two) or a comma list")
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--phi", type=float, default=0.14)
    p.add_argument("--eps", type=float, default=1e-4)
    p.add_argument("--rho", type=float, default=0.15)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fit", action="store_true")
    p.add_argument("--jobs", type=int)
    p.add_argument("--csv-out")
    p.add_argument("--json-out")
    p.set_defaults(fn=cmd_profile)

    p = sub.add_parser("hardness-gen", help="3-colouring instance from a 3-CNF")
    p.add_argument("--cnf", help="DIMACS file with three literals per clause")
    p.add_argument("--random-vars", type=int)
    p.add_argument("--clauses", type=int)
    p.add_argument("--k", type=int, default=2, help="bound on occurrences per literal")
    p.add_argument("--d-exp", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--certify", action="store_true", help="also report lambda_2, SAT and 3-colourability")
    p.add_argument("--out")
    p.add_argument("--json-out")
    p.set_defaults(fn=cmd_hardness_gen)
    return ap


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"sublin-csp: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (ParameterError, GraphFormatError, LimitExceeded) as exc:
        print(f"sublin-csp: error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, IsADirectoryError) as exc:
        print(f"sublin-csp: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"sublin-csp: runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


__all__ = ["run", "main", "build_parser"]
