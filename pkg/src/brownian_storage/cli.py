"""
Command-line front end.

Every subcommand prints JSON (or CSV with ``--out``) and returns 0 on
success, 1 on a domain error and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import acceptance, asymptotics, harness, laplace, variational
from .errors import BrownianStorageError
from .model import QueueParams
from .simulation import SimConfig


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _emit_text(text: str, out=None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_asym(a):
    params = QueueParams(a.c)
    if a.csv:
        _emit_text(asymptotics.evaluate_csv(Path(a.csv).read_text(), params), a.out)
    elif a.M is not None:
        if a.T is None:
            raise argparse.ArgumentTypeError("--M needs --T")
        _emit(asymptotics.phi_TM(a.T, a.M, params).to_dict(), a.out)
    elif a.u is not None:
        if a.T is None:
            raise argparse.ArgumentTypeError("--u needs --T")
        _emit({"u": a.u, "T": a.T, "asymptotic": asymptotics.theorem1_asymptotic(a.u, a.T, params),
               "exact": asymptotics.lemma1_exact_probability(a.u, a.T, params)}, a.out)
    else:
        raise argparse.ArgumentTypeError("give --M and --T, --u and --T, or --csv")


def cmd_mlp(a):
    params = QueueParams(a.c)
    mlp = variational.most_likely_path(a.T, a.M, params, a.n)
    text = variational.path_table(mlp, params)
    _emit_text(text, a.out)


def cmd_laplace(a):
    params = QueueParams(a.c)
    if a.mode == "transient" and a.x is None:
        raise argparse.ArgumentTypeError("--mode transient needs --x")
    if a.out:
        laplace.lt_table(a.gamma, params, a.mode, a.x, path=a.out)
        return
    fn = (lambda g: laplace.stationary_lt(g, params)) if a.mode == "stationary" else (
        lambda g: laplace.transient_lt(g, a.x, params))
    rows = [{"gamma": g, "lt": fn(g)} for g in a.gamma]
    _emit(rows[0] if len(rows) == 1 else rows)


def _sim(a, horizon):
    return SimConfig(h=min(a.h, horizon), horizon=horizon, seed=a.seed,
                     use_exact_step=not a.euler)


def cmd_sim_tail(a):
    params = QueueParams(a.c)
    rep = harness.estimate_pi(params, a.T, a.u, _sim(a, a.T), a.n, a.threads)
    out = rep.to_dict()
    if a.u > 0:
        out["asymptotic"] = asymptotics.theorem1_asymptotic(a.u, a.T, params)
    _emit(out, a.out)


def cmd_sim_busy(a):
    params = QueueParams(a.c)
    sim = SimConfig(h=a.h, horizon=1.0, seed=a.seed, use_bridge_correction=not a.no_bridge)
    rep = harness.busy_period_suite(params, sim, a.n, a.x, a.gamma, threads=a.threads)
    _emit(rep.to_dict(), a.out)
    return 0 if rep.passed else 1


def cmd_scaling(a):
    params = QueueParams(a.c)
    left, right = harness.scaling_check(params, a.T, a.M, a.n_superpose, _sim(a, a.T), a.n,
                                        a.threads)
    _emit({"left": left.to_dict(), "right": right.to_dict(), "overlap": left.overlaps(right)},
          a.out)


def cmd_regime(a):
    reports = [harness.run_experiment(spec, a.out, a.threads)
               for spec in harness.load_experiments(a.experiments)]
    if a.out is None:
        _emit(reports)
    else:
        print(json.dumps([r["name"] for r in reports]))


def cmd_validate(a):
    def show(res):
        print(res.line(), flush=True)

    results = acceptance.run_all(quick=a.quick, seed=a.seed, threads=a.threads, only=a.only,
                                 progress=show)
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} criteria passed")
    if a.out:
        _emit([{"key": r.key, "title": r.title, "passed": r.passed, "summary": r.summary,
                "wall_time": r.wall_time, "detail": r.detail} for r in results], a.out)
    return 0 if n_pass == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brownian-storage",
        description="Area under a reflected Brownian storage process: asymptotics, "
                    "transforms and Monte Carlo checks.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        p.set_defaults(func=func)
        p.add_argument("--c", type=float, required=True, help="drain rate (> 0)")
        p.add_argument("--out", help="write the result to this file instead of stdout")
        return p

    def mc(p, h=0.01):
        p.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: all cores; results do not depend on it)")
        p.add_argument("--h", type=float, default=h, help=f"time step (default {h:g})")

    p = add("asym", cmd_asym, "closed-form rates and tail approximations")
    p.add_argument("--T", type=float, help="horizon (or horizon scale with --M)")
    p.add_argument("--M", type=float, help="area level; prints phi(T, M) with its minimiser")
    p.add_argument("--u", type=float, help="threshold; prints the short-timescale approximation")
    p.add_argument("--csv", help="batch input CSV with columns u,T or T,M")

    p = add("mlp", cmd_mlp, "most likely input path and its workload (CSV: r,f_star,q)")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--n", type=int, default=1001, help="grid points (default 1001)")

    p = add("laplace", cmd_laplace, "Laplace transform of the busy-period area")
    p.add_argument("--gamma", type=_floats, required=True, help="comma-separated gammas (> 0)")
    p.add_argument("--mode", choices=("stationary", "transient"), default="stationary")
    p.add_argument("--x", type=float, help="start level for --mode transient")

    p = add("sim-tail", cmd_sim_tail, "Monte Carlo estimate of P(area over [0,T] > u)")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--euler", action="store_true", help="Euler step instead of the exact step")
    mc(p)

    p = add("sim-busy", cmd_sim_busy, "busy-period Monte Carlo against the closed forms")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--x", type=_floats, default=[0.5, 1.0, 2.0], help="start levels for E J(x)")
    p.add_argument("--gamma", type=_floats, default=[1.0], help="transform arguments")
    p.add_argument("--no-bridge", action="store_true", help="disable the crossing correction")
    mc(p, h=1e-4)

    p = add("scaling", cmd_scaling, "both sides of the many-sources scaling identity")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--n-superpose", type=int, required=True)
    p.add_argument("--n", type=int, default=1_000_000, help="replications per side")
    p.add_argument("--euler", action="store_true")
    mc(p)

    p = sub.add_parser("regime", help="run experiments from a JSON file",
                       description="Run experiments from a JSON file; writes <name>.json and "
                                   "<name>.csv into --out.")
    p.set_defaults(func=cmd_regime)
    p.add_argument("--experiments", required=True, help="JSON file (object or list)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("validate", help="run the acceptance suite",
                       description="Run the acceptance suite; exit 1 if any criterion fails.")
    p.set_defaults(func=cmd_validate)
    p.add_argument("--quick", action="store_true", help="smaller replication counts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--only", nargs="+", choices=list(acceptance.CRITERIA), help="subset of criteria")
    p.add_argument("--out", help="write a JSON report")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code = args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (BrownianStorageError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return int(code or 0)


def main():
    sys.exit(run())
