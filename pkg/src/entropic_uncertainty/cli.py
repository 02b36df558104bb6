"""Command-line entry point: ``entropic-ur <subcommand> ...``.

Exit status is 0 on success, 1 when ``verify`` finds a violated inequality
or a module error, and 2 for bad arguments or inputs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import bounds as bd
from .binning import BinGrid, bin_probabilities
from .entropy import discrete_entropy
from .errors import EntropicError
from .fourier import to_momentum
from .harness import (SweepConfig, build_state, emit_fig2_data, find_crossover, parse_state_arg,
                      run_verify, summarize, write_reports)
from .specfun import write_table


def _dump(obj) -> None:
    print(json.dumps(obj, indent=2, allow_nan=True))


def cmd_entropy(args) -> int:
    state = build_state(parse_state_arg(args.state), args.hbar)
    if args.momentum:
        state = to_momentum(state)
    xi0 = args.xi0
    if xi0 is None:
        xi0 = -args.delta / 2 if args.window is not None else 0.0
    grid = BinGrid(args.delta, xi0, args.window)
    dist = bin_probabilities(state, grid)
    if args.csv:
        dist.write_csv(args.csv)
    ent = discrete_entropy(dist)
    _dump({"state": args.state, "space": "momentum" if args.momentum else "position",
           "delta": args.delta, "xi0": xi0, "window": args.window, "entropy": ent.as_dict(),
           "covered_mass": dist.covered_mass, "tail_mass": dist.tail_mass})
    return 0


def cmd_bounds(args) -> int:
    acc = bd.Accuracies(args.dx, args.dp, args.hbar)
    out = {"dx": acc.dx, "dp": acc.dp, "hbar": acc.hbar, "gamma": acc.gamma,
           "bound_BBM": bd.bound_bbm(acc.hbar), "bound_B": bd.bound_b(acc),
           "bound_B_minus_3": bd.bound_b(acc) - 3.0}
    try:
        out["bound_R"] = bd.bound_r(acc)
        out["bound_max_BR"] = max(out["bound_B"], out["bound_R"])
    except EntropicError as exc:
        out["bound_R"] = None
        out["bound_R_error"] = str(exc)
    tails = bd.TailData(args.x2_tail, args.p2_tail, args.qx, args.qp)
    out["bound_L_case"] = bd.bound_l_case(acc, tails)
    out["bound_L"] = bd.bound_l(acc, tails)
    if args.state:
        report = bd.evaluate_bounds(build_state(parse_state_arg(args.state), acc.hbar), acc,
                                    tuple(args.window) if args.window else None,
                                    args.convention, label={"spec": args.state})
        out["report"] = report.to_dict()
    _dump(out)
    return 0 if not args.state or out["report"]["errors"] == [] else 1


def cmd_verify(args) -> int:
    config = SweepConfig.from_json(args.config) if args.config else SweepConfig()
    if args.workers is not None:
        config.workers = args.workers
    reports = run_verify(config)
    summary = summarize(reports)
    out_dir = args.out or config.output_path
    if out_dir:
        summary["path"] = str(write_reports(reports, config, out_dir))
    _dump(summary)
    return 0 if summary["ok"] else 1


def cmd_crossover(args) -> int:
    res = find_crossover(args.lo, args.hi, args.tol, args.truncation_scale)
    _dump({"gamma_star": res.gamma_star, "bracket": list(res.bracket), "residual": res.residual})
    return 0


def cmd_fig2(args) -> int:
    rows = emit_fig2_data(args.gamma_lo, args.gamma_hi, args.n, args.out)
    _dump({"rows": len(rows), "out": args.out})
    return 0


def cmd_spheroidal_table(args) -> int:
    cs = np.linspace(args.c_lo, args.c_hi, args.n)
    write_table(args.out, cs)
    _dump({"rows": int(cs.size), "out": args.out})
    return 0


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entropic-ur",
                                     description="Entropic uncertainty relations for coarse-grained "
                                                 "position and momentum measurements.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="coarse-grained entropy of one state on one grid")
    p.add_argument("--state", required=True, help="family:params, e.g. gaussian:1,0,0")
    p.add_argument("--delta", type=_positive, required=True)
    p.add_argument("--xi0", type=float, default=None,
                   help="bin offset (default 0, or -delta/2 with --window)")
    p.add_argument("--window", type=int, default=None, help="finite window k = -M..M")
    p.add_argument("--hbar", type=_positive, default=1.0)
    p.add_argument("--momentum", action="store_true", help="bin the momentum density instead")
    p.add_argument("--csv", help="also write the bin probabilities to this CSV file")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("bounds", help="evaluate the closed-form bounds")
    p.add_argument("--dx", type=_positive, required=True)
    p.add_argument("--dp", type=_positive, required=True)
    p.add_argument("--hbar", type=_positive, default=1.0)
    p.add_argument("--x2-tail", type=float, default=0.0)
    p.add_argument("--p2-tail", type=float, default=0.0)
    p.add_argument("--qx", type=float, default=0.0, help="position tail mass")
    p.add_argument("--qp", type=float, default=0.0, help="momentum tail mass")
    p.add_argument("--state", help="also run the full inequality check for this state")
    p.add_argument("--window", type=int, nargs=2, metavar=("M", "N"))
    p.add_argument("--convention", choices=("midpoint", "border"), default="midpoint")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run a sweep from a JSON config")
    p.add_argument("--config", help="JSON sweep config (default: built-in battery)")
    p.add_argument("--out", help="directory for reports.json")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("crossover", help="gamma where bounds B and R cross")
    p.add_argument("--lo", type=_positive, default=1.0)
    p.add_argument("--hi", type=_positive, default=20.0)
    p.add_argument("--tol", type=_positive, default=1e-10)
    p.add_argument("--truncation-scale", type=int, default=1)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("fig2", help="write gamma, B, R table and a plot script")
    p.add_argument("--gamma-lo", type=_positive, default=0.01)
    p.add_argument("--gamma-hi", type=_positive, default=50.0)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("spheroidal-table", help="tabulate eigenvalue and R00(c, 1)")
    p.add_argument("--c-lo", type=float, default=0.0)
    p.add_argument("--c-hi", type=float, default=20.0)
    p.add_argument("--n", type=int, default=41)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spheroidal_table)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EntropicError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
