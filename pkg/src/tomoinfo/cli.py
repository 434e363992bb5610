"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 singular/incomplete design.
"""

import argparse
import csv
import io as _io
import math
import sys
from fractions import Fraction

import numpy as np

from . import io
from .bases import (
    CompositeDimensionError,
    SyntheticTableError,
    mub_prime,
    perturb_design,
    transition_table,
    two_value_table,
)
from .gram import (
    SingularDesignError,
    det_gamma0,
    forward_probabilities,
    info_report,
    optimize_design,
    reconstruct_state,
    two_value_reduced,
    two_value_spectrum,
)
from .hermitian import determinant, sym_eigen
from .lindley import average_info, marginal, pointwise_info

EXIT_INPUT = 2
EXIT_SINGULAR = 3


class InputError(Exception):
    pass


class Degenerate(Exception):
    """Carries a payload that is still written before exiting with code 3."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


def parse_c(text, n):
    text = text.strip()
    if text.startswith("c="):
        text = text[2:]
    if text == "auto":
        return Fraction(1, n * n)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse c={text!r}") from exc


def _drop(args, n):
    if args.drop_index is None:
        return n - 1
    if not 1 <= args.drop_index <= n:
        raise InputError(f"--drop-index must be in 1..{n}")
    return args.drop_index - 1


def _emit(text, args):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _log(msg):
    print(msg, file=sys.stderr)


def _require_n(args):
    if args.n is None:
        raise InputError("--n is required")
    if args.n < 2:
        raise InputError("--n must be >= 2")
    return args.n


def _mub(n):
    try:
        return mub_prime(n)
    except CompositeDimensionError as exc:
        raise InputError(str(exc)) from exc


def cmd_mub(args):
    n = _require_n(args)
    design = _mub(n)
    seeds = args.seed or [0]
    eps = args.eps[0] if args.eps else 0.0
    if eps:
        design = perturb_design(design, eps, seeds[0])
    s = transition_table(design).s
    off = ~np.eye(n + 1, dtype=bool)
    dev = float(np.abs(s[off] - 1.0 / n).max())
    _log(f"max |s - 1/n| over distinct bases: {dev:.3e}")
    _emit(io.dumps(io.design_to_dict(design)), args)


def _load_table(args):
    if args.two_value is not None:
        n = _require_n(args)
        try:
            return two_value_table(n, parse_c(args.two_value, n))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if not args.infile:
        raise InputError("give --in FILE or --two-value C")
    d = io.load_json(args.infile)
    if isinstance(d, dict) and "bases" in d:
        return transition_table(io.design_from_dict(d))
    if isinstance(d, dict) and "table" in d:
        return io.table_from_dict(d)
    raise InputError("input is neither a design nor a table")


def cmd_analyze(args):
    table = _load_table(args)
    rep = info_report(table, _drop(args, table.n))
    text = io.dumps(rep.to_dict())
    if rep.singular:
        raise Degenerate("design is incomplete (singular Gram matrix)", text)
    _emit(text, args)


def cmd_closed_form(args):
    n = _require_n(args)
    if args.c is None:
        raise InputError("--c is required")
    c = parse_c(args.c, n)
    try:
        tilde = two_value_reduced(n, c)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    spec = two_value_spectrum(n, c)
    expected = np.sort(np.repeat(spec.eigenvalues, spec.multiplicities))
    numeric = sym_eigen(tilde)
    out = {
        "n": n,
        "c": float(c),
        "eigenvalues": list(spec.eigenvalues),
        "multiplicities": list(spec.multiplicities),
        "closedDet": spec.determinant,
        "numericDet": determinant(tilde) + 0.0,
        "maxEigError": float(np.abs(numeric - expected).max()),
    }
    _emit(io.dumps(out), args)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def sweep_rows(n, eps_grid, seeds, drop=-1):
    base = _mub(n)
    rows = []
    for eps in sorted(eps_grid):
        for seed in sorted(seeds):
            rep = info_report(transition_table(perturb_design(base, eps, seed)), drop)
            rows.append(
                {
                    "eps": float(eps),
                    "seed": seed,
                    "epsilonMeasured": rep.epsilon,
                    "vd": rep.vd,
                    "infoLossNats": rep.infoLossNats,
                    "lowerBound": rep.lowerBound,
                    "boundHolds": rep.boundHolds,
                }
            )
    return rows


SWEEP_FIELDS = ["eps", "seed", "epsilonMeasured", "vd", "infoLossNats", "lowerBound", "boundHolds"]


def cmd_perturb_sweep(args):
    n = _require_n(args)
    eps = args.eps or [0.0, 1e-4, 1e-3, 1e-2]
    if any(e < 0 for e in eps):
        raise InputError("--eps values must be >= 0")
    rows = sweep_rows(n, eps, args.seed or list(range(20)), _drop(args, n))
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_FIELDS)
    for r in rows:
        w.writerow([_fmt(r[k]) for k in SWEEP_FIELDS])
    _emit(buf.getvalue(), args)
    bad = sum(not r["boundHolds"] for r in rows)
    if bad:
        _log(f"warning: volume lower bound violated in {bad} of {len(rows)} rows")


def cmd_reconstruct(args):
    if not args.infile or not args.probs:
        raise InputError("reconstruct needs --in DESIGN and --probs FILE")
    d = io.load_json(args.infile)
    if not isinstance(d, dict) or "bases" not in d:
        raise InputError("reconstruct needs a design with basis vectors")
    design = io.design_from_dict(d)
    p = io.probabilities_from_dict(io.load_json(args.probs))
    try:
        rho = reconstruct_state(p, design, _drop(args, design.n))
    except SingularDesignError as exc:
        raise Degenerate(str(exc)) from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    residual = float(np.abs(forward_probabilities(rho, design) - p).max())
    _log(f"round-trip residual: {residual:.3e}")
    _emit(io.dumps(io.state_to_dict(rho, residual)), args)


def cmd_lindley(args):
    if not args.infile:
        raise InputError("lindley needs --in EXPERIMENT")
    e = io.experiment_from_dict(io.load_json(args.infile))
    base = math.e if args.log_base == "e" else 2
    px = marginal(e)
    pointwise = [pointwise_info(e, x, base) if px[x] > 0 else None for x in range(len(px))]
    _emit(io.dumps({"pointwise": pointwise, "average": average_info(e, base)}), args)


def cmd_optimize(args):
    n = _require_n(args)
    start_eps = args.eps[0] if args.eps else 0.05
    target = 0.5 * math.log(det_gamma0(n))
    runs = []
    for seed in sorted(args.seed or [0]):
        start = perturb_design(_mub(n), start_eps, seed)
        res = optimize_design(start, steps=args.steps, step_size=args.step_size, seed=seed)
        runs.append(
            {
                "seed": seed,
                "initialInfo": res.trace[0],
                "finalInfo": res.trace[-1],
                "gap": target - res.trace[-1],
                "accepted": res.accepted,
                "trace": res.trace,
                "design": io.design_to_dict(res.design),
            }
        )
    _emit(io.dumps({"n": n, "targetInfo": target, "runs": runs}), args)


COMMANDS = {
    "mub": cmd_mub,
    "analyze": cmd_analyze,
    "closed-form": cmd_closed_form,
    "perturb-sweep": cmd_perturb_sweep,
    "reconstruct": cmd_reconstruct,
    "lindley": cmd_lindley,
    "optimize": cmd_optimize,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--c")
    common.add_argument("--eps", type=float, action="append")
    common.add_argument("--seed", type=int, action="append")
    common.add_argument("--log-base", choices=["2", "e"], default="2")
    common.add_argument("--drop-index", type=int, help="1-based outcome index dropped from every basis")
    common.add_argument("--in", dest="infile")
    common.add_argument("--out")

    parser = argparse.ArgumentParser(prog="tomoinfo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("mub", parents=[common], help="exact MUBs for prime n (optionally perturbed by --eps)")
    p = sub.add_parser("analyze", parents=[common], help="information report for a design or table")
    p.add_argument("--two-value", help="analyze the synthetic two-value table with this c (or 'auto' = 1/n^2)")
    sub.add_parser("closed-form", parents=[common], help="two-value spectrum, closed form vs numeric")
    sub.add_parser("perturb-sweep", parents=[common], help="CSV sweep over perturbed MUBs")
    p = sub.add_parser("reconstruct", parents=[common], help="linear-inversion state estimate")
    p.add_argument("--probs", help="JSON file with per-basis outcome probabilities")
    sub.add_parser("lindley", parents=[common], help="Lindley information of a discrete experiment")
    p = sub.add_parser("optimize", parents=[common], help="hill-climb the information from a perturbed MUB")
    p.add_argument("--steps", type=int, default=4000)
    p.add_argument("--step-size", type=float, default=0.1)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except Degenerate as exc:
        if exc.payload is not None:
            _emit(exc.payload, args)
        _log(f"error: {exc}")
        return EXIT_SINGULAR
    except (InputError, io.FormatError, SyntheticTableError) as exc:
        _log(f"error: {exc}")
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
