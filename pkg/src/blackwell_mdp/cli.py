"""Command-line interface: ``blackwell-mdp {solve,bound,blackwell,gen,plotdata}``.

Reports are JSON documents on stdout. Exact rationals appear as ``"num/den"``
strings next to a 30-significant-digit decimal rendering. Exit codes: 0 on
success, 2 for unreadable input, 3 for invalid values, 4 when an enumeration
guard trips.
"""

from __future__ import annotations

import argparse
import csv
import decimal
import hashlib
import json
import sys
import time
from fractions import Fraction

from .blackwell import blackwell_optimal_policy, eta_bound, exact_blackwell_analysis
from .errors import (
    BlackwellError,
    GammaOutOfRange,
    InstanceError,
    ParseError,
    ResourceGuard,
)
from .exact_linear import ValuePolynomials, check_gamma
from .generators import IntervalSpec, example_one, interval_instance, random_instance
from .model import (
    MdpInstance,
    canonical_policy,
    check_policy,
    dumps_instance,
    enumerate_policies,
    load_json,
    parse_rational,
    rational_str,
    validate_instance,
)
from .robust import (
    UncertaintySet,
    load_uncertainty,
    robust_blackwell_analysis,
    robust_eta_bound,
    robust_policy_iteration,
    robust_representatives,
    robust_value_iteration,
    uniform_uncertainty,
)
from .roots import IsolatedRoot
from .solvers import exact_policy_iteration, float_value_iteration

EXIT_PARSE, EXIT_DOMAIN, EXIT_GUARD = 2, 3, 4

DIGITS = 30


# ------------------------------------------------------------- rendering

def decimal_str(x) -> str:
    x = Fraction(x)
    with decimal.localcontext() as ctx:
        ctx.prec = DIGITS
        d = decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator)
    return str(d)


def rational_json(x) -> dict:
    return {"exact": rational_str(x), "decimal": decimal_str(x)}


def certificate_json(root: IsolatedRoot) -> dict:
    """An exact value, or an isolating interval with its defining polynomial."""
    if root.is_exact:
        return {"exact": rational_str(root.lo), "decimal": decimal_str(root.lo)}
    return {"interval": [rational_str(root.lo), rational_str(root.hi)],
            "polynomial": list(root.poly),
            "decimal": decimal_str((root.lo + root.hi) / 2)}


def policy_label(pi) -> str:
    return "pi_" + "_".join(str(a) for a in pi)


def parse_policy_label(text: str) -> tuple:
    body = text[3:] if text.startswith("pi_") else text
    try:
        return tuple(int(a) for a in body.split("_"))
    except ValueError:
        raise ParseError(f"bad policy label {text!r}") from None


def policies_json(pis) -> list:
    return [list(pi) for pi in sorted(pis)]


def digest(M: MdpInstance, U: UncertaintySet | None) -> str:
    extra = {"uncertainty": U.to_dict()} if U is not None else None
    return hashlib.sha256(dumps_instance(M, extra).encode()).hexdigest()


# --------------------------------------------------------------- loading

def load(path: str, robust: bool = False):
    raw = load_json(path)
    M = validate_instance(raw)
    U = None
    if robust:
        if not isinstance(raw, dict) or "uncertainty" not in raw:
            raise ParseError(f"{path}: --robust needs an 'uncertainty' block")
        U = load_uncertainty(raw["uncertainty"], M)
    return M, U


def parse_gamma(text: str) -> Fraction:
    return check_gamma(parse_rational(text))


# -------------------------------------------------------------- commands

def cmd_solve(args, M, U) -> dict:
    if args.float:
        if not args.tol > 0:
            raise ParseError("--tol must be positive")
        gamma = float(parse_rational(args.gamma))
        if U is None:
            res = float_value_iteration(M, gamma, args.tol)
            values = list(res.values)
        else:
            res = robust_value_iteration(M, U, gamma, exact=False, tol=args.tol)
            values = list(res.worst_case_values)
        return {"mode": "float", "gamma": gamma, "tol": args.tol,
                "policy": list(res.policy), "values": values,
                "iterations": res.iterations}
    gamma = parse_gamma(args.gamma)
    if U is None:
        res = exact_policy_iteration(M, gamma)
        values = res.values
    else:
        res = robust_policy_iteration(M, U, gamma)
        values = res.worst_case_values
    return {"mode": "exact", "gamma": rational_json(gamma),
            "policy": list(res.policy),
            "values": [rational_json(v) for v in values],
            "iterations": res.iterations}


def cmd_bound(args, M, U) -> dict:
    b = eta_bound(M) if U is None else robust_eta_bound(M, U)
    return {"N": b.N, "L": b.L, "eta": rational_json(b.eta),
            "gamma_threshold": rational_json(b.gamma_threshold),
            "m": M.m if U is None else U.scale}


def analysis_json(A) -> dict:
    return {
        "gamma_bar": certificate_json(A.gamma_bar),
        "breakpoints": [certificate_json(b) for b in A.breakpoints],
        "breakpoint_sets": [policies_json(s) for s in A.breakpoint_sets],
        "intervals": [{"lo": certificate_json(r.lo), "hi": certificate_json(r.hi),
                       "sample": rational_str(r.sample),
                       "optimal_set": policies_json(r.optimal_set)}
                      for r in A.intervals],
        "gamma_bw": certificate_json(A.gamma_bw),
        "blackwell_set": policies_json(A.blackwell_set),
    }


def cmd_blackwell(args, M, U) -> dict:
    if args.method == "exact":
        if U is None:
            A = exact_blackwell_analysis(M)
        else:
            A = robust_blackwell_analysis(M, U)
        return {"method": "exact", **analysis_json(A)}
    bound = eta_bound(M) if U is None else robust_eta_bound(M, U)
    gamma = bound.gamma_threshold if args.gamma is None else parse_gamma(args.gamma)
    if U is None:
        policy = blackwell_optimal_policy(M, "reduction", gamma=gamma)
    else:
        if gamma < bound.gamma_threshold:
            raise GammaOutOfRange(f"gamma {gamma} is below the threshold 1 - eta(M)")
        res = robust_policy_iteration(M, U, gamma)
        policy = canonical_policy(M, res.policy, robust_representatives(M, U))
    return {"method": "reduction", "gamma": rational_json(gamma),
            "policy": list(policy)}


def build_family(args):
    if args.family == "example1":
        return example_one(), None
    if args.family == "intervals":
        if not args.breakpoints:
            raise InstanceError("--family intervals needs --breakpoints")
        pts = [parse_rational(x) for x in args.breakpoints.split(",")]
        return interval_instance(IntervalSpec(tuple(pts))), None
    if min(args.n_states, args.n_actions, args.m) < 1 or args.r_max < 0:
        raise InstanceError("random family needs positive sizes and --r-max >= 0")
    M = random_instance(args.n_states, args.n_actions, args.m, args.r_max, args.seed)
    U = None
    if args.norm:
        U = uniform_uncertainty(M, args.norm, Fraction(args.beta, M.m))
    return M, U


def cmd_gen(args) -> int:
    M, U = build_family(args)
    extra = {"uncertainty": U.to_dict()} if U is not None else None
    text = dumps_instance(M, extra)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_plotdata(args) -> int:
    M, _ = load(args.instance)
    if args.grid < 1:
        raise ParseError("--grid must be at least 1")
    if not 0 <= args.state < M.n_states:
        raise ParseError(f"--state must be in [0, {M.n_states})")
    if args.policies == "all":
        policies = list(enumerate_policies(M, canonical=True))
    else:
        policies = [check_policy(M, parse_policy_label(x))
                    for x in args.policies.split(",")]
    vp = ValuePolynomials(M)
    render = rational_str if args.exact else decimal_str
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["gamma"] + [policy_label(pi) for pi in policies])
        for i in range(args.grid):
            g = Fraction(i, args.grid)
            writer.writerow([render(g)] + [render(vp.values(pi, g)[args.state])
                                           for pi in policies])
    finally:
        if args.out:
            out.close()
    return 0


REPORTS = {"solve": cmd_solve, "bound": cmd_bound, "blackwell": cmd_blackwell}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blackwell-mdp",
        description="Exact Blackwell-optimality tools for rational MDPs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def report_flags(p, robust=True):
        p.add_argument("--instance", required=True, help="instance JSON file")
        if robust:
            p.add_argument("--robust", action="store_true",
                           help="use the instance's 'uncertainty' block")
        p.add_argument("--timing", action="store_true",
                       help="add wall-clock seconds to the report")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("solve", help="solve the discounted problem at one gamma")
    report_flags(p)
    p.add_argument("--gamma", required=True, help="discount factor, e.g. 9/10")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact policy iteration (default)")
    mode.add_argument("--float", action="store_true", help="floating value iteration")
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("bound", help="closed-form eta(M) and the threshold 1 - eta(M)")
    report_flags(p)

    p = sub.add_parser("blackwell", help="Blackwell-optimal policies")
    report_flags(p)
    p.add_argument("--method", choices=("exact", "reduction"), default="exact")
    p.add_argument("--gamma", help="reduction only: discount factor >= 1 - eta(M)")

    p = sub.add_parser("gen", help="write an instance file")
    p.add_argument("--family", choices=("example1", "intervals", "random"), required=True)
    p.add_argument("--breakpoints", help="intervals: comma list such as 0,1/5,2/5,3/5,4/5,1")
    p.add_argument("--n-states", type=int, default=3)
    p.add_argument("--n-actions", type=int, default=2)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--r-max", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--norm", choices=("l1", "linf"),
                   help="random: attach a uniform uncertainty block")
    p.add_argument("--beta", type=int, default=1, help="radius numerator over m")
    p.add_argument("--out")

    p = sub.add_parser("plotdata", help="CSV of value curves on a gamma grid")
    p.add_argument("--instance", required=True)
    p.add_argument("--policies", default="all",
                   help="'all' or comma list of labels such as pi_0_1")
    p.add_argument("--grid", type=int, default=101,
                   help="K: emit gamma = i/K for i = 0..K-1")
    p.add_argument("--state", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="emit num/den instead of decimals")
    p.add_argument("--out")
    return parser


def run(args) -> int:
    if args.command == "gen":
        return cmd_gen(args)
    if args.command == "plotdata":
        return cmd_plotdata(args)
    start = time.perf_counter()
    M, U = load(args.instance, getattr(args, "robust", False))
    results = REPORTS[args.command](args, M, U)
    flags = {k: v for k, v in sorted(vars(args).items())
             if k not in ("command", "out", "timing")}
    report = {"command": {"name": args.command, "flags": flags},
              "instance_digest": digest(M, U),
              "results": results}
    if args.timing:
        report["timing_seconds"] = time.perf_counter() - start
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceGuard as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except BlackwellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
