"""Command line entry point: ``schurindex {beta,sweep,oracle,frame} ...``.

Reports go to standard output as JSON (one object per line for ``sweep``).
Exit codes: 0 success, 1 oracle disagreement, 2 invalid input, 3 oracle
refusal, 4 internal invariant violation.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .arith import DEFAULT_Q0_BOUND, is_prime
from .errors import BoundExceededError, DomainError, InvariantViolation, OracleRefusal
from .field import cyclotomic, make_field, root_of_unity_exponent
from .frame import build_frame
from .index import IndexOptions, beta, oracle_prime
from .oracle import DEFAULT_MAX_COMBINATIONS, OracleLimits, brute_force_beta

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_INPUT = 2
EXIT_REFUSAL = 3
EXIT_INVARIANT = 4


def _field_from_args(args):
    if args.field is not None and args.cyclotomic is not None:
        raise DomainError("give either --field or --cyclotomic, not both")
    if args.cyclotomic is not None:
        return cyclotomic(args.cyclotomic, tiebreak=args.tiebreak)
    if args.field is None:
        raise DomainError("a field is required (--field or --cyclotomic)")
    try:
        spec = json.loads(args.field)
        conductor = int(spec["conductor"])
        gens = [int(g) for g in spec.get("generators", [])]
    except (ValueError, KeyError, TypeError) as exc:
        raise DomainError(f"bad field JSON: {exc}") from exc
    return make_field(conductor, gens, tiebreak=args.tiebreak)


def _options(args):
    return IndexOptions(
        tiebreak=args.tiebreak, q0_bound=args.q0_bound, trace=getattr(args, "trace", False),
    )


def _limits(args):
    return OracleLimits(max_combinations=args.max_combinations, workers=args.workers)


def _emit(obj, out):
    out.write(json.dumps(obj, sort_keys=False) + "\n")


def _oracle_block(K, p, r, options, limits):
    if root_of_unity_exponent(K, p) == 0:
        return {"beta": 0, "q": None, "skipped": "zeta_p not in K"}
    q = oracle_prime(K, p, r, options)
    return brute_force_beta(K, p, r, q, limits).to_json()


def _cmd_beta(args, out):
    K = _field_from_args(args)
    _emit(beta(K, args.p, args.r, _options(args)).to_json(), out)
    return EXIT_OK


def _cmd_frame(args, out):
    K = _field_from_args(args)
    if not is_prime(args.p):
        raise DomainError(f"p = {args.p} is not prime")
    if root_of_unity_exponent(K, args.p) == 0:
        raise DomainError(f"zeta_{args.p} is not in K")
    _emit(build_frame(K, args.p, tiebreak=args.tiebreak).to_json(), out)
    return EXIT_OK


def _cmd_oracle(args, out):
    K = _field_from_args(args)
    options = _options(args)
    report = beta(K, args.p, args.r, options).to_json()
    report["oracle"] = _oracle_block(K, args.p, args.r, options, _limits(args))
    _emit(report, out)
    return EXIT_OK if report["oracle"]["beta"] == report["beta"] else EXIT_DISAGREE


def _sweep_one(job):
    K, p, r, options = job
    return beta(K, p, r, options).to_json()


def _sweep_primes(args):
    if args.r:
        return list(args.r)
    if args.r_max is None:
        raise DomainError("sweep needs --r values or --r-max")
    return [x for x in range(3, args.r_max + 1) if is_prime(x)]


def _cmd_sweep(args, out):
    K = _field_from_args(args)
    options = _options(args)
    jobs = [(K, p, r, options) for p in args.p for r in _sweep_primes(args)]
    if args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            reports = pool.map(_sweep_one, jobs)
            for rep in reports:
                _emit(rep, out)
    else:
        for job in jobs:
            _emit(_sweep_one(job), out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="schurindex", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help='JSON {"conductor": n, "generators": [...]}')
    common.add_argument("--cyclotomic", type=int, metavar="N", help="use Q(zeta_N)")
    common.add_argument("--tiebreak", choices=["smallest", "largest"], default="smallest")
    common.add_argument("--q0-bound", type=int, default=DEFAULT_Q0_BOUND)
    common.add_argument("--max-combinations", type=int, default=DEFAULT_MAX_COMBINATIONS)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--trace", action="store_true", help="include the frame in the report")

    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("beta", "compute beta_p(r)"),
                           ("oracle", "compute beta_p(r) and cross-check by brute force")):
        cmd = sub.add_parser(name, parents=[common], help=helptext)
        cmd.add_argument("--p", type=int, required=True)
        cmd.add_argument("--r", type=int, required=True)
    sweep = sub.add_parser("sweep", parents=[common], help="grid over p and r, one JSON line each")
    sweep.add_argument("--p", type=int, nargs="+", required=True)
    sweep.add_argument("--r", type=int, nargs="*", default=[])
    sweep.add_argument("--r-max", type=int)
    frame = sub.add_parser("frame", parents=[common], help="print the frame for K and p")
    frame.add_argument("--p", type=int, required=True)
    return parser


COMMANDS = {"beta": _cmd_beta, "sweep": _cmd_sweep, "oracle": _cmd_oracle, "frame": _cmd_frame}


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except (DomainError, BoundExceededError) as exc:
        err.write(f"invalid input: {exc}\n")
        return EXIT_INPUT
    except OracleRefusal as exc:
        _emit({"error": "oracle refusal", "message": str(exc), "cardinality": exc.cardinality}, out)
        return EXIT_REFUSAL
    except InvariantViolation as exc:
        err.write(f"internal invariant violated: {exc}\n")
        return EXIT_INVARIANT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
