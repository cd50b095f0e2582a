"""Command-line interface: ``semiop <command> ...``.

Exit codes: 0 success, 1 a check or assertion failed, 2 bad input,
3 weight not PSD, 4 dimension mismatch, 5 unknown check id.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import bounds, harness, io, semi
from .errors import (
    DimensionMismatch,
    HypothesisViolation,
    NotAdmissible,
    NotHermitian,
    NotPSD,
    UnknownCheck,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_PSD = 3
EXIT_DIM = 4
EXIT_UNKNOWN = 5


def _weight(args, d: int) -> semi.SemiContext:
    if args.identity:
        return semi.SemiContext.identity(d)
    return semi.SemiContext.from_weight(io.read_matrix(args.weight), args.rank_tol)


def _load(args):
    T = io.read_matrix(args.op)
    if T.shape[0] != T.shape[1]:
        raise DimensionMismatch(f"operator must be square, got {T.shape}")
    return _weight(args, T.shape[0]), T


def _vec(x: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in x]


def cmd_radius(args) -> int:
    ctx, T = _load(args)
    res = semi.a_numerical_radius(ctx, T, args.tol)
    try:
        real_part = semi.a_numerical_radius_zamani(ctx, T, args.tol)
    except NotAdmissible:
        real_part = None
    sampled = semi.sampling_lower_bound(ctx, T, args.samples, args.seed)
    _emit({
        "value": res.value,
        "theta_star": res.theta_star,
        "witness": _vec(res.witness),
        "method": res.method,
        "achieved_tol": res.achieved_tol,
        "cross_checks": {"real_part_sup": real_part, "sampling_lower": sampled},
    })
    return EXIT_OK


def cmd_adjoint(args) -> int:
    ctx, T = _load(args)
    admissible = semi.admits_a_adjoint(ctx, T)
    _emit({"admissible": admissible, "adjoint": io.matrix_to_obj(semi.a_adjoint(ctx, T))})
    return EXIT_OK


def cmd_seminorm(args) -> int:
    ctx, T = _load(args)
    _emit({"value": semi.a_seminorm(ctx, T)})
    return EXIT_OK


def cmd_spectral(args) -> int:
    ctx, T = _load(args)
    _emit({"value": semi.a_spectral_radius(ctx, T)})
    return EXIT_OK


def cmd_verify(args) -> int:
    ids = None if args.check == "all" else [args.check]
    reports = harness.run_catalog(ids, args.trials, args.seed, args.tol_eq, args.tol_ineq,
                                  dim=args.dim, blocks=args.blocks, rank=args.rank)
    text = io.dumps([r.to_dict() for r in reports]) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        for r in reports:
            print(f"{'PASS' if r.passed else 'FAIL'} {r.id} trials={r.trials} "
                  f"max_violation={r.max_violation:.3e}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_polybound(args) -> int:
    P = io.read_poly(args.poly)
    methods = ["thm53", "thm54"] if args.method == "both" else [args.method]
    reports = [bounds.BOUNDS[m](P, rho_check=args.rho_check) for m in methods]
    _emit([r.to_dict() for r in reports] if len(reports) > 1 else reports[0].to_dict())
    ok = all(r.holds is not False for r in reports)
    return EXIT_OK if ok else EXIT_FAIL


def _emit(obj) -> None:
    sys.stdout.write(io.dumps(obj) + "\n")


def _operator_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--weight", type=Path, help="matrix JSON file holding the PSD weight A")
    g.add_argument("--identity", action="store_true", help="use A = I")
    p.add_argument("--op", type=Path, required=True, help="matrix JSON file holding T")
    p.add_argument("--rank-tol", type=float, default=None,
                   help="relative eigenvalue cut-off for the range of A")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semiop",
                                     description="Weighted (semi-inner-product) operator toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log warnings to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("radius", help="A-numerical radius with cross-checks")
    _operator_args(p)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--samples", type=int, default=10_000, help="random vectors for the sampling bound")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_radius)

    for name, func, help_ in (("adjoint", cmd_adjoint, "A-adjoint A^+ T* A"),
                              ("seminorm", cmd_seminorm, "A-operator seminorm"),
                              ("spectral", cmd_spectral, "A-spectral radius")):
        p = sub.add_parser(name, help=help_)
        _operator_args(p)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run catalog checks on seeded random instances")
    p.add_argument("--check", default="all", help="check id or 'all'")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=None, help="block size d")
    p.add_argument("--blocks", type=int, default=None, help="block count n")
    p.add_argument("--rank", choices=harness.RANK_MODES, default=None)
    p.add_argument("--tol-eq", type=float, default=harness.TOL_EQ)
    p.add_argument("--tol-ineq", type=float, default=harness.TOL_INEQ)
    p.add_argument("--out", type=Path, default=None, help="write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("polybound", help="eigenvalue bounds for a monic matrix polynomial")
    p.add_argument("--poly", type=Path, required=True)
    p.add_argument("--method", choices=("thm53", "thm54", "both"), default="both")
    p.add_argument("--rho-check", action="store_true",
                   help="also estimate the spectral radius of the companion matrix")
    p.set_defaults(func=cmd_polybound)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UnknownCheck as exc:
        print(f"error: unknown check {exc.args[0]!r}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (NotPSD, NotHermitian) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PSD
    except DimensionMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIM
    except (io.FormatError, HypothesisViolation, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
