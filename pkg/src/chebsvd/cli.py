"""Command-line surface: solve, count, filter-dump, verify and fetch.

Exit codes: 0 converged, 2 not converged (or verification mismatch),
3 stagnation suspected, 64 usage error, 65 unreadable or malformed data.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import collection
from .chebyshev import build_filter
from .oracle import MAX_ORACLE_COLS, count_in_interval, dense_full_svd
from .solver import (DEFAULT_SEED, IntervalError, SolverOptions,
                     SubspaceCollapseError, prepare_interval, solve)
from .sparse import (MatrixFormatError, estimate_spectrum_bounds,
                     read_matrix_market)

EXIT_OK = 0
EXIT_NOT_CONVERGED = 2
EXIT_STAGNATION = 3
EXIT_USAGE = 64
EXIT_DATA = 65

REPORT_MU_GRID = (1.1, 1.2, 1.5)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _interval(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected --interval a,b")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric interval {text!r}") from None
    if not a < b:
        raise argparse.ArgumentTypeError(f"need a < b in --interval, got {text!r}")
    return (a, b)


def _seed(text):
    if text == "random":
        return int(np.random.SeedSequence().entropy % (2 ** 63))
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--seed takes an integer or 'random', got {text!r}") from None


def _solver_flags(p, with_interval=True):
    if with_interval:
        p.add_argument("--interval", type=_interval, required=True,
                       metavar="A,B", help="target interval of singular values")
    p.add_argument("--tol", type=float, default=1e-8,
                   help="residual tolerance relative to the norm estimate")
    p.add_argument("--cap-D", dest="cap_d", type=float, default=2.0,
                   help="degree-selection constant (ignored with --degree)")
    p.add_argument("--degree", type=int, default=None,
                   help="explicit filter degree override")
    p.add_argument("--mu", type=float, default=1.2,
                   help="subspace oversampling factor p = ceil(mu * H_M)")
    p.add_argument("--dimension", type=int, default=None,
                   help="explicit subspace dimension override")
    p.add_argument("--samples", type=int, default=20,
                   help="number of Rademacher probes for the count estimate")
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED,
                   help="integer seed or 'random'")
    p.add_argument("--threads", type=int, default=0,
                   help="worker hint recorded in the report (0 = auto); "
                        "BLAS threading governs the dense kernels")
    p.add_argument("--bidiag-steps", type=int, default=30,
                   help="bidiagonalization steps for the spectrum bounds")
    p.add_argument("--max-iterations", type=int, default=100)
    p.add_argument("--output", default=None,
                   help="output path (reports default to <matrix>.report.json)")


def build_parser():
    parser = _Parser(prog="chebsvd",
                     description="Singular triplets in an interval by "
                                 "polynomial-filtered subspace iteration")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="compute triplets in the interval")
    p_solve.add_argument("matrix", help="Matrix Market file")
    _solver_flags(p_solve)
    p_solve.add_argument("--emit-vectors", action="store_true",
                         help="include singular vectors in the JSON report")
    p_solve.add_argument("--verify", action="store_true",
                         help="cross-check against the dense oracle "
                              "(small matrices only)")

    p_count = sub.add_parser("count", help="estimate how many singular values "
                                           "lie in the interval")
    p_count.add_argument("matrix")
    _solver_flags(p_count)

    p_dump = sub.add_parser("filter-dump", help="dump filter coefficients as CSV")
    p_dump.add_argument("matrix")
    _solver_flags(p_dump)

    p_verify = sub.add_parser("verify", help="solve, then compare against the "
                                             "dense oracle")
    p_verify.add_argument("matrix")
    _solver_flags(p_verify)
    p_verify.add_argument("--emit-vectors", action="store_true")

    p_fetch = sub.add_parser("fetch", help="download a collection matrix")
    p_fetch.add_argument("name", help="registered name or group/name")
    p_fetch.add_argument("--cache-dir", default=None)
    p_fetch.add_argument("--url-template",
                         default=collection.DEFAULT_URL_TEMPLATE)
    return parser


def _load_matrix(path):
    try:
        return read_matrix_market(path)
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from exc


def _options(args):
    return SolverOptions(D=args.cap_d, d_override=args.degree, mu=args.mu,
                         p_override=args.dimension, M=args.samples,
                         tol=args.tol, max_iterations=args.max_iterations,
                         seed=args.seed, bidiag_steps=args.bidiag_steps)


def _output_paths(args):
    if args.output:
        base = args.output
        if base.endswith(".json"):
            return base, base[:-5] + ".history.csv"
        return base + ".report.json", base + ".history.csv"
    stem = os.path.splitext(os.path.basename(args.matrix))[0]
    return stem + ".report.json", stem + ".history.csv"


def _run_verify(A, report, interval):
    if A.cols > MAX_ORACLE_COLS:
        print(f"verify: skipped, matrix exceeds the oracle cap of "
              f"{MAX_ORACLE_COLS} columns", file=sys.stderr)
        return True
    svd = dense_full_svd(A)
    a, b = interval
    expected = count_in_interval(svd, a, b)
    wanted = np.sort(svd.S[(svd.S >= a) & (svd.S <= b)])[::-1]
    got = np.array(sorted((t.sigma for t in report.triplets), reverse=True))
    ok = expected == len(got)
    if ok and expected:
        ok = bool(np.all(np.abs(wanted - got) <= 1e-8 * svd.S[0]))
    status = "ok" if ok else "MISMATCH"
    print(f"verify: oracle count {expected}, solver count {len(got)} "
          f"[{status}]")
    return ok


def cmd_solve(args, force_verify=False):
    A = _load_matrix(args.matrix)
    report = solve(A, args.interval[0], args.interval[1], _options(args))

    doc = json.loads(report.to_json(emit_vectors=getattr(args, "emit_vectors",
                                                         False)))
    doc["config"].update({"matrix": args.matrix, "threads": args.threads,
                          "command": args.command})
    json_path, csv_path = _output_paths(args)
    with open(json_path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    with open(csv_path, "w") as fh:
        fh.write(report.history_csv())

    print(f"{'sigma':>18} {'residual':>12}")
    for t in report.triplets:
        print(f"{t.sigma:>18.12f} {t.residual_norm:>12.3e}")
    status = "converged" if report.converged else "NOT converged"
    print(f"{status} in {len(report.history)} iterations, "
          f"{report.mv_total} MVs (p={report.p}, d={report.filter.degree})")
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"report: {json_path}  history: {csv_path}")

    if force_verify or getattr(args, "verify", False):
        if not _run_verify(A, report, args.interval):
            return EXIT_NOT_CONVERGED
    if report.converged:
        return EXIT_OK
    if any("stagnation" in w for w in report.warnings):
        return EXIT_STAGNATION
    return EXIT_NOT_CONVERGED


def cmd_count(args):
    A = _load_matrix(args.matrix)
    opts = _options(args)
    _, filt, est, warns = prepare_interval(A, args.interval[0],
                                           args.interval[1], opts)
    for w in warns:
        print(f"warning: {w}", file=sys.stderr)
    doc = {
        "H_M": est.value,
        "d": filt.degree,
        "M": est.samples,
        "seed": est.seed,
        "p": {f"{mu}": int(np.ceil(mu * est.value - 1e-9)) if est.value > 0
              else 1 for mu in REPORT_MU_GRID},
        "mv_cost": est.mv_cost,
    }
    text = json.dumps(doc, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK


def cmd_filter_dump(args):
    A = _load_matrix(args.matrix)
    opts = _options(args)
    bounds = estimate_spectrum_bounds(A, opts.bidiag_steps, opts.seed,
                                      opts.inflate)
    a = max(args.interval[0], bounds.sigma_min_est)
    b = min(args.interval[1], bounds.sigma_max_est)
    if not a < b:
        raise IntervalError(f"interval {args.interval} lies outside the "
                            f"estimated spectrum")
    if opts.d_override is not None:
        filt = build_filter(bounds, a, b, degree=opts.d_override)
    else:
        filt = build_filter(bounds, a, b, D=opts.D)
    lines = ["j,fourier,damping,combined"]
    for j in range(filt.degree + 1):
        lines.append(f"{j},{float(filt.fourier[j])!r},"
                     f"{float(filt.damping[j])!r},{float(filt.combined[j])!r}")
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_fetch(args):
    path = collection.fetch(args.name, cache_dir=args.cache_dir,
                            url_template=args.url_template)
    print(path)
    return EXIT_OK


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "verify":
            return cmd_solve(args, force_verify=True)
        if args.command == "count":
            return cmd_count(args)
        if args.command == "filter-dump":
            return cmd_filter_dump(args)
        if args.command == "fetch":
            return cmd_fetch(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MatrixFormatError, IntervalError, SubspaceCollapseError,
            collection.UnknownMatrixError, collection.FetchError,
            ValueError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
