"""Command-line front end.

Exit status is 0 on success, 1 when a numerical procedure fails and 2 for
usage, parse and shape errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .decomp import polar, singular_values, svd_rect, svd_square
from .eigen import hermitian_eig
from .errors import NumericalError
from .fredholm import KERNELS, SOLUTIONS, fredholm_demo
from .lstsq import solve_least_squares
from .matfile import ParseError, ShapeError, guess_format, matrix_to_text, read_matrix, write_matrix
from .matrix import ComplexMatrix
from .pinv import ROUTES, PenroseReport, PinvOptions, pinv, verify_penrose

__all__ = ["build_parser", "run", "main"]

COMMANDS = ("pinv", "lstsq", "svd", "polar", "eig", "singular-values", "verify", "fredholm-demo")


class _Outcome:
    def __init__(self, route: str = "", penrose: PenroseReport | None = None, results: dict | None = None,
                 matrices: dict[str, ComplexMatrix] | None = None, failed: str | None = None):
        self.route = route
        self.penrose = penrose
        self.results = results
        self.matrices = matrices or {}
        self.failed = failed


def _options(args) -> PinvOptions:
    return PinvOptions(
        route=args.route,
        rank_tol=args.rank_tol,
        mu0=args.mu0,
        mu_factor=args.mu_factor,
        mu_steps=args.mu_steps,
        accept_tol=args.tol,
    )


def _tolerances(opts: PinvOptions) -> dict[str, Any]:
    return {
        "rank_tol": opts.rank_tol,
        "accept_tol": opts.accept_tol,
        "conv_tol": opts.conv_tol,
        "mu0": opts.mu0,
        "mu_factor": opts.mu_factor,
        "mu_steps": opts.mu_steps,
        "sep_tol": opts.sep_tol,
        "cluster_tol": opts.cluster_tol,
    }


def _load(path: str | None, flag: str) -> ComplexMatrix:
    if path is None:
        raise ValueError(f"{flag} is required")
    return read_matrix(path)


def _cmd_pinv(args, opts):
    result = pinv(_load(args.inp, "--in"), opts)
    failed = None if result.passed else f"Penrose check failed (worst residual {result.report.worst:.3e})"
    return _Outcome(result.route, result.report, {"passed": result.passed}, {"": result.matrix}, failed)


def _cmd_lstsq(args, opts):
    sol = solve_least_squares(_load(args.inp, "--in"), _load(args.rhs, "--rhs"), opts)
    return _Outcome(
        sol.route,
        sol.report,
        {"residual_norm": sol.residual_norm, "exact": sol.exact},
        {"": sol.x_min, "kernel": sol.kernel_projector},
    )


def _cmd_svd(args, opts):
    a = _load(args.inp, "--in")
    f = svd_square(a) if a.rows == a.cols else svd_rect(a)
    err = float(np.linalg.norm(f.reconstruct().array - a.array))
    return _Outcome("svd", None, {"singular_values": list(f.values), "reconstruction_error": err},
                    {"V": f.V, "S": f.S, "W": f.W})


def _cmd_polar(args, opts):
    a = _load(args.inp, "--in")
    f = polar(a)
    err = float(np.linalg.norm(f.reconstruct().array - a.array))
    return _Outcome("polar", None, {"reconstruction_error": err}, {"U": f.unitary, "P": f.psd_factor})


def _cmd_eig(args, opts):
    e = hermitian_eig(_load(args.inp, "--in"))
    return _Outcome("jacobi", None, {"eigenvalues": list(e.eigenvalues)}, {"": e.vectors})


def _cmd_singular_values(args, opts):
    return _Outcome("gram", None, {"singular_values": list(singular_values(_load(args.inp, "--in")))})


def _cmd_verify(args, opts):
    report, ok = verify_penrose(_load(args.inp, "--in"), _load(args.candidate, "--candidate"), opts.accept_tol)
    return _Outcome("verify", report, {"passed": ok})


def _cmd_fredholm(args, opts):
    res = fredholm_demo(args.kernel, args.solution, args.grid_n, opts)
    steps = [{"mu": s.mu, "relative_error": s.relative_error, "residual": s.residual} for s in res.steps]
    results = {
        "kernel": args.kernel,
        "solution": args.solution,
        "grid_n": args.grid_n,
        "steps": steps,
        "final_relative_error": steps[-1]["relative_error"],
    }
    return _Outcome("tikhonov", None, results, {"": ComplexMatrix(res.u_rec)})


HANDLERS = {
    "pinv": _cmd_pinv,
    "lstsq": _cmd_lstsq,
    "svd": _cmd_svd,
    "polar": _cmd_polar,
    "eig": _cmd_eig,
    "singular-values": _cmd_singular_values,
    "verify": _cmd_verify,
    "fredholm-demo": _cmd_fredholm,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="inp", metavar="PATH", help="input matrix (.csv or .json)")
    common.add_argument("--out", metavar="PATH", help="where to write the result matrix")
    common.add_argument("--format", choices=("csv", "json"), help="output matrix format (default: from --out suffix)")
    common.add_argument("--report", choices=("text", "json"), default="text")
    common.add_argument("--precision", type=int, default=17, help="significant digits in written matrices")
    common.add_argument("--route", choices=ROUTES, default="auto")
    common.add_argument("--rank-tol", type=float, default=PinvOptions.rank_tol)
    common.add_argument("--mu0", type=float, default=None)
    common.add_argument("--mu-factor", type=float, default=PinvOptions.mu_factor)
    common.add_argument("--mu-steps", type=int, default=PinvOptions.mu_steps)
    common.add_argument("--tol", type=float, default=PinvOptions.accept_tol, help="Penrose acceptance tolerance")

    parser = argparse.ArgumentParser(prog="mpinv", description="Moore-Penrose pseudoinverse toolkit")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "lstsq":
            p.add_argument("--rhs", metavar="PATH", required=True)
        elif name == "verify":
            p.add_argument("--candidate", metavar="PATH", required=True)
        elif name == "fredholm-demo":
            p.add_argument("--kernel", choices=tuple(KERNELS), default="gaussian")
            p.add_argument("--solution", choices=tuple(SOLUTIONS), default="sine")
            p.add_argument("--grid-n", type=int, default=32)
    return parser


def _output_paths(out: str, names: Sequence[str]) -> dict[str, Path]:
    base = Path(out)
    suffix = base.suffix or ".csv"
    return {n: base if n == "" else base.with_name(f"{base.stem}_{n}{suffix}") for n in names}


def _render_text(report: dict[str, Any]) -> str:
    lines = [f"command: {report['command']}", f"route: {report['route_used']}"]
    tol = ", ".join(f"{k}={v}" for k, v in report["tolerances"].items())
    lines.append(f"tolerances: {tol}")
    if report["penrose_residuals"] is not None:
        pr = report["penrose_residuals"]
        lines.append("penrose: " + ", ".join(f"{k}={pr[k]:.3e}" for k in ("r1", "r2", "r3", "r4", "scale")))
    for key, value in (report["results"] or {}).items():
        if key == "steps":
            lines.append("steps:")
            lines.extend(
                f"  mu={s['mu']:.3e} relative_error={s['relative_error']:.3e} residual={s['residual']:.3e}"
                for s in value
            )
        else:
            lines.append(f"{key}: {value}")
    lines.append(f"time: {report['timing_ms']:.1f} ms")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    """Execute one command; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    start = time.perf_counter()
    try:
        opts = _options(args)
        outcome = HANDLERS[args.command](args, opts)
    except (ParseError, ShapeError, ValueError, OSError) as exc:
        print(f"mpinv {args.command}: error: {exc}", file=stderr)
        return 2
    except NumericalError as exc:
        print(f"mpinv {args.command}: numerical failure: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    elapsed = (time.perf_counter() - start) * 1e3

    report = {
        "command": args.command,
        "route_used": outcome.route,
        "tolerances": _tolerances(opts),
        "penrose_residuals": outcome.penrose.as_dict() if outcome.penrose is not None else None,
        "results": outcome.results,
        "timing_ms": elapsed,
    }

    try:
        if args.out and outcome.matrices:
            fmt = args.format or guess_format(args.out)
            for name, path in _output_paths(args.out, list(outcome.matrices)).items():
                write_matrix(outcome.matrices[name], path, fmt, args.precision)
    except OSError as exc:
        print(f"mpinv {args.command}: error: {exc}", file=stderr)
        return 2

    if args.report == "json":
        print(json.dumps(report), file=stdout)
    else:
        if not args.out and "" in outcome.matrices:
            stdout.write(matrix_to_text(outcome.matrices[""], args.format or "csv", args.precision))
        print(_render_text(report), file=stdout)

    if outcome.failed:
        print(f"mpinv {args.command}: numerical failure: {outcome.failed}", file=stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
