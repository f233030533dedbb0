"""Command-line front end.

Subcommands: ``analyze`` (chain index, splitting and residuals), ``solve``
(solvability and solutions for the right-hand side in the file), ``verify``
(the randomized invariant suites) and ``gen`` (emit deterministic problem
instances).  Exit codes: 0 analysis complete, 1 verification failed, 2 bad
input, 3 numerical failure; nothing else.

Reports go to standard output as text by default (JSON with ``--format
json``) and are written as JSON files when ``--output`` is given.  Output
never uses ANSI color, so ``NO_COLOR`` is trivially honored.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .algebra import BlockProfile
from .errors import InvalidParameterError, ProblemFormatError, RieszmodError
from .fredholm import analyze as fredholm_analyze
from .instances import GenSpec, gen_compact, random_module_element
from .operators import kernel_generators
from .problemio import (
    Problem,
    element_to_json,
    load_problem,
    problem_to_dict,
    serialize_report,
)
from .riesz import build_L, matrix_form_check, riesz_decomposition
from .verify import run_verification

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_NUMERICAL_FAILURE = 3

_DEFAULT_TOL = 1e-8


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None,
                        help="residual tolerance (default 1e-8 or the file override)")
    parser.add_argument("--rank-tol", type=float, default=None,
                        help="singular-value cutoff for rank decisions "
                             "(default: automatic, sigma_max * dim * 1e-12)")
    parser.add_argument("--lambda", dest="lam", type=float, nargs=2, default=None,
                        metavar=("RE", "IM"),
                        help="override lambda in L = lambda*I - C")
    parser.add_argument("--output", default=None, help="write the JSON report here")
    parser.add_argument("--format", choices=("json", "text"), default="text",
                        help="standard-output format")
    parser.add_argument("--lenient", action="store_true",
                        help="ignore unknown fields in the problem file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rieszmod",
        description="Chain index, EP splitting and Fredholm-alternative solver "
                    "for block operators on A^k")
    parser.add_argument("--version", action="version", version=f"rieszmod {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="index, splitting and residuals")
    p_an.add_argument("input", help="problem file (JSON)")
    _add_common(p_an)

    p_so = sub.add_parser("solve", help="solvability and solutions for f")
    p_so.add_argument("input", help="problem file (JSON) containing f")
    _add_common(p_so)

    p_ve = sub.add_parser("verify", help="run the invariant suites")
    p_ve.add_argument("--seed", type=int, default=1234)
    p_ve.add_argument("--count", type=int, default=200,
                      help="generated instances per suite (default 200)")
    p_ve.add_argument("--jobs", type=int, default=1,
                      help="parallel workers; the summary is identical for any value")
    p_ve.add_argument("--tol", type=float, default=0.0,
                      help="override the singular-value cutoff used for rank "
                           "decisions (0 = automatic); absurd values make the "
                           "suites fail, which is the documented failure mode")

    p_ge = sub.add_parser("gen", help="emit a problem instance")
    p_ge.add_argument("--seed", type=int, default=0)
    p_ge.add_argument("--blocks", type=int, nargs="+", required=True,
                      metavar="N", help="algebra block sizes")
    p_ge.add_argument("--k", type=int, required=True, help="module generator count")
    p_ge.add_argument("--target-r", type=int, default=None,
                      help="pin the stabilization index of I - C")
    p_ge.add_argument("--norm-cap", type=float, default=3.0)
    p_ge.add_argument("--with-rhs", action="store_true",
                      help="include a random right-hand side f")
    p_ge.add_argument("--lambda", dest="lam", type=float, nargs=2, default=None,
                      metavar=("RE", "IM"), help="lambda stored in the file")
    p_ge.add_argument("--output", default=None)
    return parser


def _resolve(problem: Problem, args) -> tuple[complex, float, float]:
    lam = complex(args.lam[0], args.lam[1]) if args.lam is not None else problem.lam
    tol = args.tol if args.tol is not None else (
        problem.tol if problem.tol is not None else _DEFAULT_TOL)
    rank_tol = args.rank_tol if args.rank_tol is not None else (
        problem.rank_tol if problem.rank_tol is not None else 0.0)
    if lam == 0:
        raise ProblemFormatError("lambda must be nonzero")
    if tol <= 0:
        raise ProblemFormatError("tol must be > 0")
    if rank_tol < 0:
        raise ProblemFormatError("rank tolerance must be >= 0")
    return lam, tol, rank_tol


def _emit(report: dict, args, renderer) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serialize_report(report))
            fh.write("\n")
    if args.format == "json":
        print(serialize_report(report))
    else:
        renderer(report)


def _cmd_analyze(args) -> int:
    problem = load_problem(args.input, strict=not args.lenient)
    lam, tol, rank_tol = _resolve(problem, args)
    started = time.perf_counter()
    report = riesz_decomposition(problem.operator, lam, rank_tol)
    kernel = kernel_generators(build_L(problem.operator, lam), rank_tol)
    form = matrix_form_check(report, tol)
    elapsed = time.perf_counter() - started
    data = {
        "tool_version": __version__,
        "problem": problem_to_dict(problem),
        "lambda": [lam.real, lam.imag],
        "tol": tol,
        "rank_tol": rank_tol,
        "r": report.r,
        "kernel_chain_dims": [list(row) for row in report.kernel_dims],
        "range_chain_dims": [list(row) for row in report.range_dims],
        "ep_residual": report.ep_residual,
        "decomposition_residual": report.decomposition_residual,
        "theta_reconstruction_residual": report.theta_residual,
        "power_kernel_generator_count": report.kernel.count,
        "kernel_generator_count": kernel.count,
        "kernel_generators": [element_to_json(g) for g in kernel.generators],
        "matrix_form": {
            "ok": form.ok,
            "invertible": form.invertible,
            "kernel_residual": form.kernel_residual,
            "condition_number": form.condition_number,
        },
        "timing_seconds": elapsed,
    }
    _emit(data, args, _render_analyze)
    return EXIT_OK


def _render_analyze(d: dict) -> None:
    print(f"rieszmod {d['tool_version']} analyze")
    print(f"lambda               : {d['lambda'][0]:+g}{d['lambda'][1]:+g}i")
    print(f"index r              : {d['r']}")
    print(f"kernel chain dims    : {d['kernel_chain_dims']}")
    print(f"range chain dims     : {d['range_chain_dims']}")
    print(f"EP residual          : {d['ep_residual']:.3e}")
    print(f"splitting residual   : {d['decomposition_residual']:.3e}")
    print(f"theta reconstruction : {d['theta_reconstruction_residual']:.3e}")
    print(f"Ker(L) generators m  : {d['kernel_generator_count']}")
    print(f"Ker(L^r) generators  : {d['power_kernel_generator_count']}")
    mf = d["matrix_form"]
    print(f"matrix form          : ok={mf['ok']} cond={mf['condition_number']:.6g}")
    print(f"tolerance used       : {d['tol']:g}")


def _cmd_solve(args) -> int:
    problem = load_problem(args.input, strict=not args.lenient)
    if problem.rhs is None:
        raise ProblemFormatError(f"{args.input}: solve needs a right-hand side 'f'")
    lam, tol, rank_tol = _resolve(problem, args)
    started = time.perf_counter()
    report = fredholm_analyze(problem.operator, lam, problem.rhs,
                              tol=tol, rank_tol=rank_tol)
    elapsed = time.perf_counter() - started
    data = {
        "tool_version": __version__,
        "problem": problem_to_dict(problem),
        "lambda": [lam.real, lam.imag],
        "tol": tol,
        "rank_tol": rank_tol,
        "solvable": report.solvable,
        "injective": report.injective,
        "residual_range_test": report.residual_range_test,
        "residual_orthogonality_test": report.residual_orthogonality_test,
        "kernel_generator_count": report.kernel.count,
        "kernel_generators": [element_to_json(g) for g in report.kernel.generators],
        "particular_solution": (
            element_to_json(report.particular_solution)
            if report.particular_solution is not None else None),
        "solution_norm_bound": report.solution_norm_bound,
        "timing_seconds": elapsed,
    }
    _emit(data, args, _render_solve)
    return EXIT_OK


def _render_solve(d: dict) -> None:
    print(f"rieszmod {d['tool_version']} solve")
    print(f"lambda               : {d['lambda'][0]:+g}{d['lambda'][1]:+g}i")
    print(f"injective            : {d['injective']}")
    print(f"solvable             : {d['solvable']}")
    print(f"range residual       : {d['residual_range_test']:.3e}")
    print(f"orthogonality resid. : {d['residual_orthogonality_test']:.3e}")
    print(f"kernel generators m  : {d['kernel_generator_count']}")
    if d["solution_norm_bound"] is not None:
        print(f"continuity bound     : {d['solution_norm_bound']:.6g}")
    if d["particular_solution"] is not None:
        print(f"particular solution  : {d['particular_solution']}")
    print(f"tolerance used       : {d['tol']:g}")


def _cmd_verify(args) -> int:
    if args.count < 1:
        raise ProblemFormatError("--count must be >= 1")
    if args.jobs < 1:
        raise ProblemFormatError("--jobs must be >= 1")
    if args.tol < 0:
        raise ProblemFormatError("--tol must be >= 0")
    started = time.perf_counter()
    results = run_verification(seed=args.seed, count=args.count,
                               jobs=args.jobs, rank_tol=args.tol)
    elapsed = time.perf_counter() - started
    all_passed = True
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        all_passed &= res.passed
        print(f"{status} {res.name:<24} checks={res.checks:<4} "
              f"max_residual={res.max_residual:.3e}")
        for msg in res.failures:
            print(f"     - {msg}")
    print(f"verify: {'all families passed' if all_passed else 'FAILURES detected'} "
          f"(seed={args.seed}, count={args.count})")
    print(f"elapsed: {elapsed:.1f}s", file=sys.stderr)
    return EXIT_OK if all_passed else EXIT_VERIFICATION_FAILED


def _cmd_gen(args) -> int:
    try:
        spec = GenSpec(seed=args.seed, profile=BlockProfile(tuple(args.blocks)),
                       k=args.k, target_r=args.target_r, norm_cap=args.norm_cap)
        operator = gen_compact(spec)
    except InvalidParameterError as exc:
        raise ProblemFormatError(str(exc)) from exc
    rhs = None
    if args.with_rhs:
        import numpy as np
        rng = np.random.Generator(np.random.PCG64(
            np.random.SeedSequence((args.seed, 0xF))))
        rhs = random_module_element(rng, spec.shape)
    lam = complex(args.lam[0], args.lam[1]) if args.lam is not None else 1.0 + 0.0j
    if lam == 0:
        raise ProblemFormatError("lambda must be nonzero")
    problem = Problem(operator=operator, lam=lam, rhs=rhs)
    text = serialize_report(problem_to_dict(problem))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
    else:
        print(text)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "analyze": _cmd_analyze,
        "solve": _cmd_solve,
        "verify": _cmd_verify,
        "gen": _cmd_gen,
    }
    try:
        return handlers[args.command](args)
    except (ProblemFormatError, InvalidParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except RieszmodError as exc:
        # numerical failures and invariant violations share the exit code
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE


if __name__ == "__main__":
    sys.exit(main())
