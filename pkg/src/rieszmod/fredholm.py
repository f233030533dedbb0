"""Solvability analysis and solution of lambda*x - C x = f.

Either L = lambda*I - C is injective, and then it is onto and the equation
has one solution for every f which depends continuously on f, or it is not,
and then the equation is solvable exactly when f is orthogonal to Ker(L*),
with solution set x0 + Ker(L).  Both solvability tests are computed and must
agree; the particular solution reported is the minimal-norm one x0 = L^+ f.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement
from .errors import (
    FredholmAlternativeError,
    InvalidParameterError,
    InvalidStateError,
    InvariantViolationError,
    NumericalFailureError,
    ShapeMismatchError,
)
from .module import ModuleElement
from .operators import KernelData, ModuleOperator, kernel_generators, moore_penrose
from .riesz import RieszReport, build_L, regularizer

__all__ = [
    "SolveReport",
    "analyze",
    "general_solution",
    "solve_unique",
    "solve_regularized",
]


@dataclass(frozen=True)
class SolveReport:
    """Outcome of the solvability analysis for one right-hand side.

    ``residual_range_test`` is ||f - L L^+ f||; ``residual_orthogonality_test``
    is the largest ||<g, f>|| over the generators g of Ker(L*).  Both verdicts
    are computed against tol * max(1, ||f||) and must agree.
    ``solution_norm_bound`` is ||L^{-1}|| when L is injective and makes the
    continuity of the solution in f quantitative.
    """

    lam: complex
    solvable: bool
    residual_range_test: float
    residual_orthogonality_test: float
    particular_solution: ModuleElement | None
    kernel: KernelData
    injective: bool
    solution_norm_bound: float | None
    tol: float
    operator: ModuleOperator
    rhs: ModuleElement


def analyze(C: ModuleOperator, lam: complex, f: ModuleElement,
            tol: float = 1e-8, rank_tol: float = 0.0) -> SolveReport:
    """Build L, test solvability both ways, and extract the solution data."""
    if tol <= 0:
        raise InvalidParameterError("tol must be > 0")
    L = build_L(C, lam)
    if f.shape != L.shape:
        raise ShapeMismatchError("right-hand side shape does not match the operator")
    dag = moore_penrose(L, rank_tol)
    x0 = dag(f)
    residual_range = (f - L(x0)).norm()
    adjoint_kernel = kernel_generators(L.adjoint(), rank_tol)
    residual_orth = max(
        (g.inner(f).norm() for g in adjoint_kernel.generators), default=0.0)
    scale = max(1.0, f.norm())
    by_range = residual_range <= tol * scale
    by_orth = residual_orth <= tol * scale
    if by_range != by_orth:
        raise InvariantViolationError(
            "the range-residual and kernel-orthogonality solvability tests disagree "
            f"(range {residual_range:.3e}, orthogonality {residual_orth:.3e}, "
            f"threshold {tol * scale:.3e})")
    kernel = kernel_generators(L, rank_tol)
    injective = all(d == 0 for d in kernel.dims)
    return SolveReport(
        lam=complex(lam),
        solvable=by_range,
        residual_range_test=residual_range,
        residual_orthogonality_test=residual_orth,
        particular_solution=x0 if by_range else None,
        kernel=kernel,
        injective=injective,
        solution_norm_bound=dag.norm() if injective else None,
        tol=tol,
        operator=L,
        rhs=f,
    )


def general_solution(report: SolveReport,
                     coefficients: list[AlgebraElement]) -> ModuleElement:
    """x0 + sum_k x_k * a_k for the kernel generators x_k.

    The coefficients act on the right because the module is a right module;
    any coefficient choice keeps the residual within the report tolerance.
    """
    if not report.solvable:
        raise InvalidStateError("the equation is unsolvable for this right-hand side")
    coeffs = tuple(coefficients)
    if len(coeffs) != report.kernel.count:
        raise ShapeMismatchError(
            f"expected {report.kernel.count} coefficients, got {len(coeffs)}")
    x = report.particular_solution
    for g, a in zip(report.kernel.generators, coeffs):
        x = x + g * a
    return x


def solve_unique(C: ModuleOperator, lam: complex, f: ModuleElement,
                 tol: float = 1e-8, rank_tol: float = 0.0) -> ModuleElement:
    """Direct solve when the homogeneous equation only has the zero solution."""
    if tol <= 0:
        raise InvalidParameterError("tol must be > 0")
    L = build_L(C, lam)
    if f.shape != L.shape:
        raise ShapeMismatchError("right-hand side shape does not match the operator")
    kernel = kernel_generators(L, rank_tol)
    if any(d > 0 for d in kernel.dims):
        raise FredholmAlternativeError(
            "the homogeneous equation has nontrivial solutions; "
            "use analyze()/general_solution() instead")
    try:
        blocks = [np.linalg.solve(a, b) for a, b in zip(L.blocks, f.blocks)]
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"linear solve failed: {exc}") from exc
    x = ModuleElement(f.shape, blocks)
    residual = (L(x) - f).norm()
    if residual > tol * max(1.0, f.norm()):
        raise NumericalFailureError(
            f"solve residual {residual:.3e} exceeds tolerance; conditioning broke down")
    return x


def solve_regularized(C: ModuleOperator, lam: complex, report: RieszReport,
                      f: ModuleElement, cond_limit: float = 1e10) -> ModuleElement:
    """Solve (L - P) y = f against the bijective regularized operator."""
    reg = regularizer(C, lam, report, cond_limit)
    if f.shape != reg.shape:
        raise ShapeMismatchError("right-hand side shape does not match the operator")
    try:
        blocks = [np.linalg.solve(a, b) for a, b in zip(reg.blocks, f.blocks)]
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"linear solve failed: {exc}") from exc
    return ModuleElement(f.shape, blocks)
