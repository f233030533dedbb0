"""Kernel and range chains of L = lambda*I - C and the induced splitting.

For nonzero lambda the chains of kernels Ker(L^n) and ranges Ran(L^n)
stabilize at one common index r; the module then splits orthogonally into
Ker(L^r) and Ran(L^r), L^r commutes with its pseudoinverse, the orthogonal
projector P onto Ker(L^r) is a finite sum of rank-one operators, and L - P
is a bijection.  This module computes all of that with explicit residuals.

General lambda is handled by rescaling: L = lambda * (I - C/lambda), and
powers of the two operators differ by nonzero scalar factors, so kernels,
ranges and the stabilization index are those of I - C/lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._linalg import RANK_TOL_SCALE, rank_cutoff, singular_values
from .errors import (
    InvalidParameterError,
    InvalidStateError,
    InvariantViolationError,
    NumericalFailureError,
)
from .module import Submodule
from .operators import (
    KernelData,
    ModuleOperator,
    kernel_generators,
    kernel_submodule,
    moore_penrose,
    projection_operator,
    range_submodule,
    theta_span_projector,
)

__all__ = [
    "RankChain",
    "RieszReport",
    "MatrixFormVerdict",
    "build_L",
    "power_rank_cutoff",
    "rank_chain",
    "ascent_index",
    "binomial_compact_part",
    "riesz_decomposition",
    "matrix_form_check",
    "regularizer",
]


def build_L(C: ModuleOperator, lam: complex) -> ModuleOperator:
    """lambda*I - C.  lambda = 0 is rejected: the chain theory needs it nonzero."""
    lam = complex(lam)
    if lam == 0:
        raise InvalidParameterError("lambda must be nonzero")
    return lam * ModuleOperator.identity(C.shape) - C


@dataclass(frozen=True)
class RankChain:
    """Per-block kernel and range dimensions of L^0, L^1, ...

    Rows are indexed [block][power].  The lists stop one step after
    stabilization: the confirming repeated entry is included unless the
    kernel has already filled the whole block, which settles the chain
    without another power.
    """

    kernel: tuple[tuple[int, ...], ...]
    range: tuple[tuple[int, ...], ...]
    stabilized_at: int

    @property
    def length(self) -> int:
        return len(self.kernel[0])


def power_rank_cutoff(L: ModuleOperator, m: int, rank_tol: float = 0.0) -> float:
    """Absolute singular-value cutoff for rank decisions on L^m.

    A per-matrix relative cutoff misreads a block that collapses to
    numerical zero (every nilpotent ladder does at its index): the rounding
    noise becomes full rank relative to itself.  ||L||^m dominates every
    singular value of L^m and bounds the accumulated multiplication error,
    so it is the sound anchor; an explicit rank_tol passes through.
    """
    if rank_tol < 0:
        raise InvalidParameterError("rank tolerance must be >= 0")
    if rank_tol > 0:
        return rank_tol
    return (L.norm() ** m) * max(L.shape.block_dims) * RANK_TOL_SCALE


def _block_nullities(op: ModuleOperator, cutoff: float) -> tuple[int, ...]:
    dims = []
    for b in op.blocks:
        s = singular_values(b)
        dims.append(b.shape[0] - int(np.sum(s > cutoff)))
    return tuple(dims)


def rank_chain(L: ModuleOperator, rank_tol: float = 0.0,
               max_len: int | None = None) -> RankChain:
    """Kernel/range dimension chains of the powers of L.

    Powers are formed by repeated multiplication and each power gets a fresh
    SVD rank decision, so defective (non-diagonalizable) operators are not
    routed through an eigendecomposition.  Stabilization is detected on the
    integer dimensions only.
    """
    dims = L.shape.block_dims
    if max_len is None:
        max_len = max(dims) + 1
    if max_len < 1:
        raise InvalidParameterError("max_len must be >= 1")
    rows: list[tuple[int, ...]] = []
    power = ModuleOperator.identity(L.shape)
    m = 0
    while True:
        rows.append(_block_nullities(power, power_rank_cutoff(L, m, rank_tol)))
        if m >= 1 and rows[m] == rows[m - 1]:
            stab = m - 1
            break
        if rows[m] == dims:  # kernel is everything, nothing left to grow
            stab = m
            break
        if m >= max_len:
            raise InvariantViolationError(
                f"kernel chain did not stabilize within {max_len} powers; "
                "the rank tolerance is not separating the singular values")
        power = power @ L
        m += 1
    kernel = tuple(tuple(row[i] for row in rows) for i in range(len(dims)))
    range_ = tuple(tuple(dims[i] - d for d in kernel[i]) for i in range(len(dims)))
    return RankChain(kernel=kernel, range=range_, stabilized_at=stab)


def _stabilization_of(rows: tuple[tuple[int, ...], ...], length: int) -> int:
    """First power at which every block's dimension equals the next entry;
    a chain truncated without a repeat stabilized at its last entry."""
    for m in range(length - 1):
        if all(row[m] == row[m + 1] for row in rows):
            return m
    return length - 1


def ascent_index(L: ModuleOperator, rank_tol: float = 0.0) -> int:
    """Smallest r with Ker(L^r) = Ker(L^{r+1}); the range chain must settle
    at the same power, and a mismatch raises, since it can only mean a bug
    or a tolerance breakdown, never a property of the operator."""
    chain = rank_chain(L, rank_tol)
    k_stab = _stabilization_of(chain.kernel, chain.length)
    r_stab = _stabilization_of(chain.range, chain.length)
    if k_stab != r_stab or k_stab != chain.stabilized_at:
        raise InvariantViolationError(
            f"kernel chain settles at {k_stab} but range chain at {r_stab}")
    return chain.stabilized_at


def binomial_compact_part(C: ModuleOperator, r: int) -> ModuleOperator:
    """The operator C_r with (I - C)^r = I - C_r.

    C_r = sum_{j=1..r} (-1)^(j-1) binom(r, j) C^j; r = 0 gives the zero
    operator.  For lambda != 1 callers rescale C by 1/lambda first.
    """
    if r < 0:
        raise InvalidParameterError("r must be >= 0")
    acc = ModuleOperator.zero(C.shape)
    cpow = ModuleOperator.identity(C.shape)
    for j in range(1, r + 1):
        cpow = cpow @ C
        sign = 1.0 if (j - 1) % 2 == 0 else -1.0
        acc = acc + (sign * math.comb(r, j)) * cpow
    return acc


@dataclass(frozen=True)
class RieszReport:
    """Everything the splitting yields for one (C, lambda) pair.

    ``kernel_dims``/``range_dims`` list the chain for powers 0..r+1 per
    block; ``kernel`` and ``range`` describe Ker(L^r) and Ran(L^r);
    ``projector`` is the orthogonal projector P onto Ker(L^r);
    ``compact_part`` is C_r for the rescaled operator C/lambda, so that
    (I - C/lambda)^r = I - compact_part; the residuals certify the EP
    property, the completeness of the splitting, and the rank-one
    reconstruction of P.
    """

    lam: complex
    r: int
    kernel_dims: tuple[tuple[int, ...], ...]
    range_dims: tuple[tuple[int, ...], ...]
    kernel: KernelData
    range: Submodule
    projector: ModuleOperator
    compact_part: ModuleOperator
    ep_residual: float
    decomposition_residual: float
    theta_residual: float
    operator: ModuleOperator
    rank_tol: float


def _padded(rows: tuple[tuple[int, ...], ...], length: int) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple(row[m] if m < len(row) else row[-1] for m in range(length))
        for row in rows)


def riesz_decomposition(C: ModuleOperator, lam: complex,
                        rank_tol: float = 0.0) -> RieszReport:
    """Index, splitting, projector and residuals for L = lambda*I - C."""
    lam = complex(lam)
    if lam == 0:
        raise InvalidParameterError("lambda must be nonzero")
    scaled = (1.0 / lam) * C
    M = build_L(scaled, 1.0)
    chain = rank_chain(M, rank_tol)
    r = chain.stabilized_at
    if _stabilization_of(chain.kernel, chain.length) != _stabilization_of(
            chain.range, chain.length):
        raise InvariantViolationError("kernel and range chains settle at different powers")

    Mr = M.power(r)
    # one absolute cutoff keeps the chain, kernel, range and pseudoinverse
    # rank decisions of M^r mutually consistent
    cut_r = power_rank_cutoff(M, r, rank_tol)
    kernel = kernel_generators(Mr, cut_r)
    ker_sub = kernel_submodule(Mr, cut_r)
    ran_sub = range_submodule(Mr, cut_r)
    projector = projection_operator(ker_sub)

    dag = moore_penrose(Mr, cut_r)
    ep_residual = (Mr @ dag - dag @ Mr).norm()
    identity = ModuleOperator.identity(C.shape)
    decomposition_residual = (
        projector + projection_operator(ran_sub) - identity).norm()
    theta_sum = theta_span_projector(C.shape, kernel.generators)
    theta_residual = (theta_sum - projector).norm()

    return RieszReport(
        lam=lam,
        r=r,
        kernel_dims=_padded(chain.kernel, r + 2),
        range_dims=_padded(chain.range, r + 2),
        kernel=kernel,
        range=ran_sub,
        projector=projector,
        compact_part=binomial_compact_part(scaled, r),
        ep_residual=ep_residual,
        decomposition_residual=decomposition_residual,
        theta_residual=theta_residual,
        operator=C,
        rank_tol=rank_tol,
    )


@dataclass(frozen=True)
class MatrixFormVerdict:
    """Outcome of the block-form check of L^r on the splitting.

    ``kernel_residual`` is ||L^r P||; ``condition_number`` belongs to the
    compression of L^r to Ran(L^r) in the cached basis.  The compression is
    verified invertible, not equal to the identity: L = diag(0, 2) at r = 1
    compresses to 2 on its range.
    """

    ok: bool
    invertible: bool
    kernel_residual: float
    condition_number: float


def matrix_form_check(report: RieszReport, tol: float) -> MatrixFormVerdict:
    L = build_L(report.operator, report.lam)
    Lr = L.power(report.r)
    kernel_residual = (Lr @ report.projector).norm()
    invertible = True
    cond = 1.0
    for basis, block in zip(report.range.basis, Lr.blocks):
        if basis.shape[1] == 0:  # nothing to compress, vacuously invertible
            continue
        comp = basis.conj().T @ block @ basis
        s = singular_values(comp)
        if s[-1] <= rank_cutoff(s, comp.shape[0], report.rank_tol):
            invertible = False
            cond = math.inf
        else:
            cond = max(cond, float(s[0] / s[-1]))
    return MatrixFormVerdict(
        ok=invertible and kernel_residual <= tol,
        invertible=invertible,
        kernel_residual=kernel_residual,
        condition_number=cond,
    )


def _match_report(C: ModuleOperator, lam: complex, report: RieszReport) -> None:
    if complex(lam) != report.lam or report.operator != C:
        raise InvalidStateError("the report belongs to a different (C, lambda) pair")


def regularizer(C: ModuleOperator, lam: complex, report: RieszReport,
                cond_limit: float = 1e10) -> ModuleOperator:
    """The bijection L - P (lambda*I - C - P for general lambda).

    Invertibility is verified: every block must have trivial kernel under
    the shared rank convention and condition number below ``cond_limit``;
    a violation would contradict the splitting and raises.
    """
    _match_report(C, lam, report)
    reg = build_L(C, lam) - report.projector
    worst = 1.0
    for b in reg.blocks:
        s = singular_values(b)
        cut = rank_cutoff(s, b.shape[0], report.rank_tol)
        if s[-1] <= cut:
            raise NumericalFailureError(
                "the regularized operator is numerically singular; "
                "this contradicts the splitting and signals tolerance breakdown")
        worst = max(worst, float(s[0] / s[-1]))
    if worst > cond_limit:
        raise NumericalFailureError(
            f"regularized operator condition number {worst:.3e} exceeds {cond_limit:.3e}")
    return reg
