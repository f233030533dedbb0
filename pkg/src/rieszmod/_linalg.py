"""Dense-matrix helpers shared by the block-algebra layers.

All rank decisions in the package funnel through :func:`rank_cutoff`, so a
single convention (explicit cutoff, or ``sigma_max * dim * 1e-12`` when the
caller passes 0) governs kernel dimensions, range dimensions and chain
stabilization alike.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError, NumericalFailureError

# cutoff = sigma_max * max(matrix dims) * RANK_TOL_SCALE when rank_tol == 0
RANK_TOL_SCALE = 1e-12
# basis cutoff for generator orthonormalization: scale * largest column norm
COLUMN_TOL_SCALE = 1e-12


def spectral_norm(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def singular_values(m: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK hiccup
        raise NumericalFailureError(f"singular value decomposition failed: {exc}") from exc


def rank_cutoff(sigmas: np.ndarray, dim: int, rank_tol: float) -> float:
    """Singular-value cutoff for integer rank decisions."""
    if rank_tol < 0:
        raise InvalidParameterError("rank tolerance must be >= 0")
    if rank_tol > 0:
        return rank_tol
    smax = float(sigmas[0]) if len(sigmas) else 0.0
    return smax * dim * RANK_TOL_SCALE


def matrix_rank(m: np.ndarray, rank_tol: float = 0.0) -> int:
    s = singular_values(m)
    cut = rank_cutoff(s, max(m.shape), rank_tol)
    return int(np.sum(s > cut))


def range_null_split(m: np.ndarray, rank_tol: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases (range, null space) of one block matrix, via SVD."""
    try:
        u, s, vh = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"singular value decomposition failed: {exc}") from exc
    cut = rank_cutoff(s, max(m.shape), rank_tol)
    r = int(np.sum(s > cut))
    return u[:, :r], vh[r:].conj().T


def pinv_matrix(m: np.ndarray, rank_tol: float = 0.0) -> np.ndarray:
    """SVD pseudoinverse with the shared cutoff convention."""
    try:
        u, s, vh = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"singular value decomposition failed: {exc}") from exc
    cut = rank_cutoff(s, max(m.shape), rank_tol)
    inv = np.zeros_like(s)
    keep = s > cut
    inv[keep] = 1.0 / s[keep]
    return (vh.conj().T * inv) @ u.conj().T


def orthonormal_columns(cols: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the column space of ``cols``.

    Gram-Schmidt with column pivoting; ties break to the lowest column index
    and the rank cutoff is ``COLUMN_TOL_SCALE`` times the largest original
    column norm, so repeated or dependent columns are dropped.
    """
    n, m = cols.shape
    if m == 0:
        return np.zeros((n, 0), dtype=complex)
    work = np.array(cols, dtype=complex)
    cutoff = COLUMN_TOL_SCALE * float(np.max(np.linalg.norm(work, axis=0)))
    basis: list[np.ndarray] = []
    while len(basis) < n:
        norms = np.linalg.norm(work, axis=0)
        p = int(np.argmax(norms))  # np.argmax returns the first maximum
        if norms[p] <= cutoff:
            break
        q = work[:, p].copy()
        for b in basis:  # second orthogonalization pass, keeps B^H B at ~1e-15
            q -= b * (b.conj() @ q)
        nq = float(np.linalg.norm(q))
        if nq <= cutoff:
            work[:, p] = 0.0
            continue
        q /= nq
        basis.append(q)
        work -= np.outer(q, q.conj() @ work)
    if not basis:
        return np.zeros((n, 0), dtype=complex)
    return np.column_stack(basis)


def batched_spectral_norms(stack: np.ndarray) -> np.ndarray:
    """Largest singular value of each matrix in a (..., m, n) stack."""
    if stack.size == 0:
        return np.zeros(stack.shape[:-2])
    return np.linalg.svd(stack, compute_uv=False)[..., 0]


def eigenvalues(m: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigenvalue iteration failed: {exc}") from exc
