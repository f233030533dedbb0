"""Finite-prefix harness for weak-compactness behaviour of bounded sequences.

Over a finite-dimensional coefficient algebra every bounded sequence admits a
subsequence along which all inner products converge, and compact operators
turn that into norm convergence.  At desk scale "convergence" is
operationalized as eps-clustering of a finite prefix: grid bucketing of the
flattened coordinates finds a cluster of pairwise distance below eps, the
centroid serves as the limit candidate, and the transfer bound
||C zeta - C limit|| <= ||C|| * eps is then checked directly.  When the
prefix is too short for the pigeonhole argument the extraction still runs
best-effort and says so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._linalg import batched_spectral_norms
from .errors import InvalidParameterError, ShapeMismatchError
from .module import ModuleElement, ModuleShape
from .operators import ModuleOperator, kernel_submodule

__all__ = [
    "SequencePrefix",
    "SubsequenceCluster",
    "extract_convergent_subsequence",
    "verify_compactness_transfer",
    "nearest_kernel_point",
]

_NORM_SLACK = 1e-12


@dataclass(frozen=True)
class SequencePrefix:
    """A finite prefix of a bounded sequence: every element norm is <= bound."""

    shape: ModuleShape
    elements: tuple[ModuleElement, ...]
    bound: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        for el in self.elements:
            if el.shape != self.shape:
                raise ShapeMismatchError("sequence elements must share the declared shape")
            if el.norm() > self.bound + _NORM_SLACK:
                raise InvalidParameterError(
                    f"element norm {el.norm():.6g} exceeds the declared bound {self.bound}")

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class SubsequenceCluster:
    """Result of the eps-cluster extraction.

    ``indices`` is increasing; ``limit`` is the centroid of the selected
    elements; ``diameter`` is their exact maximal pairwise distance in the
    module norm; ``guarantee_held`` records whether the prefix length met
    the pigeonhole bound want * cells_per_axis^(2d) for the grid actually
    used, so a True flag always implies the cluster exists.
    """

    indices: tuple[int, ...]
    limit: ModuleElement
    diameter: float
    guarantee_held: bool


def _flatten(x: ModuleElement) -> np.ndarray:
    flat = np.concatenate([b.ravel() for b in x.blocks])
    return np.concatenate([flat.real, flat.imag])


def _stack_blocks(elements: Sequence[ModuleElement], block: int) -> np.ndarray:
    return np.stack([el.blocks[block] for el in elements])


def _pairwise_diameter(elements: Sequence[ModuleElement]) -> float:
    """Exact max pairwise module-norm distance, batched per block."""
    c = len(elements)
    if c < 2:
        return 0.0
    worst = np.zeros((c, c))
    for i in range(len(elements[0].blocks)):
        stack = _stack_blocks(elements, i)
        diffs = stack[:, None, :, :] - stack[None, :, :, :]
        worst = np.maximum(worst, batched_spectral_norms(diffs))
    return float(np.max(worst))


def extract_convergent_subsequence(seq: SequencePrefix, eps: float,
                                   want: int) -> SubsequenceCluster:
    """Find >= want indices whose elements lie within pairwise distance eps.

    Flattened real coordinates are bucketed into axis-aligned cubes of side
    eps / (2 sqrt(d)) with d the flattened complex dimension; coordinates on
    a cell boundary go to the lower cell.  Any two elements sharing a cell
    are within eps in the module norm (the Frobenius norm dominates it).
    The most populated cell wins, ties break to the lexicographically
    smallest cell index, and its centroid is the limit candidate, so every
    inner product probe <v, .> moves by at most ||v|| * eps across the
    cluster.
    """
    if eps <= 0:
        raise InvalidParameterError("eps must be > 0")
    if want < 2:
        raise InvalidParameterError("want must be >= 2")
    n = len(seq)
    if want > n:
        raise InvalidParameterError(f"cannot select {want} indices from {n} elements")
    d = seq.shape.flat_dim
    side = eps / (2.0 * math.sqrt(d))

    coords = np.stack([_flatten(el) for el in seq.elements])
    q = coords / side
    cells = np.floor(q).astype(np.int64)
    cells[q == np.floor(q)] -= 1  # boundary values belong to the lower cell

    buckets: dict[tuple[int, ...], list[int]] = {}
    for idx in range(n):
        buckets.setdefault(tuple(cells[idx]), []).append(idx)
    best_cell = max(buckets, key=lambda c: (len(buckets[c]), tuple(-v for v in c)))
    indices = tuple(buckets[best_cell])

    selected = [seq.elements[i] for i in indices]
    mean_blocks = [np.mean(_stack_blocks(selected, i), axis=0)
                   for i in range(len(selected[0].blocks))]
    limit = ModuleElement(seq.shape, mean_blocks)

    cells_per_axis = math.ceil(4.0 * seq.bound * math.sqrt(d) / eps)
    guarantee = n >= want * cells_per_axis ** (2 * d)
    return SubsequenceCluster(
        indices=indices,
        limit=limit,
        diameter=_pairwise_diameter(selected),
        guarantee_held=guarantee,
    )


def verify_compactness_transfer(seq: SequencePrefix, indices: Sequence[int],
                                limit: ModuleElement,
                                C: ModuleOperator) -> float:
    """max_j ||C zeta_{i_j} - C limit||, which is bounded by ||C|| times the
    largest distance of a selected element from the limit."""
    if limit.shape != seq.shape or C.shape != seq.shape:
        raise ShapeMismatchError("limit and operator must share the sequence shape")
    idx = [int(i) for i in indices]
    for i in idx:
        if not 0 <= i < len(seq):
            raise InvalidParameterError(f"index {i} outside the sequence prefix")
    if not idx:
        return 0.0
    worst = 0.0
    selected = [seq.elements[i] for i in idx]
    for b in range(len(limit.blocks)):
        stack = _stack_blocks(selected, b)
        images = C.blocks[b] @ (stack - limit.blocks[b])
        worst = max(worst, float(np.max(batched_spectral_norms(images))))
    return worst


def nearest_kernel_point(L: ModuleOperator, x: ModuleElement,
                         rank_tol: float = 0.0) -> tuple[ModuleElement, float]:
    """The kernel element closest to x and its distance.

    The orthogonal projection onto Ker(L) attains
    inf { ||x - u|| : u in Ker(L) }, so delta equals the distance of x from
    the kernel submodule by construction.
    """
    if x.shape != L.shape:
        raise ShapeMismatchError("element shape does not match the operator")
    sub = kernel_submodule(L, rank_tol)
    u = sub.project(x)
    return u, (x - u).norm()
