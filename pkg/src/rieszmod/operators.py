"""Adjointable operators on the standard module A^k.

An operator is one (k*n_i) x (k*n_i) complex matrix per block, acting by
left multiplication on the stacked element blocks; this commutes with the
right algebra action, so every such matrix family is A-linear, and because
A^k is finitely generated every adjointable operator is compact.

Rank decisions (kernel dimensions, range dimensions, pseudoinverse cutoffs)
share the single convention of :mod:`rieszmod._linalg`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._linalg import (
    eigenvalues,
    pinv_matrix,
    range_null_split,
    spectral_norm,
)
from .algebra import AlgebraElement, Scalar
from .errors import InvalidParameterError, ShapeMismatchError
from .module import ModuleElement, ModuleShape, Submodule, pack_block_vectors

__all__ = [
    "ModuleOperator",
    "KernelData",
    "EPReport",
    "theta",
    "projection_operator",
    "theta_span_projector",
    "operator_norm_witness",
    "spectrum",
    "moore_penrose",
    "is_ep",
    "kernel_generators",
    "kernel_submodule",
    "range_submodule",
]


class ModuleOperator:
    """One (k*n_i) x (k*n_i) complex matrix per block."""

    __slots__ = ("shape", "blocks")

    def __init__(self, shape: ModuleShape, blocks: Sequence) -> None:
        self.shape = shape
        mats = []
        for b in blocks:
            m = np.array(b, dtype=complex)
            m.setflags(write=False)
            mats.append(m)
        if len(mats) != shape.profile.block_count:
            raise ShapeMismatchError(
                f"expected {shape.profile.block_count} blocks, got {len(mats)}")
        for dim, m in zip(shape.block_dims, mats):
            if m.shape != (dim, dim):
                raise ShapeMismatchError(
                    f"operator block of shape {m.shape} does not match {(dim, dim)}")
        self.blocks = tuple(mats)

    @classmethod
    def zero(cls, shape: ModuleShape) -> "ModuleOperator":
        return cls(shape, [np.zeros((d, d)) for d in shape.block_dims])

    @classmethod
    def identity(cls, shape: ModuleShape) -> "ModuleOperator":
        return cls(shape, [np.eye(d) for d in shape.block_dims])

    def _check_shape(self, other) -> None:
        if self.shape != other.shape:
            raise ShapeMismatchError("module shapes differ")

    def apply(self, x: ModuleElement) -> ModuleElement:
        self._check_shape(x)
        return ModuleElement(
            self.shape, [t @ b for t, b in zip(self.blocks, x.blocks)])

    __call__ = apply

    def __matmul__(self, other: "ModuleOperator") -> "ModuleOperator":
        if not isinstance(other, ModuleOperator):
            return NotImplemented
        self._check_shape(other)
        return ModuleOperator(
            self.shape, [a @ b for a, b in zip(self.blocks, other.blocks)])

    def __add__(self, other: "ModuleOperator") -> "ModuleOperator":
        if not isinstance(other, ModuleOperator):
            return NotImplemented
        self._check_shape(other)
        return ModuleOperator(
            self.shape, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other: "ModuleOperator") -> "ModuleOperator":
        if not isinstance(other, ModuleOperator):
            return NotImplemented
        self._check_shape(other)
        return ModuleOperator(
            self.shape, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self) -> "ModuleOperator":
        return ModuleOperator(self.shape, [-a for a in self.blocks])

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return ModuleOperator(self.shape, [a * complex(other) for a in self.blocks])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Scalar):
            return ModuleOperator(self.shape, [complex(other) * a for a in self.blocks])
        return NotImplemented

    def adjoint(self) -> "ModuleOperator":
        return ModuleOperator(self.shape, [a.conj().T for a in self.blocks])

    def power(self, n: int) -> "ModuleOperator":
        """n-th power by repeated multiplication (defective cases stay honest)."""
        if n < 0:
            raise InvalidParameterError("power must be >= 0")
        acc = ModuleOperator.identity(self.shape)
        for _ in range(n):
            acc = acc @ self
        return acc

    def norm(self) -> float:
        """Operator norm: max block spectral norm, which equals the sup of
        ||T x|| over unit elements x."""
        return max(spectral_norm(a) for a in self.blocks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleOperator):
            return NotImplemented
        return self.shape == other.shape and all(
            np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks))

    __hash__ = None

    def __repr__(self) -> str:
        return f"ModuleOperator(shape=A^{self.shape.k} over {self.shape.profile.sizes})"


def theta(x: ModuleElement, y: ModuleElement) -> ModuleOperator:
    """Rank-one operator z -> x <y, z>; per block x_i y_i^H."""
    if x.shape != y.shape:
        raise ShapeMismatchError("module shapes differ")
    return ModuleOperator(
        x.shape, [a @ b.conj().T for a, b in zip(x.blocks, y.blocks)])


def projection_operator(sub: Submodule) -> ModuleOperator:
    """The orthogonal projector onto a submodule as a module operator."""
    return ModuleOperator(sub.shape, sub.projector_blocks())


def operator_norm_witness(T: ModuleOperator) -> ModuleElement:
    """A unit element x with ||T x|| = ||T||.

    The top right singular vector of the largest block, packed into the first
    column of that block, attains the supremum defining the operator norm.
    """
    norms = [spectral_norm(b) for b in T.blocks]
    i = int(np.argmax(norms))
    vh = np.linalg.svd(T.blocks[i])[2]
    blocks = []
    for j, (n, dim) in enumerate(zip(T.shape.profile.sizes, T.shape.block_dims)):
        m = np.zeros((dim, n), dtype=complex)
        if j == i:
            m[:, 0] = vh[0].conj()
        blocks.append(m)
    return ModuleElement(T.shape, blocks)


def spectrum(T: ModuleOperator, tol: float = 1e-9) -> tuple[complex, ...]:
    """Eigenvalues over all blocks, deduplicated within tol.

    Values outside a tol-neighbourhood of the result leave lambda*I - T
    invertible with finite condition number.
    """
    if tol < 0:
        raise InvalidParameterError("tol must be >= 0")
    values: list[complex] = []
    for b in T.blocks:
        values.extend(complex(v) for v in eigenvalues(b))
    values.sort(key=lambda z: (z.real, z.imag))
    kept: list[complex] = []
    for z in values:
        if all(abs(z - w) > tol for w in kept):
            kept.append(z)
    return tuple(kept)


def moore_penrose(T: ModuleOperator, rank_tol: float = 0.0) -> ModuleOperator:
    """Blockwise SVD pseudoinverse; satisfies the four Penrose identities.

    rank_tol = 0 selects the automatic cutoff sigma_max * dim * 1e-12.
    """
    return ModuleOperator(T.shape, [pinv_matrix(b, rank_tol) for b in T.blocks])


@dataclass(frozen=True)
class EPReport:
    """Verdict of the EP test together with both residuals.

    ``commutator_residual`` is ||T T^+ - T^+ T||; ``projector_residual``
    compares the range projectors of T and T* computed from independent
    range bases.
    """

    is_ep: bool
    commutator_residual: float
    projector_residual: float
    tol: float

    def __bool__(self) -> bool:
        return self.is_ep


def is_ep(T: ModuleOperator, tol: float, rank_tol: float = 0.0) -> EPReport:
    """EP test: T commutes with its pseudoinverse within tol."""
    if tol <= 0:
        raise InvalidParameterError("tol must be > 0")
    dag = moore_penrose(T, rank_tol)
    commutator = (T @ dag - dag @ T).norm()
    p_ran = projection_operator(range_submodule(T, rank_tol))
    p_ran_adj = projection_operator(range_submodule(T.adjoint(), rank_tol))
    return EPReport(
        is_ep=commutator <= tol,
        commutator_residual=commutator,
        projector_residual=(p_ran - p_ran_adj).norm(),
        tol=tol,
    )


@dataclass(frozen=True)
class KernelData:
    """Kernel of an operator with module generators.

    ``dims`` is the complex kernel dimension per block; ``generators`` are
    built by packing an orthonormal null basis n_i columns at a time, and
    their module span reproduces the kernel.  ``count`` is
    max_i ceil(dims[i] / n_i) (0 for a trivial kernel).
    """

    dims: tuple[int, ...]
    generators: tuple[ModuleElement, ...]
    count: int


def _null_bases(T: ModuleOperator, rank_tol: float) -> list[np.ndarray]:
    return [range_null_split(b, rank_tol)[1] for b in T.blocks]


def kernel_generators(T: ModuleOperator, rank_tol: float = 0.0) -> KernelData:
    bases = _null_bases(T, rank_tol)
    gens = pack_block_vectors(T.shape, bases)
    return KernelData(
        dims=tuple(b.shape[1] for b in bases),
        generators=gens,
        count=len(gens),
    )


def kernel_submodule(T: ModuleOperator, rank_tol: float = 0.0) -> Submodule:
    """The kernel as a submodule, with generators consistent with
    :func:`kernel_generators`."""
    bases = _null_bases(T, rank_tol)
    gens = pack_block_vectors(T.shape, bases)
    return Submodule(T.shape, gens, bases)


def range_submodule(T: ModuleOperator, rank_tol: float = 0.0) -> Submodule:
    """The (closed) range as a submodule.

    The generators are the images of the standard module generators, whose
    module span is the range; the cached basis is the SVD column-space basis.
    """
    bases = [range_null_split(b, rank_tol)[0] for b in T.blocks]
    gens = tuple(
        T.apply(ModuleElement.standard_generator(T.shape, j))
        for j in range(T.shape.k))
    return Submodule(T.shape, gens, bases)


def theta_span_projector(shape: ModuleShape,
                         generators: Sequence[ModuleElement]) -> ModuleOperator:
    """The projector onto the module span of ``generators`` as a finite sum
    of rank-one operators.

    With Gamma the blockwise column concatenation of the generators and W the
    pseudoinverse of the Gram matrix Gamma^H Gamma, the projector equals
    sum_j theta(g_j, h_j) where h_j = sum_l g_l * W[l, j] (algebra-valued
    Gram coefficients).  The sum is assembled literally through
    :func:`theta` and the right action rather than as Gamma W Gamma^H, so it
    can serve as an independent reconstruction of an SVD-based projector.
    """
    gens = tuple(generators)
    if not gens:
        return ModuleOperator.zero(shape)
    sizes = shape.profile.sizes
    m = len(gens)
    w_blocks = []
    for i in range(shape.profile.block_count):
        gamma = np.hstack([g.blocks[i] for g in gens])
        w_blocks.append(pinv_matrix(gamma.conj().T @ gamma))
    acc = ModuleOperator.zero(shape)
    for j in range(m):
        partner = ModuleElement.zero(shape)
        for l in range(m):
            coeff = AlgebraElement(
                shape.profile,
                [w[l * n:(l + 1) * n, j * n:(j + 1) * n]
                 for n, w in zip(sizes, w_blocks)])
            partner = partner + gens[l] * coeff
        acc = acc + theta(gens[j], partner)
    return acc
