"""Elements and finitely generated submodules of the standard module A^k.

An element of A^k is stored per algebra block as a (k*n_i) x n_i complex
matrix (the k block components stacked vertically).  The algebra acts on the
right by block multiplication, and the A-valued inner product of x and y is
x_i^H y_i per block, which satisfies the four inner-product axioms exactly
up to rounding.

A finitely generated submodule reduces, per block, to a complex column
subspace applied columnwise: right multiplication only recombines columns
inside a block, so the module span of a generator set per block is "every
matrix whose columns lie in the complex span of all generator columns".
This reduction is a theorem of the representation; the test suite exercises
it rather than assuming it silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._linalg import orthonormal_columns, spectral_norm
from .algebra import AlgebraElement, BlockProfile, Scalar
from .errors import InvalidParameterError, InvariantViolationError, ShapeMismatchError

__all__ = ["ModuleShape", "ModuleElement", "Submodule", "pack_block_vectors"]

# orthonormality the cached bases must satisfy, checked at construction
BASIS_ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class ModuleShape:
    """The standard module A^k over a block profile."""

    profile: BlockProfile
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", int(self.k))
        if self.k < 1:
            raise InvalidParameterError("k must be >= 1")

    @property
    def block_dims(self) -> tuple[int, ...]:
        """Row count k*n_i of each block of an element."""
        return tuple(self.k * n for n in self.profile.sizes)

    @property
    def flat_dim(self) -> int:
        """Total complex dimension sum_i k*n_i*n_i of the module."""
        return sum(self.k * n * n for n in self.profile.sizes)


class ModuleElement:
    """One (k*n_i) x n_i complex matrix per block."""

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
        for n, dim, m in zip(shape.profile.sizes, shape.block_dims, mats):
            if m.shape != (dim, n):
                raise ShapeMismatchError(
                    f"module block of shape {m.shape} does not match {(dim, n)}")
        self.blocks = tuple(mats)

    @classmethod
    def zero(cls, shape: ModuleShape) -> "ModuleElement":
        return cls(shape, [np.zeros((d, n)) for n, d in zip(shape.profile.sizes, shape.block_dims)])

    @classmethod
    def standard_generator(cls, shape: ModuleShape, index: int) -> "ModuleElement":
        """e_j of A^k: the identity of A placed in component ``index``."""
        if not 0 <= index < shape.k:
            raise InvalidParameterError(f"generator index {index} outside 0..{shape.k - 1}")
        blocks = []
        for n, dim in zip(shape.profile.sizes, shape.block_dims):
            m = np.zeros((dim, n), dtype=complex)
            m[index * n:(index + 1) * n, :] = np.eye(n)
            blocks.append(m)
        return cls(shape, blocks)

    def _check_shape(self, other: "ModuleElement") -> None:
        if self.shape != other.shape:
            raise ShapeMismatchError("module shapes differ")

    def inner(self, other: "ModuleElement") -> AlgebraElement:
        """A-valued inner product <self, other>, conjugate-linear on the left."""
        self._check_shape(other)
        return AlgebraElement(
            self.shape.profile,
            [a.conj().T @ b for a, b in zip(self.blocks, other.blocks)])

    def norm(self) -> float:
        """Module norm; equals the largest block singular value."""
        return max(spectral_norm(b) for b in self.blocks)

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        if not isinstance(other, ModuleElement):
            return NotImplemented
        self._check_shape(other)
        return ModuleElement(self.shape, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        if not isinstance(other, ModuleElement):
            return NotImplemented
        self._check_shape(other)
        return ModuleElement(self.shape, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self) -> "ModuleElement":
        return ModuleElement(self.shape, [-b for b in self.blocks])

    def __mul__(self, other):
        """Right action x*a for an algebra element, or complex scaling."""
        if isinstance(other, AlgebraElement):
            if self.shape.profile != other.profile:
                raise ShapeMismatchError("profile mismatch in right action")
            return ModuleElement(
                self.shape, [x @ a for x, a in zip(self.blocks, other.blocks)])
        if isinstance(other, Scalar):
            return ModuleElement(self.shape, [b * complex(other) for b in self.blocks])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Scalar):
            return ModuleElement(self.shape, [complex(other) * b for b in self.blocks])
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return self.shape == other.shape and all(
            np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks))

    __hash__ = None

    def __repr__(self) -> str:
        return f"ModuleElement(shape=A^{self.shape.k} over {self.shape.profile.sizes})"


def pack_block_vectors(shape: ModuleShape,
                       per_block: Sequence[np.ndarray]) -> tuple[ModuleElement, ...]:
    """Pack per-block column collections into module generators.

    Block i contributes its columns n_i at a time: generator j receives
    columns [j*n_i, (j+1)*n_i) of block i, short slices padded with zero
    columns.  The generator count is max_i ceil(d_i / n_i).
    """
    sizes = shape.profile.sizes
    dims = shape.block_dims
    count = 0
    for n, cols in zip(sizes, per_block):
        count = max(count, math.ceil(cols.shape[1] / n))
    gens = []
    for j in range(count):
        blocks = []
        for n, dim, cols in zip(sizes, dims, per_block):
            seg = cols[:, j * n:(j + 1) * n]
            m = np.zeros((dim, n), dtype=complex)
            m[:, :seg.shape[1]] = seg
            blocks.append(m)
        gens.append(ModuleElement(shape, blocks))
    return tuple(gens)


class Submodule:
    """Finitely generated closed submodule with cached orthonormal block bases.

    The zero submodule is represented by empty bases; every operation accepts
    it.  Bases are computed eagerly so later reads are contention-free.
    """

    __slots__ = ("shape", "generators", "basis")

    def __init__(self, shape: ModuleShape, generators: Sequence[ModuleElement],
                 basis: Sequence[np.ndarray]) -> None:
        self.shape = shape
        self.generators = tuple(generators)
        mats = []
        for dim, b in zip(shape.block_dims, basis):
            m = np.array(b, dtype=complex)
            if m.ndim != 2 or m.shape[0] != dim:
                raise ShapeMismatchError(
                    f"basis block of shape {m.shape} does not match row count {dim}")
            gram = m.conj().T @ m
            if gram.size and spectral_norm(gram - np.eye(m.shape[1])) > BASIS_ORTHO_TOL:
                raise InvariantViolationError("submodule basis is not orthonormal")
            m.setflags(write=False)
            mats.append(m)
        if len(mats) != shape.profile.block_count:
            raise ShapeMismatchError("basis block count does not match the profile")
        self.basis = tuple(mats)

    @classmethod
    def from_generators(cls, generators: Sequence[ModuleElement]) -> "Submodule":
        """Orthonormalize the union of all generator block columns."""
        gens = tuple(generators)
        if not gens:
            raise InvalidParameterError("at least one generator is required")
        shape = gens[0].shape
        for g in gens[1:]:
            if g.shape != shape:
                raise ShapeMismatchError("generators must share one module shape")
        basis = []
        for i in range(shape.profile.block_count):
            cols = np.hstack([g.blocks[i] for g in gens])
            basis.append(orthonormal_columns(cols))
        return cls(shape, gens, basis)

    @classmethod
    def zero(cls, shape: ModuleShape) -> "Submodule":
        return cls(shape, (), [np.zeros((d, 0)) for d in shape.block_dims])

    @classmethod
    def full(cls, shape: ModuleShape) -> "Submodule":
        gens = tuple(ModuleElement.standard_generator(shape, j) for j in range(shape.k))
        return cls(shape, gens, [np.eye(d) for d in shape.block_dims])

    @property
    def dims(self) -> tuple[int, ...]:
        """Complex dimension of the block subspaces."""
        return tuple(b.shape[1] for b in self.basis)

    @property
    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims)

    def project(self, x: ModuleElement) -> ModuleElement:
        """Columnwise orthogonal projection of x onto the submodule."""
        if x.shape != self.shape:
            raise ShapeMismatchError("element shape does not match the submodule")
        return ModuleElement(
            self.shape,
            [b @ (b.conj().T @ m) for b, m in zip(self.basis, x.blocks)])

    def distance(self, x: ModuleElement) -> float:
        """inf over u in the submodule of ||x - u||.

        The infimum is attained at the orthogonal projection: the inner
        product of the residual with any member is zero, so <x-u, x-u>
        dominates <x-p, x-p> in the positive cone for every candidate u.
        """
        return (x - self.project(x)).norm()

    def contains(self, x: ModuleElement, tol: float = 1e-10) -> bool:
        return self.distance(x) <= tol

    def projector_blocks(self) -> tuple[np.ndarray, ...]:
        return tuple(b @ b.conj().T for b in self.basis)

    def orthogonal_complement(self) -> "Submodule":
        """The submodule of all elements orthogonal to this one."""
        comp = []
        for dim, b in zip(self.shape.block_dims, self.basis):
            if b.shape[1] == 0:
                comp.append(np.eye(dim, dtype=complex))
                continue
            u = np.linalg.svd(b, full_matrices=True)[0]
            comp.append(u[:, b.shape[1]:])
        gens = pack_block_vectors(self.shape, comp)
        return Submodule(self.shape, gens, comp)

    def __repr__(self) -> str:
        return f"Submodule(dims={self.dims} of {self.shape.block_dims})"
