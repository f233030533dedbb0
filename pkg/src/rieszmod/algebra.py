"""Finite-dimensional C*-algebras as direct sums of complex matrix blocks.

Elements are block-diagonal matrices stored one dense block at a time, with
double-precision complex entries.  Values are immutable after construction
(the backing arrays are locked), every operation is a pure function, and the
norm is the largest singular value over the blocks, which realizes the
C*-norm of the direct sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._linalg import spectral_norm
from .errors import InvalidParameterError, ShapeMismatchError

__all__ = ["BlockProfile", "AlgebraElement"]

Scalar = (int, float, complex, np.integer, np.floating, np.complexfloating)


@dataclass(frozen=True)
class BlockProfile:
    """Block dimensions [n_1, ..., n_b] of the algebra M_{n_1} (+) ... (+) M_{n_b}."""

    sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        if len(self.sizes) == 0:
            raise InvalidParameterError("a block profile needs at least one block")
        if any(n < 1 for n in self.sizes):
            raise InvalidParameterError(f"block sizes must be positive, got {self.sizes}")

    @property
    def block_count(self) -> int:
        return len(self.sizes)


def _freeze(blocks: Iterable[np.ndarray]) -> tuple[np.ndarray, ...]:
    out = []
    for b in blocks:
        m = np.array(b, dtype=complex)
        m.setflags(write=False)
        out.append(m)
    return tuple(out)


class AlgebraElement:
    """One complex n_i x n_i matrix per block of the profile."""

    __slots__ = ("profile", "blocks")

    def __init__(self, profile: BlockProfile, blocks: Sequence) -> None:
        self.profile = profile
        mats = _freeze(blocks)
        if len(mats) != profile.block_count:
            raise ShapeMismatchError(
                f"expected {profile.block_count} blocks, got {len(mats)}")
        for n, m in zip(profile.sizes, mats):
            if m.shape != (n, n):
                raise ShapeMismatchError(
                    f"algebra block of shape {m.shape} does not match profile block {n}x{n}")
        self.blocks = mats

    @classmethod
    def zero(cls, profile: BlockProfile) -> "AlgebraElement":
        return cls(profile, [np.zeros((n, n)) for n in profile.sizes])

    @classmethod
    def identity(cls, profile: BlockProfile) -> "AlgebraElement":
        return cls(profile, [np.eye(n) for n in profile.sizes])

    @classmethod
    def from_scalar(cls, profile: BlockProfile, value: complex) -> "AlgebraElement":
        """The scalar acting as value * identity."""
        return cls(profile, [complex(value) * np.eye(n) for n in profile.sizes])

    def _check_profile(self, other: "AlgebraElement") -> None:
        if self.profile != other.profile:
            raise ShapeMismatchError(
                f"profile mismatch: {self.profile.sizes} vs {other.profile.sizes}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_profile(other)
        return AlgebraElement(self.profile, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_profile(other)
        return AlgebraElement(self.profile, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.profile, [-a for a in self.blocks])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check_profile(other)
            return AlgebraElement(
                self.profile, [a @ b for a, b in zip(self.blocks, other.blocks)])
        if isinstance(other, Scalar):
            return AlgebraElement(self.profile, [a * complex(other) for a in self.blocks])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Scalar):
            return AlgebraElement(self.profile, [complex(other) * a for a in self.blocks])
        return NotImplemented

    def adjoint(self) -> "AlgebraElement":
        """Blockwise conjugate transpose."""
        return AlgebraElement(self.profile, [a.conj().T for a in self.blocks])

    def norm(self) -> float:
        """C*-norm: the largest singular value over the blocks."""
        return max(spectral_norm(a) for a in self.blocks)

    def is_positive(self, tol: float) -> bool:
        """True iff every block is Hermitian within tol with eigenvalues >= -tol."""
        if tol < 0:
            raise InvalidParameterError("tol must be >= 0")
        for a in self.blocks:
            if spectral_norm(a - a.conj().T) > tol:
                return False
            herm = 0.5 * (a + a.conj().T)
            if np.min(np.linalg.eigvalsh(herm)) < -tol:
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.profile == other.profile and all(
            np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks))

    __hash__ = None

    def __repr__(self) -> str:
        return f"AlgebraElement(profile={self.profile.sizes}, norm={self.norm():.6g})"
