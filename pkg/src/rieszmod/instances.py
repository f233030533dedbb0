"""Deterministic instance generation and the exact rational rank oracle.

All randomness flows through numpy's PCG64 generator seeded from the 64-bit
spec seed, so a fixed seed reproduces every instance bit for bit across
platforms.  Operators with a prescribed stabilization index are built as
C = I - S J S^{-1} with J carrying one nilpotent ladder of exactly that
index plus an invertible remainder, and S a well-conditioned random basis
change (redrawn while its condition number exceeds 1e3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Real

import numpy as np

from .algebra import AlgebraElement, BlockProfile
from .errors import InvalidParameterError, NumericalFailureError
from .module import ModuleElement, ModuleShape
from .operators import ModuleOperator

__all__ = [
    "GenSpec",
    "gen_compact",
    "standard_chain_specs",
    "random_algebra_element",
    "random_module_element",
    "random_operator",
    "exact_rank_oracle",
    "exact_nullity",
]

_COND_LIMIT = 1e3
_MAX_REDRAWS = 64


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one deterministic instance.

    ``target_r`` pins the stabilization index of I - C; it must not exceed
    the largest block dimension k * max(n_i), and when it is set the norm
    cap must exceed 1 (a singular I - C puts 1 into the spectrum of C, so
    ||C|| >= 1 is unavoidable).
    """

    seed: int
    profile: BlockProfile
    k: int
    target_r: int | None = None
    norm_cap: float = 3.0

    def __post_init__(self) -> None:
        if not 0 <= int(self.seed) < 2 ** 64:
            raise InvalidParameterError("seed must be an unsigned 64-bit integer")
        if self.k < 1:
            raise InvalidParameterError("k must be >= 1")
        if self.norm_cap <= 0:
            raise InvalidParameterError("norm_cap must be > 0")
        if self.target_r is not None:
            limit = self.k * max(self.profile.sizes)
            if not 0 <= self.target_r <= limit:
                raise InvalidParameterError(
                    f"target_r={self.target_r} is infeasible; the largest block "
                    f"dimension is {limit}")
            if self.norm_cap <= 1.0:
                raise InvalidParameterError(
                    "norm_cap must exceed 1 when target_r is set")

    @property
    def shape(self) -> ModuleShape:
        return ModuleShape(self.profile, self.k)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def random_algebra_element(rng: np.random.Generator, profile: BlockProfile,
                           scale: float = 1.0) -> AlgebraElement:
    return AlgebraElement(
        profile, [scale * _complex_normal(rng, (n, n)) for n in profile.sizes])


def random_module_element(rng: np.random.Generator, shape: ModuleShape,
                          scale: float = 1.0) -> ModuleElement:
    return ModuleElement(
        shape,
        [scale * _complex_normal(rng, (d, n))
         for n, d in zip(shape.profile.sizes, shape.block_dims)])


def random_operator(rng: np.random.Generator, shape: ModuleShape,
                    scale: float = 1.0) -> ModuleOperator:
    return ModuleOperator(
        shape, [scale * _complex_normal(rng, (d, d)) for d in shape.block_dims])


def _nilpotent_ladder(size: int) -> np.ndarray:
    m = np.zeros((size, size), dtype=complex)
    for i in range(size - 1):
        m[i, i + 1] = 1.0
    return m


def _seed_block(rng: np.random.Generator, dim: int, target_r: int,
                carries_index: bool) -> np.ndarray:
    """One block of J: optional exact-index nilpotent ladder, then a random
    mix of shorter ladders and invertible eigenvalues."""
    segments: list[np.ndarray] = []
    left = dim
    if carries_index and target_r >= 1:
        segments.append(_nilpotent_ladder(target_r))
        left -= target_r
    while left > 0:
        if target_r >= 1 and rng.random() < 0.3:
            size = int(rng.integers(1, min(target_r, left) + 1))
            segments.append(_nilpotent_ladder(size))
            left -= size
        else:
            magnitude = rng.uniform(0.5, 1.6)
            phase = rng.uniform(0.0, 2.0 * math.pi)
            segments.append(np.array([[magnitude * np.exp(1j * phase)]]))
            left -= 1
    block = np.zeros((dim, dim), dtype=complex)
    offset = 0
    for seg in segments:
        s = seg.shape[0]
        block[offset:offset + s, offset:offset + s] = seg
        offset += s
    return block


def _well_conditioned(rng: np.random.Generator, dim: int) -> np.ndarray:
    """A random basis change with condition number below ~1.7.

    Unitary times a bounded perturbation: singular values stay in
    [0.75, 1.25], so powering the conjugated operator never spreads the
    scale between the ladder part and the invertible part, which keeps
    every chain rank decision far from the noise floor.  The 1e3 guard is
    a backstop and should never trigger.
    """
    for _ in range(_MAX_REDRAWS):
        q = np.linalg.qr(_complex_normal(rng, (dim, dim)))[0]
        twist = _complex_normal(rng, (dim, dim))
        nrm = np.linalg.norm(twist, 2)
        if nrm > 0:
            twist *= 0.25 / nrm
        s = q @ (np.eye(dim) + twist)
        if np.linalg.cond(s) <= _COND_LIMIT:
            return s
    raise NumericalFailureError(
        f"could not draw a basis change with condition number <= {_COND_LIMIT}")


def gen_compact(spec: GenSpec, *, basis_change: bool = True) -> ModuleOperator:
    """Deterministic compact operator, optionally with a pinned index.

    Without ``target_r`` this is a random operator scaled under the norm
    cap.  With it, C = I - S (t J) S^{-1}: the ladder structure of J fixes
    the kernel chain of I - C exactly, and the positive factor t (applied
    only when needed) pulls ||C|| under the cap without touching any kernel.
    """
    rng = _rng(spec.seed)
    shape = spec.shape
    if spec.target_r is None:
        raw = random_operator(rng, shape)
        cap = spec.norm_cap * float(rng.uniform(0.3, 0.95))
        nrm = raw.norm()
        return raw * (cap / nrm) if nrm > 0 else raw

    dims = shape.block_dims
    carrier = next(i for i, d in enumerate(dims) if d >= spec.target_r)
    blocks = []
    for i, d in enumerate(dims):
        j_block = _seed_block(rng, d, spec.target_r, carries_index=(i == carrier))
        if basis_change:
            s = _well_conditioned(rng, d)
            j_block = s @ j_block @ np.linalg.inv(s)
        blocks.append(j_block)
    ladder_part = ModuleOperator(shape, blocks)
    C = ModuleOperator.identity(shape) - ladder_part
    if C.norm() > spec.norm_cap:
        t = 0.9 * (spec.norm_cap - 1.0) / ladder_part.norm()
        C = ModuleOperator.identity(shape) - t * ladder_part
    return C


def standard_chain_specs(master_seed: int, count: int,
                         max_target: int = 3) -> list[GenSpec]:
    """The instance mix used by the verification suite: up to two blocks of
    size <= 3, k <= 4, and targets spread over 0..max_target."""
    rng = _rng(master_seed)
    specs = []
    for _ in range(count):
        b = int(rng.integers(1, 3))
        sizes = tuple(int(rng.integers(1, 4)) for _ in range(b))
        k = int(rng.integers(1, 5))
        cap = min(max_target, k * max(sizes))
        target = int(rng.integers(0, cap + 1))
        seed = int(rng.integers(0, 2 ** 63))
        specs.append(GenSpec(seed=seed, profile=BlockProfile(sizes), k=k, target_r=target))
    return specs


# ---------------------------------------------------------------------------
# exact rank oracle over the Gaussian rationals

_GaussianRational = tuple[Fraction, Fraction]


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, Real):
        v = float(value)
        if not math.isfinite(v):
            raise InvalidParameterError(f"entry {value!r} is not exactly representable")
        return Fraction(v)  # binary floats are exact rationals
    raise InvalidParameterError(f"entry {value!r} is not exactly representable")


def _to_gaussian(value) -> _GaussianRational:
    if isinstance(value, (complex, np.complexfloating)):
        z = complex(value)
        return _to_fraction(z.real), _to_fraction(z.imag)
    return _to_fraction(value), Fraction(0)


def _is_zero(a: _GaussianRational) -> bool:
    return a[0] == 0 and a[1] == 0


def _mul(a: _GaussianRational, b: _GaussianRational) -> _GaussianRational:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _sub(a: _GaussianRational, b: _GaussianRational) -> _GaussianRational:
    return (a[0] - b[0], a[1] - b[1])


def _div(a: _GaussianRational, b: _GaussianRational) -> _GaussianRational:
    den = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / den, (a[1] * b[0] - a[0] * b[1]) / den)


def exact_rank_oracle(matrix) -> int:
    """Rank by exact row reduction over the Gaussian rationals.

    Entries must have exactly representable rational real and imaginary
    parts (ints, Fractions, binary floats, complex of those); anything else
    is rejected.  Independent of every floating-point rank decision in the
    package, which is the point.
    """
    rows = [[_to_gaussian(v) for v in row] for row in matrix]
    if not rows:
        return 0
    n_cols = len(rows[0])
    if any(len(r) != n_cols for r in rows):
        raise InvalidParameterError("matrix rows must have equal length")
    rank = 0
    for col in range(n_cols):
        pivot = next(
            (i for i in range(rank, len(rows)) if not _is_zero(rows[i][col])), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            e = rows[i][col]
            if _is_zero(e):
                continue
            q = _div(e, p)
            rows[i] = [
                _sub(a, _mul(q, b)) for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def exact_nullity(matrix) -> int:
    rows = list(matrix)
    n_cols = len(rows[0]) if rows else 0
    return n_cols - exact_rank_oracle(rows)
