"""JSON problem files and report serialization.

One problem per file.  Complex numbers are stored as [re, im] pairs, never
strings; the operator is a list of per-block (k*n_i) x (k*n_i) matrices and
the optional right-hand side a list of per-block (k*n_i) x n_i matrices.
Unknown fields are rejected unless lenient parsing is requested.  Parsing
after serializing reproduces the input bit for bit (floats round-trip
through their shortest decimal form).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .algebra import BlockProfile
from .errors import ProblemFormatError
from .module import ModuleElement, ModuleShape
from .operators import ModuleOperator

__all__ = [
    "Problem",
    "load_problem",
    "dump_problem",
    "problem_from_dict",
    "problem_to_dict",
    "parse_report",
    "serialize_report",
]

_PROBLEM_FIELDS = {"block_sizes", "k", "operator", "lambda", "f", "tolerances"}
_TOLERANCE_FIELDS = {"tol", "rank_tol"}


@dataclass(frozen=True)
class Problem:
    """One parsed problem: the operator C, lambda, and an optional f."""

    operator: ModuleOperator
    lam: complex = 1.0 + 0.0j
    rhs: ModuleElement | None = None
    tol: float | None = None
    rank_tol: float | None = None

    @property
    def shape(self) -> ModuleShape:
        return self.operator.shape


def _pair_to_complex(value, where: str) -> complex:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                       for v in value)):
        raise ProblemFormatError(f"{where}: expected an [re, im] pair, got {value!r}")
    return complex(float(value[0]), float(value[1]))


def _complex_to_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _matrix_from_json(rows, shape: tuple[int, int], where: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != shape[0]:
        raise ProblemFormatError(f"{where}: expected {shape[0]} rows")
    out = np.zeros(shape, dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise ProblemFormatError(f"{where} row {i}: expected {shape[1]} entries")
        for j, entry in enumerate(row):
            out[i, j] = _pair_to_complex(entry, f"{where} row {i} col {j}")
    return out


def _matrix_to_json(m: np.ndarray) -> list:
    return [[_complex_to_pair(m[i, j]) for j in range(m.shape[1])]
            for i in range(m.shape[0])]


def problem_from_dict(data: dict, strict: bool = True) -> Problem:
    if not isinstance(data, dict):
        raise ProblemFormatError("the problem file must contain a JSON object")
    if strict:
        unknown = set(data) - _PROBLEM_FIELDS
        if unknown:
            raise ProblemFormatError(
                f"unknown fields {sorted(unknown)}; pass --lenient to ignore them")
    for field in ("block_sizes", "k", "operator"):
        if field not in data:
            raise ProblemFormatError(f"missing required field '{field}'")

    sizes = data["block_sizes"]
    if (not isinstance(sizes, list) or not sizes
            or not all(isinstance(n, int) and not isinstance(n, bool) and n >= 1
                       for n in sizes)):
        raise ProblemFormatError("'block_sizes' must be a nonempty list of positive integers")
    k = data["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ProblemFormatError("'k' must be a positive integer")
    shape = ModuleShape(BlockProfile(tuple(sizes)), k)

    op_rows = data["operator"]
    if not isinstance(op_rows, list) or len(op_rows) != len(sizes):
        raise ProblemFormatError(
            f"'operator' must list one matrix per block ({len(sizes)} blocks)")
    blocks = [
        _matrix_from_json(rows, (dim, dim), f"operator block {i}")
        for i, (dim, rows) in enumerate(zip(shape.block_dims, op_rows))]
    operator = ModuleOperator(shape, blocks)

    lam = 1.0 + 0.0j
    if "lambda" in data:
        lam = _pair_to_complex(data["lambda"], "lambda")

    rhs = None
    if "f" in data and data["f"] is not None:
        f_rows = data["f"]
        if not isinstance(f_rows, list) or len(f_rows) != len(sizes):
            raise ProblemFormatError(
                f"'f' must list one matrix per block ({len(sizes)} blocks)")
        f_blocks = [
            _matrix_from_json(rows, (dim, n), f"f block {i}")
            for i, (n, dim, rows) in enumerate(zip(sizes, shape.block_dims, f_rows))]
        rhs = ModuleElement(shape, f_blocks)

    tol = rank_tol = None
    if "tolerances" in data:
        tols = data["tolerances"]
        if not isinstance(tols, dict):
            raise ProblemFormatError("'tolerances' must be an object")
        unknown = set(tols) - _TOLERANCE_FIELDS
        if strict and unknown:
            raise ProblemFormatError(f"unknown tolerance fields {sorted(unknown)}")
        for key in _TOLERANCE_FIELDS & set(tols):
            v = tols[key]
            if not isinstance(v, (int, float)) or isinstance(v, bool) or v < 0:
                raise ProblemFormatError(f"tolerance '{key}' must be a nonnegative number")
        tol = float(tols["tol"]) if "tol" in tols else None
        rank_tol = float(tols["rank_tol"]) if "rank_tol" in tols else None

    return Problem(operator=operator, lam=lam, rhs=rhs, tol=tol, rank_tol=rank_tol)


def problem_to_dict(problem: Problem) -> dict:
    data: dict = {
        "block_sizes": list(problem.shape.profile.sizes),
        "k": problem.shape.k,
        "operator": [_matrix_to_json(b) for b in problem.operator.blocks],
        "lambda": _complex_to_pair(problem.lam),
    }
    if problem.rhs is not None:
        data["f"] = [_matrix_to_json(b) for b in problem.rhs.blocks]
    tols = {}
    if problem.tol is not None:
        tols["tol"] = problem.tol
    if problem.rank_tol is not None:
        tols["rank_tol"] = problem.rank_tol
    if tols:
        data["tolerances"] = tols
    return data


def load_problem(path: str, strict: bool = True) -> Problem:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemFormatError(f"{path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        return problem_from_dict(data, strict=strict)
    except ProblemFormatError as exc:
        raise ProblemFormatError(f"{path}: {exc}") from exc


def dump_problem(problem: Problem, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem_to_dict(problem), fh, indent=2)
        fh.write("\n")


def element_to_json(x: ModuleElement) -> list:
    return [_matrix_to_json(b) for b in x.blocks]


def serialize_report(report: dict) -> str:
    """Reports are plain JSON-ready dicts; this is the canonical encoder."""
    return json.dumps(report, indent=2)


def parse_report(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"report:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
