"""Computable Riesz-Fredholm machinery on Hilbert C*-modules over
finite-dimensional coefficient algebras.

The module is always the standard A^k over A = M_{n_1} (+) ... (+) M_{n_b};
operators act blockwise by left multiplication.  The package computes the
stabilization index r of L = lambda*I - C, the orthogonal splitting of the
module into Ker(L^r) and Ran(L^r), EP and Moore-Penrose data, finitely
generated kernel generators, and solves lambda*x - C x = f through the
Fredholm alternative.
"""

__version__ = "0.1.0"

from .algebra import AlgebraElement, BlockProfile
from .errors import (
    FredholmAlternativeError,
    InvalidParameterError,
    InvalidStateError,
    InvariantViolationError,
    NumericalFailureError,
    ProblemFormatError,
    RieszmodError,
    ShapeMismatchError,
)
from .fredholm import SolveReport, analyze, general_solution, solve_regularized, solve_unique
from .instances import (
    GenSpec,
    exact_nullity,
    exact_rank_oracle,
    gen_compact,
    random_algebra_element,
    random_module_element,
    random_operator,
    standard_chain_specs,
)
from .module import ModuleElement, ModuleShape, Submodule, pack_block_vectors
from .operators import (
    EPReport,
    KernelData,
    ModuleOperator,
    is_ep,
    kernel_generators,
    kernel_submodule,
    moore_penrose,
    operator_norm_witness,
    projection_operator,
    range_submodule,
    spectrum,
    theta,
    theta_span_projector,
)
from .problemio import Problem, dump_problem, load_problem, problem_from_dict, problem_to_dict
from .property_h import (
    SequencePrefix,
    SubsequenceCluster,
    extract_convergent_subsequence,
    nearest_kernel_point,
    verify_compactness_transfer,
)
from .riesz import (
    MatrixFormVerdict,
    RankChain,
    RieszReport,
    ascent_index,
    binomial_compact_part,
    build_L,
    matrix_form_check,
    rank_chain,
    regularizer,
    riesz_decomposition,
)
from .verify import FamilyResult, run_verification

__all__ = [
    "__version__",
    "AlgebraElement",
    "BlockProfile",
    "ModuleShape",
    "ModuleElement",
    "Submodule",
    "pack_block_vectors",
    "ModuleOperator",
    "KernelData",
    "EPReport",
    "theta",
    "theta_span_projector",
    "projection_operator",
    "operator_norm_witness",
    "spectrum",
    "moore_penrose",
    "is_ep",
    "kernel_generators",
    "kernel_submodule",
    "range_submodule",
    "RankChain",
    "RieszReport",
    "MatrixFormVerdict",
    "build_L",
    "rank_chain",
    "ascent_index",
    "binomial_compact_part",
    "riesz_decomposition",
    "matrix_form_check",
    "regularizer",
    "SolveReport",
    "analyze",
    "general_solution",
    "solve_unique",
    "solve_regularized",
    "SequencePrefix",
    "SubsequenceCluster",
    "extract_convergent_subsequence",
    "verify_compactness_transfer",
    "nearest_kernel_point",
    "GenSpec",
    "gen_compact",
    "standard_chain_specs",
    "random_algebra_element",
    "random_module_element",
    "random_operator",
    "exact_rank_oracle",
    "exact_nullity",
    "Problem",
    "load_problem",
    "dump_problem",
    "problem_from_dict",
    "problem_to_dict",
    "FamilyResult",
    "run_verification",
    "RieszmodError",
    "ShapeMismatchError",
    "InvalidParameterError",
    "InvalidStateError",
    "FredholmAlternativeError",
    "NumericalFailureError",
    "InvariantViolationError",
    "ProblemFormatError",
]
