"""Matrix-free approximation of a matrix by a fixed sparsity pattern.

Given only matrix-vector product access to A and a binary pattern S, the
package computes a near-optimal approximation supported on S: a single block
of Gaussian sketch queries followed by one small least-squares solve per
row. It also ships the classic coloring/probing baselines, a boosted
variant with exponentially small failure probability, calibrated random
test matrices, and an experiment harness that reports error-versus-queries
curves as CSV plus rendered figures.
"""

from .coloring import (
    Coloring,
    banded_rademacher_estimate,
    column_intersection_graph,
    exact_recover_by_coloring,
    greedy_coloring,
    validate_coloring,
)
from .core import (
    GENERATOR_ID,
    RandomSeed,
    frobenius_norm,
    gaussian_matrix,
    hadamard_mask,
    least_squares_solve,
    rademacher_vector,
)
from .errors import (
    InsufficientQueriesError,
    MatrixMarketError,
    RankDeficiencyError,
    SingularMatrixError,
    UnderdeterminedSystemError,
    UndefinedEstimateError,
)
from .matrices import (
    model_problem_matrix,
    model_source_matrix,
    primes,
    trefethen_matrix,
    trefethen_source_matrix,
)
from .mmio import (
    read_dense,
    read_pattern,
    write_dense,
    write_pattern,
    write_sparse,
)
from .oracle import (
    CountingOracle,
    DenseOracle,
    InverseOracle,
    MatVecOracle,
    QueryCounter,
    SparseOracle,
)
from .pattern import (
    SparseApprox,
    SparsityPattern,
    banded_pattern,
    block_diagonal_pattern,
    circulant_band_pattern,
    diagonal_pattern,
    hard_coloring_pattern,
    multiband_pattern,
)
from .recover import (
    RecoveryResult,
    boosted_recover,
    fixed_sparse_recover,
    hutchinson_diagonal,
    median_distance_selection,
    recover_from_sketch,
)
from .sweep import (
    ErrorReport,
    ExperimentConfig,
    error_bounds,
    parse_matrix_spec,
    parse_pattern_spec,
    run_sweep,
)
from .wishart import wishart_expected_norms, wishart_matrix

__version__ = "0.1.0"

__all__ = [
    "Coloring",
    "CountingOracle",
    "DenseOracle",
    "ErrorReport",
    "ExperimentConfig",
    "GENERATOR_ID",
    "InsufficientQueriesError",
    "InverseOracle",
    "MatVecOracle",
    "MatrixMarketError",
    "QueryCounter",
    "RandomSeed",
    "RankDeficiencyError",
    "RecoveryResult",
    "SingularMatrixError",
    "SparseApprox",
    "SparseOracle",
    "SparsityPattern",
    "UndefinedEstimateError",
    "UnderdeterminedSystemError",
    "banded_pattern",
    "banded_rademacher_estimate",
    "block_diagonal_pattern",
    "boosted_recover",
    "circulant_band_pattern",
    "column_intersection_graph",
    "diagonal_pattern",
    "error_bounds",
    "exact_recover_by_coloring",
    "fixed_sparse_recover",
    "frobenius_norm",
    "gaussian_matrix",
    "greedy_coloring",
    "hadamard_mask",
    "hard_coloring_pattern",
    "hutchinson_diagonal",
    "least_squares_solve",
    "median_distance_selection",
    "model_problem_matrix",
    "model_source_matrix",
    "multiband_pattern",
    "parse_matrix_spec",
    "parse_pattern_spec",
    "primes",
    "rademacher_vector",
    "read_dense",
    "read_pattern",
    "recover_from_sketch",
    "run_sweep",
    "trefethen_matrix",
    "trefethen_source_matrix",
    "validate_coloring",
    "wishart_expected_norms",
    "wishart_matrix",
    "write_dense",
    "write_pattern",
    "write_sparse",
]
