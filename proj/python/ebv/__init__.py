"""Equal bi-vectorized parallel LU decomposition."""

from ._ebv import (
    ParameterError,
    ParseError,
    SingularDiagonalError,
    SingularPivotError,
    factorize_par,
    factorize_seq,
    generate_dense,
    generate_sparse,
    load_matrix_market,
    normalize_unit_diagonal,
    plan_dump,
    plan_stats,
    residual_inf,
    solve,
    solve_seq,
)

__all__ = [
    "ParameterError",
    "ParseError",
    "SingularDiagonalError",
    "SingularPivotError",
    "factorize_par",
    "factorize_seq",
    "generate_dense",
    "generate_sparse",
    "load_matrix_market",
    "normalize_unit_diagonal",
    "plan_dump",
    "plan_stats",
    "residual_inf",
    "solve",
    "solve_seq",
]
