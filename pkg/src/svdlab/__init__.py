"""Symmetric-matrix SVD laboratory: five classical decomposition backends
behind one result contract, plus eigenface and PERCLOS applications."""

from .backends import BACKENDS, get_backend
from .divide_conquer import (
    Deflation,
    SecularProblem,
    SecularSolution,
    SolverScheme,
    build_merge_weights,
    corrected_weights,
    dc_eig,
    dc_svd,
    deflate,
    scheme_from_id,
    secular_eigenvectors,
    secular_eval,
    secular_roots,
    solve_secular,
    split_rank_one,
)
from .errors import (
    DimensionMismatch,
    EmptyModel,
    EmptyWindow,
    InterlacingViolation,
    LengthMismatch,
    NoConvergence,
    PoleEvaluation,
    RankDeficiencyWarning,
    RankDeficient,
    SchemeFailure,
    ZeroCoupling,
    ZeroVector,
)
from .golub_kahan import BidiagonalMatrix, bidiagonalize, gk_svd, givens_rotation
from .hestenes import HestenesConfig, hestenes_svd
from .jacobi import JacobiConfig, jacobi_eig, jacobi_svd, rotation_for_pair
from .matrix import (
    EigResult,
    Permutation,
    SvdResult,
    SymmetricMatrix,
    TridiagonalMatrix,
    apply_permutation,
    givens,
    householder_vector,
    orth_tol,
    read_matrix_text,
    sorting_permutation,
    svd_from_eig,
    write_matrix_text,
)
from .tridiag_qr import QrConfig, symmetric_qr_eig, tridiag_qr_svd, tridiagonalize, wilkinson_shift

__version__ = "0.1.0"

__all__ = [
    "BACKENDS",
    "BidiagonalMatrix",
    "Deflation",
    "DimensionMismatch",
    "EigResult",
    "EmptyModel",
    "EmptyWindow",
    "HestenesConfig",
    "InterlacingViolation",
    "JacobiConfig",
    "LengthMismatch",
    "NoConvergence",
    "Permutation",
    "PoleEvaluation",
    "QrConfig",
    "RankDeficiencyWarning",
    "RankDeficient",
    "SchemeFailure",
    "SecularProblem",
    "SecularSolution",
    "SolverScheme",
    "SvdResult",
    "SymmetricMatrix",
    "TridiagonalMatrix",
    "ZeroCoupling",
    "ZeroVector",
    "apply_permutation",
    "bidiagonalize",
    "build_merge_weights",
    "corrected_weights",
    "dc_eig",
    "dc_svd",
    "deflate",
    "get_backend",
    "givens",
    "givens_rotation",
    "gk_svd",
    "hestenes_svd",
    "householder_vector",
    "jacobi_eig",
    "jacobi_svd",
    "orth_tol",
    "read_matrix_text",
    "rotation_for_pair",
    "scheme_from_id",
    "secular_eigenvectors",
    "secular_eval",
    "secular_roots",
    "solve_secular",
    "sorting_permutation",
    "split_rank_one",
    "svd_from_eig",
    "symmetric_qr_eig",
    "tridiag_qr_svd",
    "tridiagonalize",
    "wilkinson_shift",
    "write_matrix_text",
]
