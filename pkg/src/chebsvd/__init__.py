"""Partial SVD of large sparse matrices by polynomial-filtered subspace
iteration: all singular triplets with singular values in a given interval,
with automatic filter-degree and subspace-dimension selection."""

from .chebyshev import (FilterSpec, OutsideDomainWarning, StepSpec,
                        apply_filter, build_filter, degree_for_projector_gap,
                        evaluate_scalar, fourier_coefficients, jackson_factors,
                        pointwise_error_bound, projector_error_bound,
                        select_degree, target_step, unit_interval_filter)
from .dense import RankDeficiencyError, svd_small, thin_qr
from .oracle import (DenseSvd, ProjectorSpectrum, count_in_interval,
                     dense_full_svd, exact_projector_spectrum,
                     subspace_distance)
from .solver import (DEFAULT_SEED, IntervalError, IterationRecord,
                     IterationState, RitzTriplet, SolverOptions, SolverReport,
                     SubspaceCollapseError, iterate_once, residual_norm, solve)
from .sparse import (BidiagonalizationError, MatrixFormatError, SparseMatrix,
                     SpectrumBounds, apply_mapped_gram,
                     estimate_spectrum_bounds, parse_matrix_market,
                     read_matrix_market, write_matrix_market)
from .trace import (TraceEstimate, estimate_trace, min_sample_count,
                    rademacher_block, select_subspace_dimension)

__version__ = "0.1.0"

__all__ = [
    "BidiagonalizationError", "DEFAULT_SEED", "DenseSvd", "FilterSpec",
    "IntervalError", "IterationRecord", "IterationState", "MatrixFormatError",
    "OutsideDomainWarning", "ProjectorSpectrum", "RankDeficiencyError",
    "RitzTriplet", "SolverOptions", "SolverReport", "SparseMatrix",
    "SpectrumBounds", "StepSpec", "SubspaceCollapseError", "TraceEstimate",
    "apply_filter", "apply_mapped_gram", "build_filter", "count_in_interval",
    "degree_for_projector_gap", "dense_full_svd", "estimate_spectrum_bounds",
    "estimate_trace", "evaluate_scalar", "exact_projector_spectrum",
    "fourier_coefficients", "iterate_once", "jackson_factors",
    "min_sample_count", "parse_matrix_market", "pointwise_error_bound",
    "projector_error_bound", "rademacher_block", "read_matrix_market",
    "residual_norm", "select_degree", "select_subspace_dimension", "solve",
    "subspace_distance", "svd_small", "target_step", "thin_qr",
    "unit_interval_filter", "write_matrix_market",
]
