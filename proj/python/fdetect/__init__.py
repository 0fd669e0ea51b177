"""Fourier and standard subspaces on finite abelian groups."""

from ._fdetect import (
    FlatBasis,
    NoFeasibleCandidate,
    NumericalError,
    ValidationError,
    __version__,
    brute_force_best,
    build_frame,
    check_uncertainty,
    comb_example,
    evaluate_twosided,
    exchange_complement,
    overlap_norm,
    parse_index_set,
    run_cli,
    select_onesided,
    single_vector_detection,
)

__all__ = [
    "FlatBasis",
    "NoFeasibleCandidate",
    "NumericalError",
    "ValidationError",
    "__version__",
    "brute_force_best",
    "build_frame",
    "check_uncertainty",
    "comb_example",
    "evaluate_twosided",
    "exchange_complement",
    "overlap_norm",
    "parse_index_set",
    "run_cli",
    "select_onesided",
    "single_vector_detection",
]
