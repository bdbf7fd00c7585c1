"""Exact-arithmetic toolkit for marked metric graphs of free groups:
stretching-factor (Lipschitz) metrics on Outer Space, certified optimal PL
maps, and fast folding paths with their geodesic diagnostics.
"""

from .words import (
    Word,
    AutomorphismPair,
    free_reduce,
    cyclic_reduce,
    apply_endomorphism,
    validate_automorphism_pair,
)
from .graphs import (
    MarkedMetricGraph,
    make_graph,
    validate_marked_graph,
    tighten,
    translation_length,
    loop_length,
    word_of_loop,
    volume,
    normalize_volume,
    interpolate_in_simplex,
    counting_inner_product,
    apply_automorphism_to_marking,
    derive_inverse_marking,
    canonicalize,
)
from .stretch import (
    CandidateLoop,
    CandidateShape,
    enumerate_candidates,
    lambda_r,
    lambda_l,
    stretch_report,
    bounded_cancellation_bound,
)
from .plmaps import (
    PLMap,
    initial_pl_map,
    stretch_analysis,
    is_optimal,
    next_v,
    optimize_pl_map,
)
from .folding import (
    FoldingPath,
    prepare_folding_setup,
    fast_fold,
    sample_path,
    multiplicity,
    speeds,
    systole_and_thin_test,
    check_four_point,
    check_quasi_geodesic,
    check_dR_geodesic,
)

__all__ = [
    "Word",
    "AutomorphismPair",
    "free_reduce",
    "cyclic_reduce",
    "apply_endomorphism",
    "validate_automorphism_pair",
    "MarkedMetricGraph",
    "make_graph",
    "validate_marked_graph",
    "tighten",
    "translation_length",
    "loop_length",
    "word_of_loop",
    "volume",
    "normalize_volume",
    "interpolate_in_simplex",
    "counting_inner_product",
    "apply_automorphism_to_marking",
    "derive_inverse_marking",
    "canonicalize",
    "CandidateLoop",
    "CandidateShape",
    "enumerate_candidates",
    "lambda_r",
    "lambda_l",
    "stretch_report",
    "bounded_cancellation_bound",
    "PLMap",
    "initial_pl_map",
    "stretch_analysis",
    "is_optimal",
    "next_v",
    "optimize_pl_map",
    "FoldingPath",
    "prepare_folding_setup",
    "fast_fold",
    "sample_path",
    "multiplicity",
    "speeds",
    "systole_and_thin_test",
    "check_four_point",
    "check_quasi_geodesic",
    "check_dR_geodesic",
]
