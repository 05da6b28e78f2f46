"""Design construction, evaluation and verification modules."""

from .design import DesignMatrix, JitterMode, LevelMatrix, random_latin_hypercube, to_unit_cube, validate_latin_hypercube
from .distance import DistanceOrder, distance_profile, min_interpoint_distance, phi_q
from .correlation import CorrelationSummary, correlation_matrix, is_orthogonal, second_order_check
from .oa import OrthogonalArray, load_oa, oa_based_lh, verify_projection_property, verify_strength
from .olh import best_known_bound, doubling_pipeline, exists_olh, kron_construct, oa_coupled_olh, sun_olh_odd
from .discrepancy import DiscrepancyResult, centered_l2, discrepancy, star_discrepancy_exact
from .nets import NetReport, is_net, is_sequence_prefix, radical_inverse_points
from .search import Objective, SearchResult, anneal_lh, columnwise_pairwise, threshold_accepting_utype
from .sampling import SamplingScheme, SchemeKind, estimate_mean, main_effect_variance, variance_experiment

__all__ = [
    "DesignMatrix", "JitterMode", "LevelMatrix", "random_latin_hypercube", "to_unit_cube",
    "validate_latin_hypercube", "DistanceOrder", "distance_profile", "min_interpoint_distance", "phi_q",
    "CorrelationSummary", "correlation_matrix", "is_orthogonal", "second_order_check",
    "OrthogonalArray", "load_oa", "oa_based_lh", "verify_projection_property", "verify_strength",
    "best_known_bound", "doubling_pipeline", "exists_olh", "kron_construct", "oa_coupled_olh", "sun_olh_odd",
    "DiscrepancyResult", "centered_l2", "discrepancy", "star_discrepancy_exact",
    "NetReport", "is_net", "is_sequence_prefix", "radical_inverse_points",
    "Objective", "SearchResult", "anneal_lh", "columnwise_pairwise", "threshold_accepting_utype",
    "SamplingScheme", "SchemeKind", "estimate_mean", "main_effect_variance", "variance_experiment",
]
