"""Directed redundancy analysis for multichannel time series.

Quantifies how much redundant information a set of source processes
causally transfers into a target process: estimates pairwise transfer
entropies nonparametrically, identifies a hidden redundancy process and
the relevant sources it drives, and evaluates an upper bound on the
redundant information exchange. Includes an exact linear-Gaussian
benchmark system with closed-form couplings for calibration.
"""

__version__ = "0.1.0"

from .discrete import (
    FinitePmf,
    TripleExample,
    entropy,
    fair_bit_triple,
    specific_info_redundancy,
    mss_redundancy,
    mutual_information,
    pairwise_min_mi,
)
from .errors import RedteError
from .estimator import EmbeddedCloud, EmbeddingSpec, digamma, embed, knn_cmi, te_matrix, transfer_entropy
from .gauss import (
    CaseRegion,
    ClosedFormParams,
    StationaryCov,
    exact_te_linear,
    gaussian_cmi_from_cov,
    closed_form_min_term,
    region_label,
    stationary_autocov,
    te_phi_to_x,
    te_phi_to_z,
    te_x_to_z,
    gain_region_bounds,
)
from .linsim import (
    LagCouplingSpec,
    LinSysParams,
    simulate_benchmark,
    simulate_lag_network,
    stationary_variance_ar1,
)
from .panel import ProcessId, TEMatrix, TimeSeriesPanel, standardize, validate_panel
from .selection import (
    PipelineResult,
    RedundancyReport,
    SelectionConfig,
    candidate_redundancy,
    candidate_relevant_set,
    known_driver_bound,
    min_fraction_subset,
    pick_hidden,
    run_pipeline,
    target_relevant_set,
    redundancy_bound,
)

__all__ = [
    "__version__",
    "CaseRegion",
    "EmbeddedCloud",
    "EmbeddingSpec",
    "FinitePmf",
    "LagCouplingSpec",
    "ClosedFormParams",
    "LinSysParams",
    "PipelineResult",
    "ProcessId",
    "RedteError",
    "RedundancyReport",
    "SelectionConfig",
    "StationaryCov",
    "TEMatrix",
    "TimeSeriesPanel",
    "TripleExample",
    "candidate_redundancy",
    "candidate_relevant_set",
    "digamma",
    "embed",
    "entropy",
    "exact_te_linear",
    "fair_bit_triple",
    "gaussian_cmi_from_cov",
    "specific_info_redundancy",
    "knn_cmi",
    "known_driver_bound",
    "closed_form_min_term",
    "min_fraction_subset",
    "mss_redundancy",
    "mutual_information",
    "pairwise_min_mi",
    "pick_hidden",
    "region_label",
    "run_pipeline",
    "simulate_benchmark",
    "simulate_lag_network",
    "standardize",
    "stationary_autocov",
    "stationary_variance_ar1",
    "target_relevant_set",
    "te_matrix",
    "te_phi_to_x",
    "te_phi_to_z",
    "te_x_to_z",
    "redundancy_bound",
    "transfer_entropy",
    "validate_panel",
    "gain_region_bounds",
]
