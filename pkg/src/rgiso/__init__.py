"""Random-graph induced-subgraph toolkit: exact solvers, threshold formulas,
pseudorandomness checks, and Monte Carlo experiments."""

from .errors import BudgetExhausted, DomainError
from .graphs import (
    Graph,
    ProbPair,
    edge_count,
    from_text,
    gen_gnm,
    gen_gnp,
    induced_subgraph,
    to_text,
)
from .montecarlo import (
    DistributionReport,
    EstimateReport,
    HeatmapCell,
    HeatmapReport,
    McisConcentrationReport,
    copy_count_distribution,
    estimate_containment,
    fixed_pattern_containment,
    heatmap_containment,
    log_copy_statistic,
    mcis_concentration,
    wilson_interval,
)
from .pseudorandom import (
    GraphModel,
    PropertyVerdict,
    check_A,
    check_E,
    check_F,
    estimate_property_rate,
)
from .rng import Seed
from .solver import (
    ContainsResult,
    CountResult,
    McisResult,
    Outcome,
    SearchBudget,
    automorphism_count,
    canonical_form,
    contains_induced,
    count_induced_embeddings,
    count_induced_subsets,
    is_asymmetric,
    is_rigid_subset,
    mcis_size,
    mcis_witness,
)
from .thresholds import (
    ContainmentForecast,
    CostFamily,
    McisLocationReport,
    ThresholdReport,
    classify_region,
    common_density,
    containment_base,
    containment_limit,
    cost_family,
    critical_size,
    critical_size_asymptotic,
    edge_asymmetry_slope,
    edge_deviation,
    envelope_minimizer,
    joint_critical_size,
    limit_variance,
    log_expected_copies,
    mcis_location,
    poisson_copy_mean,
    predict_fixed_pattern_containment,
    squashed_normal_cdf,
    threshold_location,
    threshold_offset,
    threshold_report,
    threshold_window,
    two_point_interval,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExhausted",
    "DomainError",
    "Graph",
    "ProbPair",
    "Seed",
    "edge_count",
    "from_text",
    "gen_gnm",
    "gen_gnp",
    "induced_subgraph",
    "to_text",
    "ContainsResult",
    "CountResult",
    "McisResult",
    "Outcome",
    "SearchBudget",
    "automorphism_count",
    "canonical_form",
    "contains_induced",
    "count_induced_embeddings",
    "count_induced_subsets",
    "is_asymmetric",
    "is_rigid_subset",
    "mcis_size",
    "mcis_witness",
    "ContainmentForecast",
    "CostFamily",
    "McisLocationReport",
    "ThresholdReport",
    "classify_region",
    "common_density",
    "containment_base",
    "containment_limit",
    "cost_family",
    "critical_size",
    "critical_size_asymptotic",
    "edge_asymmetry_slope",
    "edge_deviation",
    "envelope_minimizer",
    "joint_critical_size",
    "limit_variance",
    "log_expected_copies",
    "mcis_location",
    "poisson_copy_mean",
    "predict_fixed_pattern_containment",
    "squashed_normal_cdf",
    "threshold_location",
    "threshold_offset",
    "threshold_report",
    "threshold_window",
    "two_point_interval",
    "DistributionReport",
    "EstimateReport",
    "HeatmapCell",
    "HeatmapReport",
    "McisConcentrationReport",
    "copy_count_distribution",
    "estimate_containment",
    "fixed_pattern_containment",
    "heatmap_containment",
    "log_copy_statistic",
    "mcis_concentration",
    "wilson_interval",
    "GraphModel",
    "PropertyVerdict",
    "check_A",
    "check_E",
    "check_F",
    "estimate_property_rate",
    "__version__",
]
