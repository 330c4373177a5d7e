"""Symmetric KL divergence estimation for conditional categorical laws.

Estimate the symmetric (Jeffreys) divergence between the two conditional
symbol distributions of a binary-labeled population from i.i.d. samples,
with exact asymptotic variances, normal confidence intervals, closed-form
finite-sample tail bounds, and a Monte Carlo harness that verifies the
convergence, normality, coverage, and bound claims against simulated data.
"""

from .asymptotics import (
    ConfidenceInterval,
    InfluenceCoefficients,
    VarianceResult,
    confidence_interval,
    exact_sigma2,
    influence_coefficients,
    influence_value,
    normal_cdf,
    normal_quantile,
    plugin_sigma2,
)
from .bounds import (
    BOUND_NAMES,
    DEFAULT_G_GRID,
    BoundInputs,
    BoundTableRow,
    BoundValue,
    bound_conditional_cell_p,
    bound_conditional_cell_q,
    bound_joint_cell,
    bound_label_freq,
    bound_log_ratio,
    bound_table,
)
from .estimator import (
    DegenerateSampleError,
    EmpiricalMeasures,
    EstimateResult,
    empirical_measures,
    estimation_error,
    plug_in_estimate,
)
from .io import (
    CountsFormatError,
    RunManifest,
    config_to_dict,
    load_config,
    parse_config_dict,
    read_counts_csv,
    read_records_csv,
    save_config,
    write_bounds_csv,
    write_manifest,
    write_records_csv,
    write_summary_json,
)
from .model import (
    EPS_POSITIVE,
    SIMPLEX_ATOL,
    CountTable,
    PopulationModel,
    as_positive_prob_vector,
    as_prob_vector,
    kl_divergence,
    sample_batch,
    sym_kl_divergence,
)
from .montecarlo import (
    CHECK_NAMES,
    COVERAGE_TOLERANCE,
    KS_THRESHOLD,
    CheckResult,
    ExperimentConfig,
    ExperimentResult,
    ExperimentSummary,
    ReplicationRecord,
    SampleSizeSummary,
    check_bound_rows,
    coverage_rate,
    ks_statistic,
    lln_curve,
    run_experiment,
    run_replication,
)
from .streams import auxiliary_stream, replication_stream

__version__ = "0.1.0"

__all__ = [
    "BOUND_NAMES",
    "CHECK_NAMES",
    "COVERAGE_TOLERANCE",
    "DEFAULT_G_GRID",
    "EPS_POSITIVE",
    "KS_THRESHOLD",
    "SIMPLEX_ATOL",
    "BoundInputs",
    "BoundTableRow",
    "BoundValue",
    "CheckResult",
    "ConfidenceInterval",
    "CountTable",
    "CountsFormatError",
    "DegenerateSampleError",
    "EmpiricalMeasures",
    "EstimateResult",
    "ExperimentConfig",
    "ExperimentResult",
    "ExperimentSummary",
    "InfluenceCoefficients",
    "PopulationModel",
    "ReplicationRecord",
    "RunManifest",
    "SampleSizeSummary",
    "VarianceResult",
    "as_positive_prob_vector",
    "as_prob_vector",
    "auxiliary_stream",
    "bound_conditional_cell_p",
    "bound_conditional_cell_q",
    "bound_joint_cell",
    "bound_label_freq",
    "bound_log_ratio",
    "bound_table",
    "check_bound_rows",
    "confidence_interval",
    "config_to_dict",
    "coverage_rate",
    "empirical_measures",
    "estimation_error",
    "exact_sigma2",
    "influence_coefficients",
    "influence_value",
    "kl_divergence",
    "ks_statistic",
    "lln_curve",
    "load_config",
    "normal_cdf",
    "normal_quantile",
    "parse_config_dict",
    "plug_in_estimate",
    "plugin_sigma2",
    "read_counts_csv",
    "read_records_csv",
    "replication_stream",
    "run_experiment",
    "run_replication",
    "sample_batch",
    "save_config",
    "sym_kl_divergence",
    "write_bounds_csv",
    "write_manifest",
    "write_records_csv",
    "write_summary_json",
]
