"""Lag-mixture Markov processes: simulation, fitting and entropy estimation.

A lag-mixture process draws a backward lag from a kernel distribution
and transitions from the state it finds there using an ordinary
first-order transition matrix. Its entropy rate equals that of the
underlying chain regardless of the kernel, which this package exploits
to estimate sequence entropies, alongside tooling for corpus
preprocessing, irreducibility conditioning and Cramér's V dependency
profiling.
"""

__version__ = "0.1.0"

from .conditioning import (
    ARTIFICIAL_STATE_LABEL,
    DEFAULT_P_ARTIFICIAL,
    Induced,
    LargestCC,
    SccPartition,
    apply_conditioning,
    induce_irreducibility,
    restrict_to_largest_scc,
    strongly_connected_components,
)
from .corpus import (
    DEFAULT_RARE_TOKEN,
    SequenceCorpus,
    dedupe_consecutive,
    load_sequences,
    preprocess,
    replace_rare,
)
from .dependence import (
    ContingencyTable,
    CramersV,
    ProfilePoint,
    contingency_table,
    corpus_dependency_profile,
    cramers_v,
    dependency_profile,
    write_profile_csv,
)
from .errors import (
    ConfigError,
    DegenerateComponentError,
    DegenerateInitError,
    DimensionMismatchError,
    DuplicateLabelError,
    EmptyCorpusError,
    EmptyHistoryError,
    EmptySequenceError,
    InvalidInitStateError,
    InvalidProbabilityError,
    LagTooLargeError,
    LampError,
    MalformedRowError,
    NegativeEntryError,
    NoConvergenceError,
    NonSquareError,
    NotADistributionError,
    NotIrreducibleError,
    RareTokenCollisionError,
    RowSumError,
    TooShortError,
    UnknownTokenError,
    ZeroProbabilityError,
)
from .estimators import (
    EntropyReport,
    EstimatorMethod,
    SweepResult,
    detect_plateau,
    lamp_plugin_estimate,
    markov_plugin_estimate,
    minmax_normalize,
    path_level_estimate,
    sequence_level_estimate,
    shannon_entropy,
    stationary_distribution_estimate,
    sweep_p_artificial,
    write_sweep_csv,
)
from .fitting import (
    FitReport,
    TransitionCounts,
    count_transitions,
    fit_first_order,
    fit_lamp_em,
    lamp_log_likelihood,
)
from .lamp import (
    KernelDistribution,
    LampModel,
    lamp_entropy_rate,
    lamp_transition_distribution,
    load_model,
    log_loss,
    save_model,
    simulate_lamp,
    step_log2_probs,
)
from .markov import (
    StateSpace,
    StationaryDistribution,
    TransitionMatrix,
    entropy_rate,
    is_irreducible,
    load_matrix_csv,
    load_matrix_json,
    save_matrix_csv,
    save_matrix_json,
    simulate_markov,
    stationary_distribution,
    validate_stochastic,
)

__all__ = [
    "ARTIFICIAL_STATE_LABEL",
    "ConfigError",
    "ContingencyTable",
    "CramersV",
    "DEFAULT_P_ARTIFICIAL",
    "DEFAULT_RARE_TOKEN",
    "DegenerateComponentError",
    "DegenerateInitError",
    "DimensionMismatchError",
    "DuplicateLabelError",
    "EmptyCorpusError",
    "EmptyHistoryError",
    "EmptySequenceError",
    "EntropyReport",
    "EstimatorMethod",
    "FitReport",
    "Induced",
    "InvalidInitStateError",
    "InvalidProbabilityError",
    "KernelDistribution",
    "LagTooLargeError",
    "LampError",
    "LampModel",
    "LargestCC",
    "MalformedRowError",
    "NegativeEntryError",
    "NoConvergenceError",
    "NonSquareError",
    "NotADistributionError",
    "NotIrreducibleError",
    "ProfilePoint",
    "RareTokenCollisionError",
    "RowSumError",
    "SccPartition",
    "SequenceCorpus",
    "StateSpace",
    "StationaryDistribution",
    "SweepResult",
    "TooShortError",
    "TransitionCounts",
    "TransitionMatrix",
    "UnknownTokenError",
    "ZeroProbabilityError",
    "apply_conditioning",
    "contingency_table",
    "corpus_dependency_profile",
    "count_transitions",
    "cramers_v",
    "dedupe_consecutive",
    "dependency_profile",
    "detect_plateau",
    "entropy_rate",
    "fit_first_order",
    "fit_lamp_em",
    "induce_irreducibility",
    "is_irreducible",
    "lamp_entropy_rate",
    "lamp_log_likelihood",
    "lamp_plugin_estimate",
    "lamp_transition_distribution",
    "load_matrix_csv",
    "load_matrix_json",
    "load_model",
    "load_sequences",
    "log_loss",
    "markov_plugin_estimate",
    "minmax_normalize",
    "path_level_estimate",
    "preprocess",
    "replace_rare",
    "restrict_to_largest_scc",
    "save_matrix_csv",
    "save_matrix_json",
    "save_model",
    "sequence_level_estimate",
    "shannon_entropy",
    "simulate_lamp",
    "simulate_markov",
    "stationary_distribution",
    "stationary_distribution_estimate",
    "step_log2_probs",
    "strongly_connected_components",
    "sweep_p_artificial",
    "validate_stochastic",
    "write_profile_csv",
    "write_sweep_csv",
]
