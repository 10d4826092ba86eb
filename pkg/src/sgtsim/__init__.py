"""Self-guided tomography of pure qudit states, with a simulated noisy
two-channel projective measurement and a maximum-likelihood baseline."""

from .engine import (
    IterationRecord,
    SgtConfig,
    Trajectory,
    gradient,
    pseudo_normalized_difference,
    run_sgt,
    update_estimate,
)
from .exceptions import (
    ConfigError,
    DegenerateStateError,
    DimensionMismatchError,
    InvalidDimensionError,
    InvalidGainError,
    NoSignalError,
    OracleError,
    SgtError,
)
from .experiments import (
    BUDGET_CONDITIONS,
    BatchResult,
    BudgetResult,
    ComparisonResult,
    ComparisonRow,
    ExperimentPlan,
    RunSpec,
    SummaryStats,
    compare_sgt_mlst,
    default_budget_plan,
    derive_seed,
    execute_run,
    run_batch,
    run_error_budget,
    summarize,
)
from .measurement import (
    ExactOracle,
    MqpgOracle,
    NoiseModel,
    PreparationModel,
    apply_crosstalk,
    mqpg_measure,
    prepare_imperfect_state,
    projection_probability,
    sample_channel_counts,
)
from .mle import (
    ProjectorSet,
    acquire_tomogram,
    build_projector_set,
    fidelity_to_pure,
    log_likelihood,
    mle_reconstruct,
    validate_density_matrix,
)
from .modes import hermite_gaussian, render_spectral_amplitude
from .schedule import DEFAULT_SCHEDULE, GainSchedule
from .states import (
    DIRECTION_VALUES,
    QuditState,
    basis_state,
    fidelity,
    haar_random_state,
    infidelity,
    perturb_pair,
    sample_direction,
)

__version__ = "0.1.0"
