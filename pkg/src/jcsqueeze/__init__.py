"""Entropy squeezing of a qubit interacting with a Schrodinger-cat field mode
in the resonant Jaynes-Cummings model."""

from .errors import (
    CorruptStateError,
    DegenerateStateError,
    EngineDisagreementError,
    InvalidParameterError,
    InvariantViolationError,
)
from .field_states import (
    CatFieldSpec,
    FockAmplitudes,
    cat_amplitudes,
    choose_truncation,
    coherent_amplitudes,
)
from .jc_evolution import (
    JointState,
    QubitDensityMatrix,
    QubitSpec,
    ValidationReport,
    closed_form_density,
    cross_validate,
    evolve_exact,
    initial_joint_state,
    oracle_density,
    reduce_to_qubit,
)
from .squeezing_metrics import (
    SqueezingSample,
    check_entropic_bound,
    entropy_squeeze_factors,
    pauli_probabilities,
    sample_at,
    shannon_entropies,
    variance_squeeze_factors,
)
from .scenario_runner import (
    PRESETS,
    Engine,
    OutputFormat,
    ScenarioConfig,
    TimeSeries,
    emit,
    run_nbar_sweep,
    run_rho_c_compare,
    run_theta_sweep,
    run_time_series,
)

__version__ = "0.1.0"
