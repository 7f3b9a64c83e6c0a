"""Quantum reservoir computing on random regular spin networks."""

__version__ = "0.1.0"

from .graph import (
    Graph,
    InfeasibleDegreeError,
    RetryExhaustedError,
    adjacency,
    graph_from_json,
    graph_to_json,
    is_connected,
    sample_rrg,
)
from .qstate import (
    DensityMatrix,
    InvariantViolation,
    SpectralDecomposition,
    evolution_operator,
    herm_eig,
    herm_eigvalsh,
    hs_norm,
    kron,
    maximally_mixed,
    partial_trace,
    partial_transpose,
    pauli_on_site,
    pauli_string,
    permute_qubits,
    trace_norm,
)
from .hamiltonian import (
    DisorderRealization,
    HamiltonianSpec,
    build_hamiltonian,
    level_spacing_ratios,
    sample_disorder,
)
from .reservoir import (
    FeatureRecord,
    ReservoirConfig,
    encode_bits,
    encode_werner,
    extract_features,
    feature_matrix,
    features_to_csv,
    initial_state,
    inject,
    run_sequence,
    step,
)
from .readout import (
    KernelModel,
    RidgeModel,
    Standardizer,
    TrainTestSplit,
    accuracy_rescaled,
    model_summary,
    mse,
    pearson_capacity,
    rbf_kernel,
    ridge_fit,
    ridge_predict,
    svm_decision,
    svm_fit,
    svm_predict,
)
from .tasks import (
    CriticalDisorder,
    MemoryTaskSpec,
    MultitaskData,
    MultitaskSpec,
    critical_disorder_scan,
    gen_memory_inputs,
    gen_multitask,
    memory_targets,
    threshold_crossing,
    total_memory_capacity,
)
from .diagnostics import (
    correlation_norm_trajectory,
    log_negativity,
    negativity_trajectory,
    probe_trajectories,
)
from .experiments import (
    ConfigError,
    ExperimentConfig,
    GridPoint,
    SweepAbortedError,
    SweepResult,
    TrajectoryResult,
    config_from_dict,
    config_fingerprint,
    grid_points,
    realization_seed,
    run_diagnostics_experiment,
    run_memory_experiment,
    run_multitask_experiment,
    run_spectra_experiment,
    with_overrides,
)
