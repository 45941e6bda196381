from .config import (
    AlgorithmConfig,
    ConfigError,
    EnvironmentConfig,
    ExperimentConfig,
    config_from_dict,
    load_config,
    loads_config,
)
from .emit import emit, read_curves, summary, write_curves
from .regret import (
    Diagnostics,
    TrialError,
    TrialRun,
    arm_gaps,
    compute_optimal_action,
    diagnostics,
    pseudo_regret_increment,
    run_algorithm,
)
from .runner import ExperimentResult, TrialResult, build_trial, make_algorithm, run_experiment, run_trial, trial_streams

__all__ = [
    "AlgorithmConfig",
    "ConfigError",
    "Diagnostics",
    "EnvironmentConfig",
    "ExperimentConfig",
    "ExperimentResult",
    "TrialError",
    "TrialResult",
    "TrialRun",
    "arm_gaps",
    "build_trial",
    "compute_optimal_action",
    "config_from_dict",
    "diagnostics",
    "emit",
    "load_config",
    "loads_config",
    "make_algorithm",
    "pseudo_regret_increment",
    "read_curves",
    "run_algorithm",
    "run_experiment",
    "run_trial",
    "summary",
    "trial_streams",
    "write_curves",
]
