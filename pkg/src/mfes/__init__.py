"""Multi-fidelity entropy-search optimization toolkit.

The package couples a cheap biased simulation with an expensive ground-truth
evaluation through one Gaussian process over augmented inputs, selects each
evaluation by weighted expected entropy reduction of the minimizer
distribution, and ships a deterministic gait-stabilization testbed plus a
synthetic benchmark to exercise the loop end to end.
"""

from .validation import SIM, REAL, Bounds, augment, check_param_vector
from .kernels import MultiFidelityKernel, RationalQuadratic
from .gp import (
    KernelParams,
    ModelFitError,
    ModelParams,
    MultiFidelityGP,
    build_gp,
    default_model_params,
    safe_cholesky,
)
from .acquisition import (
    AcquisitionChoice,
    AcquisitionConfig,
    PminDistribution,
    RepresenterGrid,
    build_grid,
    entropy,
    expected_entropy_change,
    pmin,
    select_next,
)
from .cost import (
    J_FALL,
    CostBreakdown,
    PenaltyParams,
    TrajectoryLog,
    cost_real,
    cost_sim_averaged,
    mean_filter,
    penalty,
    smooth_deadband,
    stability_integral,
)
from .testbed import (
    SCENARIOS,
    FidelitySpec,
    PlantParams,
    Scenario,
    TestbedObjective,
    ankle2d,
    arm_ankle4d,
    evaluate_real,
    evaluate_sim,
    real_spec,
    sim_spec,
    simulate,
)
from .benchmarks import TwoFidelityBenchmark, bench1d
from .campaign import (
    N_WARM_START,
    CampaignConfig,
    CampaignResult,
    IterationRecord,
    TerminationConfig,
    filtered_entropy_update,
    make_objective,
    observation_transform,
    resolve_entropy_threshold,
    run_mfes,
    run_random_search,
)
from .config import (
    ConfigError,
    config_from_dict,
    config_to_dict,
    load_config,
    shipped_configs,
)
from .export import (
    EXPORT_FORMATS,
    export_result,
    load_result_json,
    save_result_json,
    write_deviation_compare,
    write_entropy_trace,
    write_posterior_slice,
    write_records,
)
from .seeding import child_seed, rng_from, seed_sequence

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # validation / shared types
    "SIM",
    "REAL",
    "Bounds",
    "augment",
    "check_param_vector",
    # kernels and surrogate
    "RationalQuadratic",
    "MultiFidelityKernel",
    "KernelParams",
    "ModelParams",
    "MultiFidelityGP",
    "ModelFitError",
    "build_gp",
    "default_model_params",
    "safe_cholesky",
    # acquisition
    "AcquisitionConfig",
    "AcquisitionChoice",
    "RepresenterGrid",
    "PminDistribution",
    "build_grid",
    "pmin",
    "entropy",
    "expected_entropy_change",
    "select_next",
    # cost model
    "J_FALL",
    "PenaltyParams",
    "CostBreakdown",
    "TrajectoryLog",
    "smooth_deadband",
    "mean_filter",
    "stability_integral",
    "penalty",
    "cost_real",
    "cost_sim_averaged",
    # testbed
    "PlantParams",
    "FidelitySpec",
    "Scenario",
    "SCENARIOS",
    "ankle2d",
    "arm_ankle4d",
    "sim_spec",
    "real_spec",
    "simulate",
    "evaluate_real",
    "evaluate_sim",
    "TestbedObjective",
    # benchmark
    "TwoFidelityBenchmark",
    "bench1d",
    # campaign
    "TerminationConfig",
    "CampaignConfig",
    "IterationRecord",
    "CampaignResult",
    "N_WARM_START",
    "observation_transform",
    "filtered_entropy_update",
    "resolve_entropy_threshold",
    "make_objective",
    "run_mfes",
    "run_random_search",
    # config and export
    "ConfigError",
    "load_config",
    "config_from_dict",
    "config_to_dict",
    "shipped_configs",
    "EXPORT_FORMATS",
    "save_result_json",
    "load_result_json",
    "export_result",
    "write_records",
    "write_entropy_trace",
    "write_posterior_slice",
    "write_deviation_compare",
    # seeding
    "seed_sequence",
    "rng_from",
    "child_seed",
]
