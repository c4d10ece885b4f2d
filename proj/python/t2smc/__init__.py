"""Interval type-2 fuzzy super-twisting sliding-mode control simulator."""

from ._core import (  # noqa: F401
    AdaptiveController,
    AdaptiveGains,
    ConfigError,
    ControllerKind,
    ExperimentConfig,
    FuzzyApproximator,
    IT2GaussianSet,
    Metrics,
    MfTable,
    NoiseSpec,
    PlantModel,
    ProjectionRadii,
    ReferenceSignal,
    Rulebase,
    RunResult,
    SimConfig,
    SimulationDiverged,
    SlidingSpec,
    SuperTwistingGains,
    Trajectory,
    basis_vector,
    build_grid_rulebase,
    defuzzify,
    delta_s,
    duffing_preset,
    eval_mf_bounds,
    fire_all,
    km_type_reduce,
    parse_config,
    plant_derivative,
    preset,
    preset_names,
    project_params,
    reference_preset,
    run_experiment,
    serialize_config,
    sliding_value,
    stc_gain_feasible,
    write_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
