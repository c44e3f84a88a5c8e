"""Power allocation, consensus and detection experiments for sensor networks."""

from ._wsnd import (
    ConfigError,
    ConvergenceError,
    DegenerateFusionError,
    ExperimentConfig,
    Graph,
    NoSignalError,
    Scenario,
    SensorParams,
    TopologyError,
    UsageError,
    __version__,
    capacity_bits,
    consensus_average,
    detect,
    load_config,
    parse_config,
    power_closed_form,
    q_function,
    q_inverse,
    quant_noise_var,
    schemes,
    solve_centralized,
    solve_distributed,
    solve_scenario_centralized,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
