"""Energy-efficiency analysis of uplink cellular networks with random
base-station deployment and multi-antenna receivers.

Closed-form lower bounds on spectral and energy efficiency, optimizers
for the pilot reuse factor, antenna count, and multiplexing load, and a
Monte-Carlo engine that validates the bounds against sampled networks.
"""

from .config import ConfigError, RunConfig, load_config, parse_grid
from .model import (
    DegenerateModelError,
    EEReport,
    HardwareModel,
    InfeasibleError,
    OperatingPoint,
    ParameterError,
    PropagationModel,
    area_energy_consumption,
    area_spectral_efficiency,
    asymptotic_objective,
    average_uplink_power,
    energy_efficiency,
    noise_over_power,
    se_lower_bound,
    sinr_lower_bound,
)
from .optimizer import (
    IntegerOptimum,
    PilotSolution,
    RelaxedOptimum,
    alternating_optimize,
    ee_at_density,
    ee_vs_density,
    integer_refine,
    max_m_for_reuse_constraint,
    optimal_k_fixed_ratio,
    optimal_m_fixed_k,
    optimal_pilot_reuse,
    optimize_for_ue_density,
    optimize_rho_finite_lambda,
)
from .simulator import (
    Estimate,
    McConfig,
    default_window_radius,
    estimate_average_power,
    estimate_serving_distance,
    estimate_sinr_denominator_terms,
    sample_geometry,
    simulate_empirical_se,
    simulate_signal_level,
)

__version__ = "1.0.0"
