"""Analytic rate, coverage, and energy-efficiency toolkit for a
rate-splitting multiple-access downlink over a Poisson field of base
stations, with a Monte Carlo engine for cross-validation.

The analytic path reduces every spatially averaged per-stream rate to a
single one-dimensional integral over moment generating functions of the
fading and aggregate-interference distributions; the simulator samples the
same network model directly.
"""

from .config import RunConfig, config_from_mapping, load_config
from .errors import (
    BracketError,
    ConfigError,
    DomainError,
    InsufficientWindow,
    NoConvergence,
    RsmaDenseError,
    SingularChannel,
)
from .kernels import (
    distance_kernel,
    distance_kernel_limit,
    exclusion_exponent,
    interference_laplace,
)
from .metrics import (
    EeSolution,
    ase,
    ee_profile,
    energy_density,
    energy_efficiency,
    optimize_antennas,
    per_bs_power,
)
from .model import (
    DEFAULT_BS_DENSITY,
    SCHEMES,
    EnergyModel,
    FadingProfile,
    KernelContext,
    McEstimate,
    NetworkParams,
    QuadratureSpec,
    RateBreakdown,
    SeriesControl,
)
from .montecarlo import (
    McRun,
    SimWindow,
    TrialRecord,
    distance_distribution_check,
    gain_distribution_check,
    run_trials,
    write_trial_csv,
)
from .rates import (
    common_rate,
    multicast_rate,
    optimal_beta,
    private_rates,
    rate_gap,
    serving_distance_cdf,
    serving_distance_pdf,
    sum_rate,
    with_beta,
)

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "ConfigError",
    "DEFAULT_BS_DENSITY",
    "DomainError",
    "EeSolution",
    "EnergyModel",
    "FadingProfile",
    "InsufficientWindow",
    "KernelContext",
    "McEstimate",
    "McRun",
    "NetworkParams",
    "NoConvergence",
    "QuadratureSpec",
    "RateBreakdown",
    "RsmaDenseError",
    "RunConfig",
    "SCHEMES",
    "SeriesControl",
    "SimWindow",
    "SingularChannel",
    "TrialRecord",
    "ase",
    "common_rate",
    "config_from_mapping",
    "distance_distribution_check",
    "distance_kernel",
    "distance_kernel_limit",
    "ee_profile",
    "energy_density",
    "energy_efficiency",
    "exclusion_exponent",
    "gain_distribution_check",
    "interference_laplace",
    "load_config",
    "multicast_rate",
    "optimal_beta",
    "optimize_antennas",
    "per_bs_power",
    "private_rates",
    "rate_gap",
    "run_trials",
    "serving_distance_cdf",
    "serving_distance_pdf",
    "sum_rate",
    "with_beta",
    "write_trial_csv",
]
