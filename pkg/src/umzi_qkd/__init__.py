"""Secret-key-rate model for phase-coding BB84 on an unbalanced
Mach-Zehnder interferometer whose long-arm phase modulator is lossy.

The library compares three accountings of the modulator loss (conceding it to
the channel, absorbing it into a virtual source plus a basis-independent
filter, and actively compensating it) across transmission distance, and ships
a CLI that reproduces the rate-vs-distance curves as CSV and figures.
"""

__version__ = "0.1.0"

from .analysis import (
    MuOptimum,
    SweepConfig,
    SweepResult,
    max_distance,
    optimize_mu,
    sweep,
)
from .channel import (
    ChannelParams,
    LinkBudget,
    fiber_transmittance,
    overall_gain_and_qber,
    pass_efficiency_bob,
    yield_n,
)
from .config import RunConfig, parse_config
from .errors import (
    BracketError,
    DegenerateSourceError,
    UndefinedQberError,
    ValidationError,
)
from .keyrate import (
    Scenario,
    ScenarioRates,
    binary_entropy,
    compensated_single_photon_rate,
    detector_free_rate,
    ideal_decoy_bounds,
    improvement_factor,
    naive_single_photon_rate,
    secure_key_rate,
    virtual_single_photon_rate,
)
from .source import (
    BB84_PHASES,
    DEFAULT_N_MAX,
    InterferometerParams,
    PhotonNumberDistribution,
    UnbalancedQubit,
    VirtualUnitaryImage,
    channel_source_distribution,
    pass_efficiency_alice,
    poisson_pmf,
    single_photon_state,
    virtual_source_distribution,
    virtual_unitary_action,
)

__all__ = [
    "__version__",
    "BB84_PHASES",
    "BracketError",
    "ChannelParams",
    "DEFAULT_N_MAX",
    "DegenerateSourceError",
    "InterferometerParams",
    "LinkBudget",
    "MuOptimum",
    "PhotonNumberDistribution",
    "RunConfig",
    "Scenario",
    "ScenarioRates",
    "SweepConfig",
    "SweepResult",
    "UnbalancedQubit",
    "UndefinedQberError",
    "ValidationError",
    "VirtualUnitaryImage",
    "binary_entropy",
    "channel_source_distribution",
    "compensated_single_photon_rate",
    "detector_free_rate",
    "fiber_transmittance",
    "ideal_decoy_bounds",
    "improvement_factor",
    "max_distance",
    "naive_single_photon_rate",
    "optimize_mu",
    "overall_gain_and_qber",
    "parse_config",
    "pass_efficiency_alice",
    "pass_efficiency_bob",
    "poisson_pmf",
    "secure_key_rate",
    "single_photon_state",
    "sweep",
    "virtual_single_photon_rate",
    "virtual_source_distribution",
    "virtual_unitary_action",
    "yield_n",
]
