"""Raman pulse engineering and dynamics for stimulated Raman adiabatic
passage and its shortcut-to-adiabatic acceleration.

The package synthesizes Gaussian and reshaped (shortcut) Raman pulse
pairs, propagates the associated three-level and effective two-level
Schrodinger dynamics with certified unitarity, and runs the full set of
numerical campaigns (transfer dynamics, speedup analysis, robustness
sweeps, multi-cycle operations, Bloch-sphere trajectories).
"""

from .config import (
    LARGE_DETUNING_RATIO,
    TWO_PI,
    PulseConfig,
    SystemConfig,
    ValidationReport,
    validate_config,
)
from .dynamics import (
    DressedBasis,
    EffectiveField,
    HamiltonianKind,
    HamiltonianSample,
    Trajectory,
    build_hamiltonian,
    dressed_basis,
    effective_field,
    gauge_transform,
    hamiltonian_of_time,
    propagate,
    spin_polarization,
    transfer_efficiency,
)
from .errors import (
    ConfigError,
    ContractError,
    DegeneratePulseError,
    DomainError,
    IntegrationError,
    ParseError,
    SearchError,
    SingularityError,
    StirsapError,
)
from .experiments import (
    BlochComparison,
    Protocol,
    RobustnessSpec,
    SpeedupReport,
    SweepResult,
    bloch_comparison,
    efficiency_vs_time,
    minimal_time,
    multi_cycle,
    required_peak,
    robustness_sweep,
    run_dynamics,
    speedup_analysis,
)
from .io import RunManifest, parse_config
from .pulses import (
    EffectiveParams,
    PulseSamplePair,
    ShortcutTable,
    counter_diabatic_rabi,
    default_grid,
    effective_params,
    gaussian_pair,
    phi_and_derivative,
    pulses_from_effective,
    shortcut_params,
    shortcut_peak,
    shortcut_pulse_pair,
    stirsap_pulses,
)

__version__ = "0.1.0"

__all__ = [
    "BlochComparison",
    "ConfigError",
    "ContractError",
    "DegeneratePulseError",
    "DomainError",
    "DressedBasis",
    "EffectiveField",
    "EffectiveParams",
    "HamiltonianKind",
    "HamiltonianSample",
    "IntegrationError",
    "LARGE_DETUNING_RATIO",
    "ParseError",
    "Protocol",
    "PulseConfig",
    "PulseSamplePair",
    "RobustnessSpec",
    "RunManifest",
    "SearchError",
    "ShortcutTable",
    "SingularityError",
    "SpeedupReport",
    "StirsapError",
    "SweepResult",
    "SystemConfig",
    "TWO_PI",
    "Trajectory",
    "ValidationReport",
    "bloch_comparison",
    "build_hamiltonian",
    "counter_diabatic_rabi",
    "default_grid",
    "dressed_basis",
    "effective_field",
    "effective_params",
    "efficiency_vs_time",
    "gauge_transform",
    "gaussian_pair",
    "hamiltonian_of_time",
    "minimal_time",
    "multi_cycle",
    "parse_config",
    "phi_and_derivative",
    "propagate",
    "pulses_from_effective",
    "required_peak",
    "robustness_sweep",
    "run_dynamics",
    "shortcut_params",
    "shortcut_peak",
    "shortcut_pulse_pair",
    "speedup_analysis",
    "spin_polarization",
    "stirsap_pulses",
    "transfer_efficiency",
    "validate_config",
]
