"""Resonator-mediated controlled-phase-flip gate simulator.

Pipelines: device parameters -> shaped input pulse -> state-dependent
reflection (analytic, spectral filter, mean-field, or master-equation
backends) -> pulse decomposition -> average gate fidelity.
"""

from .device import DeviceParams, reference_device
from .errors import ConfigError, NumericsError
from .gate import (
    FidelityPoint,
    GateInputs,
    gate_fidelity,
    input_mean_photon,
    sweep_coupling_variation,
    sweep_photon_number,
)
from .pulse import Pulse, TimeGrid, default_grid, gaussian_pulse
from .scattering import (
    ReflectionResult,
    joint_state,
    reflection_filter,
    scatter_all_states,
    xi_analytic,
    xi_effective,
)

__all__ = [
    "ConfigError",
    "DeviceParams",
    "FidelityPoint",
    "GateInputs",
    "NumericsError",
    "Pulse",
    "ReflectionResult",
    "TimeGrid",
    "default_grid",
    "gate_fidelity",
    "gaussian_pulse",
    "input_mean_photon",
    "joint_state",
    "reference_device",
    "reflection_filter",
    "scatter_all_states",
    "sweep_coupling_variation",
    "sweep_photon_number",
    "xi_analytic",
    "xi_effective",
]

__version__ = "0.1.0"
