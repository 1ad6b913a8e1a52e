"""Radiation-pressure entanglement between the vibration and rotation of a cavity mirror."""
__version__ = "0.1.0"

from .params import DerivedParams, DetuningMode, PhysicalParams, coupling_ratio, derive_params  # noqa: E402
from .steady import (SteadyState, steady_state_feedback,  # noqa: E402
                     steady_state_fixed_detuning)
from .linear import LinearModel, build_linear_model, transfer  # noqa: E402
from .noise import Flavor, brownian_spectrum, input_correlation  # noqa: E402
from .spectra import entanglement_curve, entanglement_measure, find_peak, output_spectrum  # noqa: E402
from .system import System, build_system  # noqa: E402
from .sweeps import SweepAxis, SweepSpec, apply_imbalance, run_sweep, tune_couplings  # noqa: E402

__all__ = [
    "DerivedParams", "DetuningMode", "PhysicalParams", "coupling_ratio", "derive_params",
    "SteadyState", "steady_state_feedback", "steady_state_fixed_detuning",
    "LinearModel", "build_linear_model", "transfer",
    "Flavor", "brownian_spectrum", "input_correlation",
    "entanglement_curve", "entanglement_measure", "find_peak", "output_spectrum",
    "System", "build_system",
    "SweepAxis", "SweepSpec", "apply_imbalance", "run_sweep", "tune_couplings",
]
