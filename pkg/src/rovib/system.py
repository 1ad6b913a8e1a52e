"""Convenience pipeline: physical parameters -> working point -> linear model."""
from __future__ import annotations

from dataclasses import dataclass

from .linear import LinearModel, build_linear_model
from .params import DerivedParams, PhysicalParams, derive_params
from .spectra import EntanglementCurve, entanglement_curve, mechanical_band, omega_grid
from .steady import SteadyState, solve_steady_state


@dataclass(frozen=True, eq=False)
class System:
    params: PhysicalParams
    derived: DerivedParams
    steady: SteadyState
    model: LinearModel

    @property
    def stable(self) -> bool:
        return self.model.stable

    def curve(self, omegas, temperature=None) -> EntanglementCurve:
        T = self.params.temperature if temperature is None else temperature
        return entanglement_curve(self.model, self.derived, omegas, T)

    def default_grid(self, lo_factor=0.95, hi_factor=1.05, points=400, dense=True):
        w = self.params.omega_phi
        return omega_grid(self.derived, lo_factor * w, hi_factor * w, points, dense=dense)

    def peak_grid(self):
        return mechanical_band(self.derived)

    def strongest_entanglement(self, temperature=None):
        """(omega_peak, E_min) over the dense mechanical band."""
        curve = self.curve(self.peak_grid(), temperature)
        return curve.peak(linewidth=min(self.derived.gamma_z, self.derived.gamma_phi))


def build_system(p: PhysicalParams) -> System:
    d = derive_params(p)
    s = solve_steady_state(p, d)
    return System(params=p, derived=d, steady=s, model=build_linear_model(d, s))
