"""Physical inputs of the mirror/cavity system and the rates derived from them.

All frequencies are angular (rad/s). The defaults describe a reference
operating point: a 1 ug mirror of radius 15 um, Q = 1e6 for both mechanical
modes at 2*pi*1 MHz, charge-82 Laguerre-Gaussian drive at 812.7 nm and 1 mW,
a 4 mm cavity of finesse 2.5e4, and net detuning equal to the rotational
frequency.
"""
from __future__ import annotations

import dataclasses
import enum
import math
import warnings
from dataclasses import dataclass

from .errors import InvalidParams, ResonanceMismatch

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J/K
C_LIGHT = 2.99792458e8  # m/s

#: Relative |L - n*lambda/2| / L above which a ResonanceMismatch warning is issued.
RESONANCE_TOLERANCE = 1e-4

TWO_PI_MHZ = 2.0 * math.pi * 1e6


class DetuningMode(str, enum.Enum):
    """How ``detuning_value`` is interpreted.

    FEEDBACK: the value is the net detuning (servo-locked, no bistability).
    FIXED: the value is the bare laser-cavity detuning; the radiation-pressure
    shift is solved self-consistently.
    """

    FEEDBACK = "FEEDBACK"
    FIXED = "FIXED"


@dataclass(frozen=True)
class PhysicalParams:
    mass: float = 1e-9
    mirror_radius: float = 15e-6
    omega_z: float = TWO_PI_MHZ
    omega_phi: float = TWO_PI_MHZ
    Q_z: float = 1e6
    Q_phi: float = 1e6
    oam_charge: int = 82
    cavity_length: float = 4e-3
    finesse: float = 2.5e4
    wavelength: float = 812.7e-9
    input_power: float = 1e-3
    detuning_mode: DetuningMode = DetuningMode.FEEDBACK
    detuning_value: float = TWO_PI_MHZ
    temperature: float = 1.0

    def __post_init__(self):
        mode = self.detuning_mode
        if not isinstance(mode, DetuningMode):
            try:
                mode = DetuningMode(str(mode).upper())
            except ValueError:
                raise InvalidParams(f"detuning_mode must be FEEDBACK or FIXED, got {self.detuning_mode!r}")
            object.__setattr__(self, "detuning_mode", mode)
        l = self.oam_charge
        if isinstance(l, float) and l.is_integer():
            object.__setattr__(self, "oam_charge", int(l))
        elif not isinstance(l, int) or isinstance(l, bool):
            raise InvalidParams(f"oam_charge must be an integer, got {l!r}")
        self.validate()

    def validate(self):
        positive = ("mass", "mirror_radius", "omega_z", "omega_phi", "Q_z", "Q_phi",
                    "cavity_length", "wavelength")
        for name in positive:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParams(f"{name} must be finite and > 0, got {value!r}")
        if not (math.isfinite(self.finesse) and self.finesse > 1):
            raise InvalidParams(f"finesse must be > 1, got {self.finesse!r}")
        for name in ("input_power", "temperature"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidParams(f"{name} must be finite and >= 0, got {value!r}")
        if self.oam_charge < 1:
            raise InvalidParams(f"oam_charge must be >= 1, got {self.oam_charge}")
        if not math.isfinite(self.detuning_value):
            raise InvalidParams("detuning_value must be finite")

    def replace(self, **changes) -> "PhysicalParams":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["detuning_mode"] = self.detuning_mode.value
        return out


@dataclass(frozen=True)
class DerivedParams:
    omega_c: float
    mode_index: int
    wave_number: float
    moment_of_inertia: float
    g_z: float
    g_phi: float
    gamma: float
    gamma_z: float
    gamma_phi: float
    input_amplitude: float
    omega_z: float
    omega_phi: float
    resonance_error: float

    @property
    def G(self) -> float:
        """Radiation-pressure frequency shift per intracavity photon (rad/s)."""
        return self.g_z ** 2 / self.omega_z + self.g_phi ** 2 / self.omega_phi

    @property
    def input_flux(self) -> float:
        return self.input_amplitude ** 2

    def as_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["G"] = self.G
        return out


def resonance_error(cavity_length: float, wavelength: float) -> tuple[int, float]:
    """Nearest longitudinal mode index and the relative length mismatch."""
    n = max(1, round(2.0 * cavity_length / wavelength))
    return n, abs(cavity_length - n * wavelength / 2.0) / cavity_length


def derive_params(p: PhysicalParams, resonance_tolerance: float = RESONANCE_TOLERANCE) -> DerivedParams:
    """Compute cavity frequency, couplings and damping rates from SI inputs.

    The opto-vibrational coupling is ``(omega_c / L) sqrt(hbar / (M omega_z))``
    and the opto-rotational one ``(c l / L) sqrt(hbar / (I omega_phi))`` with
    ``I = M R^2 / 2``. The cavity energy decay rate is the free spectral range
    over the finesse, ``pi c / (L F)``.

    Warns with :class:`ResonanceMismatch` when ``L`` is not within a relative
    ``resonance_tolerance`` of a multiple of half the wavelength. The mismatch
    never exceeds ``lambda / 4L``, so the default only flags short cavities.
    """
    p.validate()
    L = p.cavity_length
    omega_c = 2.0 * math.pi * C_LIGHT / p.wavelength
    n, err = resonance_error(L, p.wavelength)
    if err > resonance_tolerance:
        warnings.warn(
            f"cavity length {L!r} m is off resonance: |L - n lambda/2|/L = {err:.3g} (n = {n})",
            ResonanceMismatch, stacklevel=2)
    inertia = p.mass * p.mirror_radius ** 2 / 2.0
    g_z = omega_c / L * math.sqrt(HBAR / (p.mass * p.omega_z))
    g_phi = C_LIGHT * p.oam_charge / L * math.sqrt(HBAR / (inertia * p.omega_phi))
    return DerivedParams(
        omega_c=omega_c,
        mode_index=n,
        wave_number=2.0 * math.pi / p.wavelength,
        moment_of_inertia=inertia,
        g_z=g_z,
        g_phi=g_phi,
        gamma=math.pi * C_LIGHT / (L * p.finesse),
        gamma_z=p.omega_z / p.Q_z,
        gamma_phi=p.omega_phi / p.Q_phi,
        input_amplitude=math.sqrt(p.input_power / (HBAR * omega_c)),
        omega_z=p.omega_z,
        omega_phi=p.omega_phi,
        resonance_error=err,
    )


def coupling_ratio(d: DerivedParams, p: PhysicalParams) -> float:
    """g_z / g_phi from the geometric closed form (no cavity length dependence)."""
    return (2.0 * math.pi / (p.oam_charge * p.wavelength)
            * math.sqrt(d.moment_of_inertia * p.omega_phi / (p.mass * p.omega_z)))
