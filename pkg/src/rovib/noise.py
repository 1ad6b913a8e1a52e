"""Input-noise correlation densities.

Densities are defined by ``<n_i(w) n_j(w')> = 2 pi delta(w + w') C_ij(w)``,
with the same normalization used for every spectral quantity in the package.
The optical input is vacuum; each mechanical bath has the quantum Brownian
density ``(gamma_j/omega_j) w [1 + coth(hbar w / 2 k_B T)]``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .params import HBAR, K_B, DerivedParams

COTH_SERIES_LIMIT = 1e-6
COTH_SATURATION = 30.0


class Flavor(str, enum.Enum):
    RAW = "RAW"
    SYMMETRIZED = "SYMMETRIZED"
    COMMUTATOR = "COMMUTATOR"


@dataclass(frozen=True, eq=False)
class InputCorrelation:
    omega: float
    temperature: float
    flavor: Flavor
    C: np.ndarray


def omega_coth(omega, temperature):
    """``w coth(hbar w / 2 k_B T)`` with the small-argument and T = 0 limits handled.

    Returns ``|w|`` at T = 0 and ``2 k_B T / hbar + hbar w^2 / (6 k_B T)`` for
    ``|x| < 1e-6``; coth saturates to sign(x) beyond ``|x| > 30``.
    """
    w = np.asarray(omega, dtype=float)
    if temperature == 0.0:
        return np.abs(w)
    with np.errstate(divide="ignore", over="ignore"):
        x = HBAR * w / (2.0 * K_B * temperature)
    ax = np.abs(x)
    small = ax < COTH_SERIES_LIMIT
    big = ax > COTH_SATURATION
    mid = ~(small | big)
    out = np.empty_like(w)
    out[small] = 2.0 * K_B * temperature / HBAR + HBAR * w[small] ** 2 / (6.0 * K_B * temperature)
    out[big] = np.abs(w[big])
    out[mid] = w[mid] / np.tanh(x[mid])
    return out


def brownian_spectrum(omega, temperature, gamma_j, omega_j):
    """Raw (non-symmetrized) Brownian force density of one mechanical bath."""
    w = np.asarray(omega, dtype=float)
    return gamma_j / omega_j * (w + omega_coth(w, temperature))


def _raw(omegas, temperature, d):
    C = np.zeros((len(omegas), 4, 4), dtype=complex)
    C[:, 0, 1] = 1.0
    C[:, 2, 2] = brownian_spectrum(omegas, temperature, d.gamma_z, d.omega_z)
    C[:, 3, 3] = brownian_spectrum(omegas, temperature, d.gamma_phi, d.omega_phi)
    return C


def input_correlation_batch(omegas, temperature, d: DerivedParams, flavor) -> np.ndarray:
    """Correlation densities at each frequency, shape ``(len(omegas), 4, 4)``."""
    flavor = Flavor(flavor)
    w = np.atleast_1d(np.asarray(omegas, dtype=float))
    raw = _raw(w, temperature, d)
    if flavor is Flavor.RAW:
        return raw
    mirrored = np.swapaxes(_raw(-w, temperature, d), 1, 2)
    if flavor is Flavor.SYMMETRIZED:
        return 0.5 * (raw + mirrored)
    return raw - mirrored


def input_correlation(omega, temperature, d: DerivedParams, flavor) -> InputCorrelation:
    flavor = Flavor(flavor)
    C = input_correlation_batch([omega], temperature, d, flavor)[0]
    return InputCorrelation(omega=float(omega), temperature=float(temperature), flavor=flavor, C=C)
