"""Classical working point of the driven cavity and mirror.

In feedback mode the net detuning is held fixed and the intracavity amplitude
follows in closed form. In fixed-detuning mode the photon number ``n`` solves

    n [(gamma/2)^2 + (delta - n G)^2] = gamma |a_in|^2

which has one or three positive roots (dispersive bistability).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import NumericalFailure
from .params import DerivedParams, DetuningMode, PhysicalParams

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class SteadyState:
    a_s: float
    z_s: float
    phi_s: float
    effective_detuning: float
    G: float
    p_z_s: float = 0.0
    L_z_s: float = 0.0

    @property
    def photon_number(self) -> float:
        return self.a_s ** 2


@dataclass(frozen=True)
class BistabilityBranch:
    photon_number: float
    branch_index: int
    stable: bool


def _state_from_photons(d: DerivedParams, n: float, Delta: float) -> SteadyState:
    return SteadyState(
        a_s=math.sqrt(n),
        z_s=d.g_z * n / d.omega_z,
        phi_s=-d.g_phi * n / d.omega_phi,
        effective_detuning=Delta,
        G=d.G,
    )


def steady_state_feedback(d: DerivedParams, Delta: float) -> SteadyState:
    """Working point with the net detuning servo-locked to ``Delta``."""
    n = d.gamma * d.input_flux / (d.gamma ** 2 / 4.0 + Delta ** 2)
    return _state_from_photons(d, n, Delta)


def cubic_coefficients(d: DerivedParams, delta: float) -> np.ndarray:
    """Coefficients (highest power first) of f(n) = n[(g/2)^2 + (delta - nG)^2] - g a_in^2."""
    G = d.G
    return np.array([G * G, -2.0 * delta * G, d.gamma ** 2 / 4.0 + delta ** 2,
                     -d.gamma * d.input_flux])


def _cubic(coeffs, n):
    a, b, c, e = coeffs
    return ((a * n + b) * n + c) * n + e


def _cubic_prime(coeffs, n):
    a, b, c, _ = coeffs
    return (3.0 * a * n + 2.0 * b) * n + c


def cubic_discriminant(d: DerivedParams, delta: float) -> float:
    """Discriminant of the steady-state cubic in the scaled variable n / n_max.

    Positive means three distinct real (hence positive) roots; negative means one.
    """
    flux = d.gamma * d.input_flux
    if flux == 0.0:
        return -1.0
    n_max = 4.0 * d.input_flux / d.gamma
    a3, a2, a1, a0 = cubic_coefficients(d, delta)
    a = a3 * n_max ** 3 / flux
    b = a2 * n_max ** 2 / flux
    c = a1 * n_max / flux
    e = a0 / flux
    return 18 * a * b * c * e - 4 * b ** 3 * e + b * b * c * c - 4 * a * c ** 3 - 27 * a * a * e * e


def _polish(coeffs, n, lo, hi, scale):
    for _ in range(3):
        fp = _cubic_prime(coeffs, n)
        if fp == 0.0:
            break
        step = _cubic(coeffs, n) / fp
        trial = n - step
        if not (lo <= trial <= hi) or abs(_cubic(coeffs, trial)) > abs(_cubic(coeffs, n)):
            break
        n = trial
        if abs(step) <= 1e-16 * scale:
            break
    return n


def steady_state_fixed_detuning(d: DerivedParams, delta: float) -> list[BistabilityBranch]:
    """All positive photon-number roots at bare detuning ``delta``, ascending.

    Roots are bracketed between the critical points of the cubic, isolated with
    Brent's method and polished with Newton steps. A root is labelled unstable
    when the slope dn/dP_in is negative, which is the middle branch of three.
    """
    coeffs = cubic_coefficients(d, delta)
    flux = -coeffs[3]
    if flux == 0.0:
        return [BistabilityBranch(0.0, 1, True)]
    if coeffs[0] == 0.0:
        return [BistabilityBranch(flux / coeffs[2], 1, True)]

    n_max = 4.0 * d.input_flux / d.gamma  # f(n) >= n (gamma/2)^2 - flux
    # critical points of f bound the monotone pieces
    a, b, c, _ = coeffs
    disc_p = 4.0 * b * b - 12.0 * a * c
    edges = [0.0]
    if disc_p > 0.0:
        sq = math.sqrt(disc_p)
        for cp in sorted(((-2.0 * b - sq) / (6.0 * a), (-2.0 * b + sq) / (6.0 * a))):
            if 0.0 < cp < n_max:
                edges.append(cp)
    edges.append(n_max)

    f = lambda n: _cubic(coeffs, n)
    roots = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        flo, fhi = f(lo), f(hi)
        if flo == 0.0:
            root = lo
        elif fhi == 0.0:
            root = hi
        elif flo * fhi < 0.0:
            root = brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        else:
            continue
        root = _polish(coeffs, root, lo, hi, n_max)
        if roots and abs(root - roots[-1]) <= 1e-12 * n_max:
            continue
        roots.append(root)

    # two roots only when sitting exactly on a fold (double root); both are reported
    if not roots:
        raise NumericalFailure(f"no positive root found for cubic coefficients {coeffs.tolist()}")
    for root in roots:
        if abs(f(root)) > RESIDUAL_TOL * flux:
            raise NumericalFailure(
                f"root polishing did not converge (residual {abs(f(root)) / flux:.3g}); "
                f"cubic coefficients {coeffs.tolist()}")
    return [BistabilityBranch(float(n), i + 1, bool(_cubic_prime(coeffs, n) > 0.0 or len(roots) == 1))
            for i, n in enumerate(roots)]


def steady_state_from_branch(d: DerivedParams, delta: float, branch: BistabilityBranch) -> SteadyState:
    n = branch.photon_number
    return _state_from_photons(d, n, delta - n * d.G)


def solve_steady_state(p: PhysicalParams, d: DerivedParams) -> SteadyState:
    """Working point for the configured detuning mode.

    In fixed mode with three branches the lowest (stable) branch is used.
    """
    if p.detuning_mode is DetuningMode.FEEDBACK:
        return steady_state_feedback(d, p.detuning_value)
    branches = steady_state_fixed_detuning(d, p.detuning_value)
    return steady_state_from_branch(d, p.detuning_value, branches[0])
