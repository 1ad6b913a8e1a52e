"""Output spectral densities and the ro-vibrational entanglement measure.

Output densities obey ``<dx_i(w) dx_j(w')> = 2 pi delta(w + w') V_ij(w)`` and are
obtained from the single propagation rule ``V(w) = T(w) C(w) T(-w)^T``.

For the Hermitian combination ``R_w = [dw(w) + dw(-w)] / 2`` the variance
density is ``(V_ww(w) + V_ww(-w)) / 4``. The measure is

    E(w) = <R_u^2> <R_v^2> / |<[R_z, R_pz]>|^2

with ``u = z - phi`` and ``v = p_z + L_z``; the formally divergent 2 pi delta(0)
factors cancel between numerator and denominator, so E is a ratio of
densities. Vacuum-driven identical decoupled oscillators give E = 1 exactly;
E < 1 witnesses entanglement.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator, FlavorMismatch, GridTooCoarse, NumericalFailure
from .linear import IDX, LinearModel, transfer_batch
from .noise import Flavor, InputCorrelation, input_correlation_batch
from .params import DerivedParams

U_COEFFS = np.array([0, 0, 1, 0, -1, 0], dtype=float)
V_COEFFS = np.array([0, 0, 0, 1, 0, 1], dtype=float)

# rows: a, a^dag, u = z - phi, v = p_z + L_z, z + phi, p_z - L_z
EPR_BASIS = np.array([
    [1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    U_COEFFS,
    V_COEFFS,
    [0, 0, 1, 0, 1, 0],
    [0, 0, 0, 1, 0, -1],
], dtype=float)
EPR_BASIS_INV = np.linalg.inv(EPR_BASIS)
IMAG_TOL = 1e-10
MIN_DENOMINATOR = 1e-300
POINTS_PER_LINEWIDTH = 20


@dataclass(frozen=True, eq=False)
class OutputSpectralMatrix:
    omega: float
    flavor: Flavor
    V: np.ndarray


@dataclass(frozen=True)
class SpectrumPoint:
    omega: float
    V_Ru: float
    V_Rv: float
    D: float
    E: float


@dataclass(frozen=True, eq=False)
class EntanglementCurve:
    omega: np.ndarray
    E: np.ndarray
    V_Ru: np.ndarray
    V_Rv: np.ndarray
    D: np.ndarray

    def __len__(self):
        return len(self.omega)

    def point(self, i) -> SpectrumPoint:
        return SpectrumPoint(float(self.omega[i]), float(self.V_Ru[i]), float(self.V_Rv[i]),
                             float(self.D[i]), float(self.E[i]))

    def peak(self, linewidth=None):
        return find_peak(self.omega, self.E, linewidth)

    def bandwidth(self):
        return entangled_intervals(self.omega, self.E)


def _propagate(T_pos, C, T_neg):
    return T_pos @ C @ np.swapaxes(T_neg, 1, 2)


def output_spectrum_batch(m: LinearModel, omegas, temperature, d: DerivedParams, flavor):
    """Output densities at ``omegas`` and at ``-omegas``, each ``(N, 6, 6)``."""
    w = np.atleast_1d(np.asarray(omegas, dtype=float))
    T_pos = transfer_batch(m, w)
    T_neg = transfer_batch(m, -w)
    C_pos = input_correlation_batch(w, temperature, d, flavor)
    C_neg = input_correlation_batch(-w, temperature, d, flavor)
    return _propagate(T_pos, C_pos, T_neg), _propagate(T_neg, C_neg, T_pos)


def output_spectrum(m: LinearModel, omega: float, c: InputCorrelation) -> OutputSpectralMatrix:
    """Propagate one input correlation density through the linear response."""
    T_pos = transfer_batch(m, [omega])
    T_neg = transfer_batch(m, [-omega])
    V = _propagate(T_pos, c.C[None], T_neg)[0]
    return OutputSpectralMatrix(omega=float(omega), flavor=c.flavor, V=V)


def _combine(V_pos, V_neg, coeffs, flavor):
    c = np.asarray(coeffs, dtype=float)
    dens = 0.25 * (np.einsum("i,...ij,j->...", c, V_pos, c) + np.einsum("i,...ij,j->...", c, V_neg, c))
    if Flavor(flavor) is not Flavor.SYMMETRIZED:
        return dens
    scale = np.maximum(np.abs(dens.real), np.finfo(float).tiny)
    if np.any(np.abs(dens.imag) > IMAG_TOL * scale):
        raise NumericalFailure("symmetrized quadrature density has a non-negligible imaginary part")
    return dens.real


def quadrature_density(V_pos: OutputSpectralMatrix, V_neg: OutputSpectralMatrix, coeffs):
    """Variance density of ``R_w`` for ``dw = coeffs . dx``.

    Real for the symmetrized flavor, complex otherwise.
    """
    if V_pos.flavor is not V_neg.flavor:
        raise FlavorMismatch(f"{V_pos.flavor.value} vs {V_neg.flavor.value}")
    if V_neg.omega != -V_pos.omega:
        raise ValueError("second matrix must be evaluated at the opposite frequency")
    out = _combine(V_pos.V, V_neg.V, coeffs, V_pos.flavor)
    return out.item() if np.ndim(out) == 0 else out


def entanglement_curve(m: LinearModel, d: DerivedParams, omegas, temperature) -> EntanglementCurve:
    """Evaluate E and its ingredients at every frequency in ``omegas`` (none may be 0)."""
    w = np.atleast_1d(np.asarray(omegas, dtype=float))
    if np.any(w == 0.0):
        raise ValueError("omega = 0 is excluded: the quadrature construction degenerates there")
    m.require_stable()
    # solve in the EPR basis so that u and v are not formed by cancellation
    R_pos = transfer_batch(m, w, basis=EPR_BASIS)
    R_neg = transfer_batch(m, -w, basis=EPR_BASIS)
    C_pos = input_correlation_batch(w, temperature, d, Flavor.SYMMETRIZED)
    C_neg = input_correlation_batch(-w, temperature, d, Flavor.SYMMETRIZED)
    S_pos = _propagate(R_pos, C_pos, R_neg)
    S_neg = _propagate(R_neg, C_neg, R_pos)
    unit_u = np.eye(6)[2]
    unit_v = np.eye(6)[3]
    V_Ru = _combine(S_pos, S_neg, unit_u, Flavor.SYMMETRIZED)
    V_Rv = _combine(S_pos, S_neg, unit_v, Flavor.SYMMETRIZED)

    T_pos = EPR_BASIS_INV @ R_pos
    T_neg = EPR_BASIS_INV @ R_neg
    K_pos = _propagate(T_pos, input_correlation_batch(w, temperature, d, Flavor.COMMUTATOR), T_neg)
    K_neg = _propagate(T_neg, input_correlation_batch(-w, temperature, d, Flavor.COMMUTATOR), T_pos)
    iz, ip = IDX["z"], IDX["p_z"]
    D = 0.25 * np.abs(K_pos[:, iz, ip] + K_neg[:, iz, ip])
    if np.any(D < MIN_DENOMINATOR):
        bad = w[np.argmin(D)]
        raise DegenerateDenominator(f"commutator density vanishes at omega = {bad!r}")
    return EntanglementCurve(omega=w, E=V_Ru * V_Rv / D ** 2, V_Ru=V_Ru, V_Rv=V_Rv, D=D)


def entanglement_measure(m: LinearModel, d: DerivedParams, omega: float, temperature: float) -> SpectrumPoint:
    return entanglement_curve(m, d, [omega], temperature).point(0)


def find_peak(omegas, E, linewidth=None):
    """Frequency and value of the strongest entanglement (smallest E).

    The grid argmin is refined by a parabola through it and its neighbours.
    With ``linewidth`` given, raises :class:`GridTooCoarse` unless at least 11
    points span one linewidth around the minimum.
    """
    w = np.asarray(omegas, dtype=float)
    e = np.asarray(E, dtype=float)
    keep = np.isfinite(e)
    w, e = w[keep], e[keep]
    if len(w) == 0:
        raise ValueError("no finite values to search")
    order = np.lexsort((e, w))
    w, e = w[order], e[order]
    i = int(np.argmin(e))
    if linewidth is not None:
        lo, hi = max(i - 1, 0), min(i + 1, len(w) - 1)
        step = np.max(np.diff(w[lo:hi + 1])) if hi > lo else np.inf
        if not linewidth / step >= 10.0:
            raise GridTooCoarse(f"grid step {step:.4g} rad/s is too coarse for linewidth {linewidth:.4g} rad/s")
    if i == 0 or i == len(w) - 1:
        return float(w[i]), float(e[i])
    x0, x1, x2 = w[i - 1:i + 2]
    y0, y1, y2 = e[i - 1:i + 2]
    # Newton divided differences of the interpolating parabola
    d1 = (y1 - y0) / (x1 - x0)
    d2 = ((y2 - y1) / (x2 - x1) - d1) / (x2 - x0)
    if not d2 > 0.0:
        return float(w[i]), float(e[i])
    xv = 0.5 * (x0 + x1) - d1 / (2.0 * d2)
    xv = min(max(xv, x0), x2)
    yv = y0 + d1 * (xv - x0) + d2 * (xv - x0) * (xv - x1)
    return float(xv), float(min(yv, y1))


def entangled_intervals(omegas, E, threshold=1.0):
    """Frequency intervals where ``E < threshold``, ends linearly interpolated."""
    w = np.asarray(omegas, dtype=float)
    e = np.asarray(E, dtype=float)
    order = np.argsort(w, kind="stable")
    w, e = w[order], e[order]
    below = np.isfinite(e) & (e < threshold)
    intervals = []
    i = 0
    n = len(w)
    while i < n:
        if not below[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and below[j + 1]:
            j += 1
        lo = w[i] if i == 0 else _cross(w[i - 1], e[i - 1], w[i], e[i], threshold)
        hi = w[j] if j == n - 1 else _cross(w[j], e[j], w[j + 1], e[j + 1], threshold)
        intervals.append((float(lo), float(hi)))
        i = j + 1
    return intervals


def _cross(x0, y0, x1, y1, level):
    if not (np.isfinite(y0) and np.isfinite(y1)) or y1 == y0:
        return x0 if y0 < level else x1
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def mechanical_band(d: DerivedParams, margin=5.0, points_per_linewidth=POINTS_PER_LINEWIDTH):
    """Dense uniform grid over both mechanical resonances, centred on their mean.

    Spans ``[min(w_z, w_phi) - margin*gamma_m, max + margin*gamma_m]`` with
    ``gamma_m`` the larger intrinsic damping rate; the step is the smaller
    damping rate over ``points_per_linewidth``.
    """
    width = max(d.gamma_z, d.gamma_phi)
    step = min(d.gamma_z, d.gamma_phi) / points_per_linewidth
    lo = min(d.omega_z, d.omega_phi) - margin * width
    hi = max(d.omega_z, d.omega_phi) + margin * width
    centre = 0.5 * (d.omega_z + d.omega_phi)
    k_lo = int(np.floor((lo - centre) / step))
    k_hi = int(np.ceil((hi - centre) / step))
    return centre + step * np.arange(k_lo, k_hi + 1)


def omega_grid(d: DerivedParams, lo, hi, points, dense=True):
    """Uniform grid on ``[lo, hi]`` merged with the dense mechanical band (clipped)."""
    grid = np.linspace(lo, hi, int(points))
    if dense:
        band = mechanical_band(d)
        band = band[(band >= min(lo, hi)) & (band <= max(lo, hi))]
        grid = np.concatenate([grid, band])
    grid = np.unique(grid)
    return grid[grid != 0.0]
