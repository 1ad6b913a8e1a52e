"""Independent checks used by the test suite and the ``selfcheck`` command.

Nothing here reuses the matrix machinery it is meant to verify: mechanical
spectra are closed-form, the branch count comes from sign changes on a dense
grid, stability is re-derived with a Routh table, and spectral integrals use a
separate vectorized adaptive Gauss-Kronrod rule.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import QuadratureNotConverged
from .noise import Flavor
from .params import HBAR, K_B, DerivedParams, PhysicalParams
from .linear import IDX, LinearModel, to_quadratures


@dataclass(frozen=True)
class OracleReport:
    name: str
    value: complex | float
    reference: complex | float
    error: float
    tolerance: float
    relative: bool = True

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)

    def line(self) -> str:
        kind = "rel" if self.relative else "abs"
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: value={self.value!r} ref={self.reference!r} {kind}err={self.error:.3g} tol={self.tolerance:g}"


# closed-form mechanical oscillator -----------------------------------------

def _thermal_factor(omega, temperature):
    w = np.asarray(omega, dtype=float)
    if temperature == 0:
        return np.abs(w)
    x = HBAR * w / (2 * K_B * temperature)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(np.abs(x) < 1e-8, 2 * K_B * temperature / HBAR,
                       w * np.cosh(np.clip(x, -700, 700)) / np.sinh(np.clip(x, -700, 700)))
    return np.where(np.abs(x) > 700, np.abs(w), out)


def mechanical_noise(omega, temperature, gamma_j, omega_j, flavor):
    w = np.asarray(omega, dtype=float)
    flavor = Flavor(flavor)
    if flavor is Flavor.COMMUTATOR:
        return 2 * gamma_j / omega_j * w
    sym = gamma_j / omega_j * _thermal_factor(w, temperature)
    if flavor is Flavor.SYMMETRIZED:
        return sym
    return sym + gamma_j / omega_j * w


def decoupled_susceptibility(omega, gamma_j, omega_j):
    """Position response of a damped oscillator to its force noise."""
    w = np.asarray(omega, dtype=float)
    return omega_j / ((omega_j - w) * (omega_j + w) - 1j * gamma_j * w)


def analytic_mechanical_spectrum(omega, temperature, gamma_j, omega_j, flavor):
    """Position density ``omega_j^2 S(omega) / ((omega_j^2 - omega^2)^2 + gamma_j^2 omega^2)``."""
    w = np.asarray(omega, dtype=float)
    den = ((omega_j - w) * (omega_j + w)) ** 2 + (gamma_j * w) ** 2
    return omega_j ** 2 * mechanical_noise(w, temperature, gamma_j, omega_j, flavor) / den


# Routh-Hurwitz ---------------------------------------------------------------

def characteristic_polynomial(A, scale=1.0) -> np.ndarray:
    """Coefficients of det(sI - A/scale), highest power first, by Faddeev-LeVerrier.

    Pass the drift matrix in the real quadrature basis; ``scale`` (a typical
    frequency) keeps the coefficients of comparable size.
    """
    M = np.asarray(A) / scale
    n = M.shape[0]
    coeffs = [1.0 + 0j]
    Mk = np.zeros_like(M)
    eye = np.eye(n)
    for k in range(1, n + 1):
        Mk = M @ Mk + coeffs[-1] * eye
        coeffs.append(-np.trace(M @ Mk) / k)
    coeffs = np.array(coeffs)
    return coeffs.real


def routh_hurwitz_stable(coeffs) -> bool:
    """True when every root of the real polynomial has negative real part."""
    c = np.asarray(coeffs, dtype=float)
    c = np.trim_zeros(c, "f")
    if c[0] < 0:
        c = -c
    if np.any(c <= 0):
        return False
    n = len(c)
    rows = [c[0::2].copy(), c[1::2].copy()]
    width = len(rows[0])
    rows = [np.pad(r, (0, width - len(r))) for r in rows]
    scale = np.max(np.abs(c))
    for _ in range(n - 2):
        a, b = rows[-2], rows[-1]
        if abs(b[0]) <= 1e-14 * scale:
            return False
        new = np.zeros(width)
        new[:-1] = (b[0] * a[1:] - a[0] * b[1:]) / b[0]
        rows.append(new)
    return bool(all(r[0] > 0 for r in rows))


# brute-force bistability scan -------------------------------------------------

def brute_cubic_scan(d: DerivedParams, deltas, powers, samples=20001) -> np.ndarray:
    """Number of positive steady-state photon numbers per (delta, P_in) cell.

    Counts sign changes of ``n[(gamma/2)^2 + (delta - nG)^2] - gamma |a_in|^2``
    on a uniform grid over ``[0, 4.04 |a_in|^2 / gamma]``. Every root lies below
    ``4 |a_in|^2 / gamma``; the margin keeps a root at that bound inside the scan.
    """
    deltas = np.asarray(deltas, dtype=float)
    powers = np.asarray(powers, dtype=float)
    counts = np.zeros((len(deltas), len(powers)), dtype=int)
    G = d.G
    t = np.linspace(0.0, 1.0, samples)
    for j, P in enumerate(powers):
        flux = P / (HBAR * d.omega_c)
        if flux == 0:
            counts[:, j] = 1
            continue
        n = t * 4.04 * flux / d.gamma
        for i, delta in enumerate(deltas):
            f = n * ((d.gamma / 2) ** 2 + (delta - n * G) ** 2) - d.gamma * flux
            s = np.sign(f)
            s = s[s != 0]
            counts[i, j] = int(np.count_nonzero(s[1:] != s[:-1]))
    return counts


def with_power(d: DerivedParams, power: float) -> DerivedParams:
    return dataclasses.replace(d, input_amplitude=math.sqrt(power / (HBAR * d.omega_c)))


# adaptive quadrature ----------------------------------------------------------

_XGK = np.array([0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                 0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                 0.207784955007898467600689403773245, 0.0])
_WGK = np.array([0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                 0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                 0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[1:15:2] = np.concatenate([_WG[:-1], _WG[::-1]])


def adaptive_integrate(f, breakpoints, atol, rtol=0.0, max_rounds=60, max_segments=200000):
    """Integrate vectorized ``f`` over consecutive breakpoints with G7-K15 bisection.

    Each round evaluates all pending segments in one call. Stops when the summed
    Kronrod-Gauss error estimate is below ``max(atol, rtol |I|)``.
    """
    edges = np.unique(np.asarray(breakpoints, dtype=float))
    a, b = edges[:-1], edges[1:]
    done_val = 0.0 + 0.0j
    done_err = 0.0
    for _ in range(max_rounds):
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        x = mid[:, None] + half[:, None] * _NODES[None, :]
        y = np.asarray(f(x.ravel())).reshape(x.shape)
        kron = half * (y @ _KW)
        gauss = half * (y @ _GW)
        err = np.abs(kron - gauss)
        total = done_val + kron.sum()
        tol = max(atol, rtol * abs(total))
        if done_err + err.sum() <= tol:
            return total, done_err + err.sum()
        # freeze segments whose error is already negligible
        share = tol / max(len(a), 1) * 0.5
        keep = err > share
        done_val += kron[~keep].sum()
        done_err += err[~keep].sum()
        a, b = a[keep], b[keep]
        if len(a) == 0:
            return done_val, done_err
        m = 0.5 * (a + b)
        a, b = np.concatenate([a, m]), np.concatenate([m, b])
        if len(a) > max_segments:
            break
    raise QuadratureNotConverged(f"adaptive quadrature stopped with error estimate {done_err + err.sum():.3g}")


def _breakpoints(model: LinearModel, cutoff: float) -> np.ndarray:
    pts = [0.0, -cutoff, cutoff]
    offsets = np.concatenate([[0.0], np.geomspace(0.25, 1e6, 35)])
    for lam in model.eigenvalues:
        centre = abs(lam.imag)
        width = max(abs(lam.real), 1e-300)
        for sign in (1.0, -1.0):
            for o in offsets:
                for s in (1.0, -1.0):
                    x = sign * (centre + s * o * width)
                    if abs(x) < cutoff:
                        pts.append(x)
    return np.unique(pts)


def _tail(f, cutoff):
    """Integral of f beyond +-cutoff assuming power-law decay fitted at cutoff and 2*cutoff."""
    total = 0.0 + 0.0j
    for sign in (1.0, -1.0):
        f1 = complex(f(np.array([sign * cutoff]))[0])
        f2 = complex(f(np.array([sign * 2 * cutoff]))[0])
        if f1 == 0:
            continue
        ratio = abs(f2) / abs(f1)
        p = -math.log2(ratio) if ratio > 0 else 3.0
        p = max(p, 1.5)
        total += f1 * cutoff / (p - 1.0)
    return total


def spectral_integral(model: LinearModel, d: DerivedParams, i, j, temperature=0.0,
                      flavor=Flavor.COMMUTATOR, atol=1e-10, rtol=1e-10):
    """``int dw/2pi V_ij(w)`` for the chosen output-density flavor.

    The real line is cut at ``1e3 max(omega_z, omega_phi, gamma)``, breakpoints
    are placed around every eigenfrequency on a logarithmic ladder of
    linewidths, and the remaining tails are added from a fitted power law.
    """
    from .spectra import output_spectrum_batch

    i = IDX[i] if isinstance(i, str) else int(i)
    j = IDX[j] if isinstance(j, str) else int(j)
    cutoff = 1e3 * max(d.omega_z, d.omega_phi, d.gamma)

    def f(w):
        V, _ = output_spectrum_batch(model, w, temperature, d, flavor)
        return V[:, i, j]

    value, _ = adaptive_integrate(f, _breakpoints(model, cutoff), atol=atol * 2 * math.pi,
                                  rtol=rtol)
    value = value + _tail(f, cutoff)
    return value / (2 * math.pi)


def sumrule_integrate(model: LinearModel, d: DerivedParams, pair=("z", "p_z")):
    """Equal-time commutator recovered from the commutator density; ``i`` for canonical pairs."""
    return spectral_integral(model, d, pair[0], pair[1], 0.0, Flavor.COMMUTATOR)


# self-check ---------------------------------------------------------------------

def run_selfcheck(p: PhysicalParams | None = None) -> list[OracleReport]:
    """All oracle comparisons at the default (or given) parameters."""
    from .noise import input_correlation
    from .spectra import output_spectrum
    from .steady import steady_state_fixed_detuning
    from .sweeps import tune_couplings
    from .system import build_system

    p = PhysicalParams() if p is None else p
    reports = []

    dec = build_system(p.replace(input_power=0.0))
    dd = dec.derived
    grid = np.linspace(0.5, 1.5, 1000) * dd.omega_z
    numeric = np.array([output_spectrum(dec.model, w, input_correlation(w, p.temperature, dd, "SYMMETRIZED")).V[2, 2].real
                        for w in grid])
    analytic = analytic_mechanical_spectrum(grid, p.temperature, dd.gamma_z, dd.omega_z, "SYMMETRIZED")
    reports.append(OracleReport("decoupled V_zz vs closed form (1000 pts)", float(numeric[0]), float(analytic[0]),
                                float(np.max(np.abs(numeric / analytic - 1))), 1e-10))

    val = sumrule_integrate(dec.model, dd, ("z", "p_z"))
    reports.append(OracleReport("sum rule [z,p_z] decoupled", val, 1j, abs(val - 1j), 1e-8))

    coupled = build_system(tune_couplings(p).apply(p))
    for pair, ref, tol, rel in ((("z", "p_z"), 1j, 1e-6, True), (("phi", "L_z"), 1j, 1e-6, True),
                                (("z", "L_z"), 0j, 1e-6, False), (("z", "phi"), 0j, 1e-6, False)):
        val = sumrule_integrate(coupled.model, coupled.derived, pair)
        reports.append(OracleReport(f"sum rule [{pair[0]},{pair[1]}] coupled", val, ref, abs(val - ref), tol, rel))

    A_quad, _ = to_quadratures(coupled.model)
    rh = routh_hurwitz_stable(characteristic_polynomial(A_quad, scale=max(p.omega_z, p.omega_phi)))
    reports.append(OracleReport("Routh-Hurwitz vs eigenvalues", float(rh), float(coupled.model.stable),
                                float(rh != coupled.model.stable), 0.0, False))

    deltas = np.linspace(0.0, 10.0 * coupled.derived.gamma, 50)
    powers = np.linspace(0.5e-3, 50e-3, 50)
    brute = brute_cubic_scan(coupled.derived, deltas, powers)
    fast = np.array([[len(steady_state_fixed_detuning(with_power(coupled.derived, P), dl)) for P in powers]
                     for dl in deltas])
    reports.append(OracleReport("cubic branches vs brute scan (50x50)", int(np.sum(fast != brute)), 0,
                                float(np.sum(fast != brute)), 0.0, False))

    vac = build_system(p.replace(input_power=0.0, temperature=0.0, omega_phi=p.omega_z, Q_phi=p.Q_z))
    w = np.linspace(0.5, 1.5, 1000) * p.omega_z
    E = vac.curve(w, 0.0).E
    reports.append(OracleReport("vacuum E = 1 (decoupled, T = 0)", float(E[0]), 1.0,
                                float(np.max(np.abs(E - 1))), 1e-9))
    return reports
