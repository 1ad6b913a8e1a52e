"""Parameter studies: coupling imbalance, cartesian sweeps and the wavelength tuner."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidParams, NoResonanceInWindow, RovibError, TargetUnreachable
from .params import PhysicalParams, coupling_ratio, derive_params
from .system import build_system

AXIS_NAMES = ("omega", "temperature", "imbalance_percent", "detuning", "power")
BALANCE_TOLERANCE = 1e-6
TUNE_TARGET = 1e-6
LENGTH_WINDOW = 200e-6


def ratio_of(p: PhysicalParams) -> float:
    return coupling_ratio(derive_params(p), p)


def apply_imbalance(p: PhysicalParams, imbalance_percent: float, via: str = "omega_phi") -> PhysicalParams:
    """Return params with ``g_z / g_phi = 1 + imbalance_percent / 100``.

    The baseline must already be balanced. By default the rotational frequency
    is rescaled (``g_z/g_phi`` grows as ``sqrt(omega_phi)``); ``via="radius"``
    rescales the mirror radius instead. Optical parameters, including the
    detuning, are left untouched.
    """
    r0 = ratio_of(p)
    if abs(r0 - 1.0) > BALANCE_TOLERANCE:
        raise InvalidParams(f"baseline couplings are not balanced (g_z/g_phi - 1 = {r0 - 1:.3g}); tune first")
    target = 1.0 + imbalance_percent / 100.0
    if not target > 0.0:
        raise InvalidParams(f"imbalance {imbalance_percent}% gives a non-positive coupling ratio")
    if via == "omega_phi":
        return p.replace(omega_phi=p.omega_phi * (target / r0) ** 2)
    if via == "radius":
        return p.replace(mirror_radius=p.mirror_radius * target / r0)
    raise ValueError(f"unknown imbalance realization {via!r}")


def frequency_mismatch_imbalance(centre: float, difference: float) -> float:
    """Percent change of ``g_z/g_phi`` caused by ``omega_phi - omega_z = difference``
    around ``centre``, all else equal."""
    wz = centre - difference / 2.0
    wp = centre + difference / 2.0
    return 100.0 * (math.sqrt(wp / wz) - 1.0)


@dataclass(frozen=True)
class SweepAxis:
    name: str
    min: float
    max: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise InvalidParams(f"unknown sweep axis {self.name!r}; expected one of {AXIS_NAMES}")
        if self.spacing not in ("linear", "log"):
            raise InvalidParams(f"spacing must be linear or log, got {self.spacing!r}")
        if int(self.points) != self.points or self.points < 1:
            raise InvalidParams("points must be a positive integer")
        if self.points == 1:
            if self.min != self.max:
                raise InvalidParams("a single-point axis needs min == max")
        elif not self.min < self.max:
            raise InvalidParams("axis needs min < max")
        if self.spacing == "log" and self.min <= 0:
            raise InvalidParams("log spacing needs min > 0")

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([float(self.min)])
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, int(self.points))
        return np.linspace(self.min, self.max, int(self.points))


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple
    baseline: PhysicalParams = field(default_factory=PhysicalParams)
    balance_baseline: bool = False
    imbalance_via: str = "omega_phi"

    def __post_init__(self):
        axes = tuple(self.axes)
        object.__setattr__(self, "axes", axes)
        if not 1 <= len(axes) <= 2:
            raise InvalidParams("a sweep has one or two axes")
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise InvalidParams("sweep axes must be distinct")


@dataclass(frozen=True)
class SweepRow:
    values: tuple
    E_extremum: float | None
    omega_peak: float | None
    stable: bool
    error: str | None = None


def _point_params(spec: SweepSpec, baseline: PhysicalParams, setting: dict) -> PhysicalParams:
    p = baseline
    if "imbalance_percent" in setting:
        p = apply_imbalance(p, setting["imbalance_percent"], via=spec.imbalance_via)
    changes = {}
    if "temperature" in setting:
        changes["temperature"] = setting["temperature"]
    if "detuning" in setting:
        changes["detuning_value"] = setting["detuning"]
    if "power" in setting:
        changes["input_power"] = setting["power"]
    return p.replace(**changes) if changes else p


def _evaluate(spec, baseline, setting, omegas):
    """Rows for one non-omega setting; one row per entry of ``omegas`` (or one row)."""
    n_rows = 1 if omegas is None else len(omegas)
    try:
        p = _point_params(spec, baseline, setting)
        system = build_system(p)
        if not system.stable:
            return [(None, None, False, "unstable")] * n_rows
        if omegas is None:
            w_peak, e_min = system.strongest_entanglement()
            return [(e_min, w_peak, True, None)]
        curve = system.curve(omegas)
        return [(float(e), float(w), True, None) for w, e in zip(curve.omega, curve.E)]
    except RovibError as exc:
        return [(None, None, False, f"{type(exc).__name__}: {exc}")] * n_rows


def run_sweep(spec: SweepSpec, threads: int | None = None) -> list[SweepRow]:
    """Evaluate the full cartesian grid; rows ordered by axis index (first axis outermost).

    With an ``omega`` axis each row holds ``E`` at that frequency; otherwise it
    holds the strongest entanglement ``min_w E(w)`` over the mechanical band and
    where it occurs.
    """
    baseline = spec.baseline
    if spec.balance_baseline:
        baseline = tune_couplings(baseline).apply(baseline)
    axes = spec.axes
    names = [a.name for a in axes]
    grids = [a.values() for a in axes]
    omega_pos = names.index("omega") if "omega" in names else None
    other = [i for i in range(len(axes)) if i != omega_pos]
    omegas = None if omega_pos is None else grids[omega_pos]

    settings = [dict(zip([names[i] for i in other], combo))
                for combo in product(*[grids[i] for i in other])]
    if threads is not None and threads > 1 and len(settings) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda s: _evaluate(spec, baseline, s, omegas), settings))
    else:
        results = [_evaluate(spec, baseline, s, omegas) for s in settings]

    table = {}
    for setting, res in zip(settings, results):
        key = tuple(setting[names[i]] for i in other)
        table[key] = res
    rows = []
    for idx in product(*[range(len(g)) for g in grids]):
        values = tuple(float(grids[k][i]) for k, i in enumerate(idx))
        key = tuple(values[k] for k in other)
        res = table[key][0 if omega_pos is None else idx[omega_pos]]
        rows.append(SweepRow(values, *res))
    return rows


@dataclass(frozen=True)
class TuneResult:
    wavelength: float
    cavity_length: float
    mode_index: int
    residual_imbalance: float
    delta_wavelength: float
    delta_length: float
    first_order_delta_wavelength: float

    def apply(self, p: PhysicalParams) -> PhysicalParams:
        return p.replace(wavelength=self.wavelength, cavity_length=self.cavity_length)

    def as_dict(self) -> dict:
        return {
            "lambda_new_m": self.wavelength,
            "L_new_m": self.cavity_length,
            "mode_index": self.mode_index,
            "residual_imbalance": self.residual_imbalance,
            "delta_lambda_m": self.delta_wavelength,
            "delta_L_m": self.delta_length,
            "first_order_delta_lambda_m": self.first_order_delta_wavelength,
        }


def _resonant_length(p: PhysicalParams, wavelength: float, length_window: float):
    L = p.cavity_length
    n_lo = math.ceil(2.0 * (L - length_window) / wavelength)
    n_hi = math.floor(2.0 * (L + length_window) / wavelength)
    n_lo = max(n_lo, 1)
    if n_hi < n_lo:
        raise NoResonanceInWindow(
            f"no integer n with n*lambda/2 within {length_window:g} m of L = {L:g} m")
    n = min(max(round(2.0 * L / wavelength), n_lo), n_hi)
    return n, n * wavelength / 2.0


def tune_couplings(p: PhysicalParams, window: float = 5e-9, length_window: float = LENGTH_WINDOW) -> TuneResult:
    """Equalize ``g_z`` and ``g_phi`` by moving the wavelength within ``+-window``
    and re-resonating the cavity length (``L = n lambda / 2``, n integer).

    The coupling ratio depends on the wavelength alone, so the balancing
    wavelength is a one-dimensional root; the mode index is then the one
    keeping the cavity closest to its original length. Raises
    :class:`TargetUnreachable` (carrying the best candidate) when the window
    does not contain a balance point within ``1e-6``.
    """
    if not window > 0.0:
        raise NoResonanceInWindow("wavelength window must be positive")
    lam0 = p.wavelength
    r0 = ratio_of(p)

    def excess(lam):
        return ratio_of(p.replace(wavelength=lam)) - 1.0

    lo, hi = max(lam0 - window, lam0 * 1e-3), lam0 + window
    if abs(r0 - 1.0) <= 1e-12:
        lam = lam0
    else:
        f_lo, f_hi = excess(lo), excess(hi)
        if f_lo * f_hi <= 0.0:
            lam = brentq(excess, lo, hi, xtol=1e-24, rtol=4 * np.finfo(float).eps, maxiter=200)
        else:
            lam = lo if abs(f_lo) < abs(f_hi) else hi
    if lam != lam0 and abs(excess(lam)) > abs(r0 - 1.0):
        lam = lam0
    n, L_new = _resonant_length(p, lam, length_window)
    residual = abs(ratio_of(p.replace(wavelength=lam, cavity_length=L_new)) - 1.0)
    result = TuneResult(
        wavelength=lam,
        cavity_length=L_new,
        mode_index=n,
        residual_imbalance=residual,
        delta_wavelength=lam - lam0,
        delta_length=L_new - p.cavity_length,
        first_order_delta_wavelength=lam0 * (r0 - 1.0),
    )
    if residual > TUNE_TARGET:
        raise TargetUnreachable(
            f"best residual imbalance {residual:.3g} exceeds {TUNE_TARGET:g} within +-{window:g} m", result)
    return result
