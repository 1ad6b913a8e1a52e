import dataclasses
import math
import warnings

import pytest
import scipy.constants as sc
from hypothesis import given, settings, strategies as st

from rovib.errors import InvalidParams, ResonanceMismatch
from rovib.params import PhysicalParams, coupling_ratio, derive_params


def test_constants_match_codata():
    from rovib import params
    assert params.HBAR == pytest.approx(sc.hbar, rel=1e-9)
    assert params.K_B == sc.k
    assert params.C_LIGHT == sc.c


def test_fig2_derived_values(defaults):
    d = derive_params(defaults)
    # hand evaluation: omega_c = 2 pi c / 812.7 nm, gamma = pi c / (4 mm * 2.5e4)
    assert d.omega_c == pytest.approx(2.3178e15, rel=1e-4)
    assert d.moment_of_inertia == pytest.approx(1.125e-19, rel=1e-15)
    assert d.gamma == pytest.approx(9.41826e6, rel=1e-5)
    # 9.4248e6 follows from rounding c to 3e8
    assert d.gamma * 3e8 / 2.99792458e8 == pytest.approx(9.4248e6, rel=1e-5)
    assert abs(d.g_z / d.g_phi - 1) < 2e-4
    assert d.gamma_z == pytest.approx(defaults.omega_z / 1e6)
    assert d.mode_index == round(2 * 4e-3 / 812.7e-9)


def test_couplings_against_independent_arithmetic(defaults):
    d = derive_params(defaults)
    wc = 2 * sc.pi * sc.c / 812.7e-9
    w = 2 * sc.pi * 1e6
    gz = wc / 4e-3 * (sc.hbar / (1e-9 * w)) ** 0.5
    gphi = sc.c * 82 / 4e-3 * (sc.hbar / (0.5e-9 * (15e-6) ** 2 * w)) ** 0.5
    # scipy carries more digits of hbar than the fixed constant
    assert d.g_z == pytest.approx(gz, rel=1e-9)
    assert d.g_phi == pytest.approx(gphi, rel=1e-9)
    assert d.input_amplitude ** 2 == pytest.approx(1e-3 / (sc.hbar * wc), rel=1e-9)


def test_zero_power_gives_zero_amplitude(defaults):
    assert derive_params(defaults.replace(input_power=0.0)).input_amplitude == 0.0


def test_doubling_mass_scales_couplings(defaults):
    d1 = derive_params(defaults)
    d2 = derive_params(defaults.replace(mass=2 * defaults.mass))
    assert d2.g_z / d1.g_z == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    assert d2.g_phi / d1.g_phi == pytest.approx(1 / math.sqrt(2), rel=1e-14)


def test_ratio_default_design(defaults):
    d = derive_params(defaults)
    assert coupling_ratio(d, defaults) == pytest.approx(1.0, abs=2e-4)


def test_ratio_exactly_one_for_matched_radius(defaults):
    R = math.sqrt(2) * defaults.oam_charge * defaults.wavelength / (2 * math.pi)
    p = defaults.replace(mirror_radius=R)
    assert coupling_ratio(derive_params(p), p) == pytest.approx(1.0, rel=1e-14)


def test_ratio_doubles_with_four_times_omega_phi(defaults):
    p4 = defaults.replace(omega_phi=4 * defaults.omega_phi)
    r1 = coupling_ratio(derive_params(defaults), defaults)
    r4 = coupling_ratio(derive_params(p4), p4)
    assert r4 / r1 == pytest.approx(2.0, rel=1e-14)


def test_g_phi_independent_of_wavelength(defaults):
    d1 = derive_params(defaults)
    d2 = derive_params(defaults.replace(wavelength=1064e-9))
    assert d2.g_phi == d1.g_phi
    assert d2.g_z != d1.g_z


physical = st.builds(
    PhysicalParams,
    mass=st.floats(1e-15, 1e-3),
    mirror_radius=st.floats(1e-7, 1e-2),
    omega_z=st.floats(1e2, 1e10),
    omega_phi=st.floats(1e2, 1e10),
    Q_z=st.floats(1.0, 1e9),
    Q_phi=st.floats(1.0, 1e9),
    oam_charge=st.integers(1, 1000),
    cavity_length=st.floats(1e-4, 1.0),
    finesse=st.floats(1.5, 1e7),
    wavelength=st.floats(2e-7, 2e-5),
    input_power=st.floats(0.0, 1.0),
)


@settings(max_examples=200)
@given(physical)
def test_ratio_forms_agree(p):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResonanceMismatch)
        d = derive_params(p)
    assert coupling_ratio(d, p) == pytest.approx(d.g_z / d.g_phi, rel=1e-12)
    assert d.g_z > 0 and d.g_phi > 0 and d.gamma > 0 and d.gamma_z > 0 and d.gamma_phi > 0
    assert d.moment_of_inertia == p.mass * p.mirror_radius ** 2 / 2


@pytest.mark.parametrize("field,value", [
    ("mass", 0.0), ("mirror_radius", -1.0), ("cavity_length", 0.0), ("wavelength", float("nan")),
    ("finesse", 1.0), ("input_power", -1e-3), ("temperature", -0.1), ("oam_charge", 0),
    ("omega_z", 0.0), ("Q_phi", -5.0), ("oam_charge", 2.5), ("detuning_mode", "SOMETIMES"),
])
def test_invalid_params_rejected(defaults, field, value):
    with pytest.raises(InvalidParams):
        dataclasses.replace(defaults, **{field: value})


def test_resonance_error_reported_and_warned(defaults):
    d = derive_params(defaults)
    n = d.mode_index
    assert d.resonance_error == pytest.approx(abs(4e-3 - n * 812.7e-9 / 2) / 4e-3)
    with pytest.warns(ResonanceMismatch):
        derive_params(defaults.replace(cavity_length=1e-5))
    with pytest.warns(ResonanceMismatch):
        derive_params(defaults, resonance_tolerance=1e-6)
    resonant = defaults.replace(cavity_length=n * defaults.wavelength / 2)
    with warnings.catch_warnings():
        warnings.simplefilter("error", ResonanceMismatch)
        assert derive_params(resonant).resonance_error < 1e-15


def test_detuning_mode_accepts_strings(defaults):
    assert defaults.replace(detuning_mode="fixed").detuning_mode.value == "FIXED"
