import math

import numpy as np
import pytest

from rovib.oracles import (
    adaptive_integrate, analytic_mechanical_spectrum, brute_cubic_scan, characteristic_polynomial,
    mechanical_noise, routh_hurwitz_stable, run_selfcheck,
)
from rovib.params import PhysicalParams, derive_params


def test_low_q_peak_location():
    # |chi|^2 peaks at sqrt(w^2 - gamma^2 / 2) for a flat drive
    w0, g = 1.0, 0.4
    w = np.linspace(0.5, 1.5, 200001)
    S = analytic_mechanical_spectrum(w, 0.0, g, w0, "COMMUTATOR") / w
    assert w[np.argmax(S)] == pytest.approx(math.sqrt(w0 ** 2 - g ** 2 / 2), abs=1e-5)


def test_commutator_spectrum_is_odd():
    w = np.linspace(-3e6, 3e6, 11)
    S = mechanical_noise(w, 0.7, 6.0, 6e6, "COMMUTATOR")
    np.testing.assert_allclose(S, -S[::-1], atol=1e-15)


def test_adaptive_integrate_lorentzian():
    g = 1e-3
    val, err = adaptive_integrate(lambda x: g / (x * x + g * g), [-1e3, -g, 0.0, g, 1e3], atol=1e-12)
    assert val.real == pytest.approx(2 * math.atan(1e3 / g), rel=1e-12)


def test_routh_table():
    assert routh_hurwitz_stable(np.poly([-1, -2, -3 + 1j, -3 - 1j]))
    assert not routh_hurwitz_stable(np.poly([-1, 0.5]))
    assert not routh_hurwitz_stable(np.poly([-1, 2j, -2j]))
    A = np.diag([-1.0, -2.0, -3.0])
    np.testing.assert_allclose(characteristic_polynomial(A), np.poly([-1, -2, -3]))


def test_brute_scan_linear_limit():
    import dataclasses
    d = dataclasses.replace(derive_params(PhysicalParams()), g_z=0.0, g_phi=0.0)
    counts = brute_cubic_scan(d, np.linspace(0, 1e8, 5), [1e-3, 1e-1], samples=2001)
    assert np.all(counts == 1)


def test_selfcheck_passes():
    reports = run_selfcheck()
    assert all(r.passed for r in reports), "\n".join(r.line() for r in reports)
