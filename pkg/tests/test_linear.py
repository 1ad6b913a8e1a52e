import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rovib.errors import UnstableSystem
from rovib.linear import (
    IDX, NOISE_SWAP, STATE_SWAP, build_linear_model, input_matrix, to_quadratures,
    transfer, transfer_batch,
)
from rovib.oracles import characteristic_polynomial, decoupled_susceptibility, routh_hurwitz_stable
from rovib.params import PhysicalParams, derive_params
from rovib.steady import steady_state_feedback
from rovib.system import build_system


def _block_eigenvalues(d, Delta):
    opt = [-d.gamma / 2 - 1j * Delta, -d.gamma / 2 + 1j * Delta]
    mech = []
    for w, g in ((d.omega_z, d.gamma_z), (d.omega_phi, d.gamma_phi)):
        r = math.sqrt(w * w - g * g / 4)
        mech += [-g / 2 + 1j * r, -g / 2 - 1j * r]
    return np.array(opt + mech)


def _match(a, b):
    a = a[np.lexsort((a.imag, a.real))]
    b = b[np.lexsort((b.imag, b.real))]
    return np.max(np.abs(a - b) / np.abs(b))


def test_empty_cavity_is_block_diagonal(decoupled):
    m = decoupled.model
    A = m.A
    assert np.all(A[:2, 2:] == 0) and np.all(A[2:, :2] == 0)
    assert np.all(A[2:4, 4:] == 0) and np.all(A[4:, 2:4] == 0)
    Delta = decoupled.steady.effective_detuning
    assert _match(m.eigenvalues, _block_eigenvalues(decoupled.derived, Delta)) < 1e-12


def test_zero_coupling_with_light_is_block_diagonal(defaults):
    d = dataclasses.replace(derive_params(defaults), g_z=0.0, g_phi=0.0)
    s = steady_state_feedback(d, defaults.detuning_value)
    assert s.a_s > 0
    m = build_linear_model(d, s)
    assert _match(m.eigenvalues, _block_eigenvalues(d, defaults.detuning_value)) < 1e-12


def test_drift_entries(coupled):
    d, s, A = coupled.derived, coupled.steady, coupled.model.A
    kz, kp = d.g_z * s.a_s, d.g_phi * s.a_s
    assert A[0, 0] == -(1j * s.effective_detuning + d.gamma / 2)
    assert A[0, IDX["z"]] == 1j * kz and A[0, IDX["phi"]] == -1j * kp
    assert A[IDX["p_z"], 0] == A[IDX["p_z"], 1] == kz
    assert A[IDX["L_z"], 0] == A[IDX["L_z"], 1] == -kp
    assert A[IDX["p_z"], IDX["p_z"]] == -d.gamma_z
    B = input_matrix(d)
    assert B[0, 0] == B[1, 1] == math.sqrt(d.gamma)
    assert B[IDX["p_z"], 2] == B[IDX["L_z"], 3] == 1.0
    assert np.count_nonzero(B) == 4


def test_conjugate_partner_rows(coupled):
    A = coupled.model.A
    np.testing.assert_array_equal(A[1][STATE_SWAP], np.conj(A[0]))
    S = np.eye(6)[STATE_SWAP]
    np.testing.assert_allclose(np.conj(A), S @ A @ S, rtol=0, atol=0)


def test_fig2_stable_and_routh_agrees(coupled):
    assert coupled.stable
    Aq, Bq = to_quadratures(coupled.model)
    assert np.max(np.abs(Aq.imag)) < 1e-9 * np.max(np.abs(Aq))
    assert np.max(np.abs(Bq.imag)) < 1e-15 * np.max(np.abs(Bq))
    coeffs = characteristic_polynomial(Aq, scale=coupled.params.omega_z)
    assert routh_hurwitz_stable(coeffs)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-4, 3e-2), st.floats(-3.0, 3.0))
def test_routh_matches_eigenvalues(P, x):
    p = PhysicalParams(input_power=P, detuning_value=x * 2 * math.pi * 1e6)
    sysm = build_system(p)
    Aq, _ = to_quadratures(sysm.model)
    rh = routh_hurwitz_stable(characteristic_polynomial(Aq, scale=p.omega_z))
    margin = np.max(sysm.model.eigenvalues.real)
    if abs(margin) > 1e-6 * p.omega_z:
        assert rh == sysm.stable


def test_red_detuning_goes_unstable(defaults):
    assert not build_system(defaults.replace(detuning_value=-defaults.omega_phi)).stable
    unstable = build_system(defaults.replace(detuning_value=-defaults.omega_phi)).model
    with pytest.raises(UnstableSystem):
        transfer(unstable, defaults.omega_z)


def test_decoupled_mechanical_response(decoupled):
    d = decoupled.derived
    w = np.linspace(0.5, 1.5, 1000) * d.omega_z
    T = transfer_batch(decoupled.model, w)
    chi = decoupled_susceptibility(w, d.gamma_z, d.omega_z)
    np.testing.assert_allclose(T[:, IDX["z"], 2], chi, rtol=1e-10)
    assert np.all(T[:, IDX["z"], :2] == 0)
    assert np.all(T[:, :2, 2:] == 0)


@settings(max_examples=50, deadline=None)
@given(st.floats(1e2, 1e9))
def test_reality_structure(coupled, w):
    Tp = transfer(coupled.model, w).T
    Tm = transfer(coupled.model, -w).T
    ref = np.conj(Tp)
    np.testing.assert_allclose(Tm[STATE_SWAP][:, NOISE_SWAP], ref, rtol=1e-9, atol=1e-12 * np.max(np.abs(ref)))


def test_high_frequency_decay(coupled):
    s = [w * np.max(np.abs(transfer(coupled.model, w).T)) for w in (1e11, 1e12, 1e13)]
    assert s[1] == pytest.approx(s[0], rel=1e-2)
    assert s[2] == pytest.approx(s[1], rel=1e-3)


def test_solve_residual(coupled):
    m = coupled.model
    w = np.linspace(0.9, 1.1, 201) * coupled.params.omega_z
    T = transfer_batch(m, w)
    M = -1j * w[:, None, None] * np.eye(6) - m.A
    resid = np.max(np.abs(M @ T - m.B), axis=(1, 2)) / np.max(np.abs(m.B))
    assert np.all(resid < 1e-10)


def test_eigenvalues_sorted_deterministically(coupled):
    e = coupled.model.eigenvalues
    order = np.lexsort((e.imag, e.real))
    np.testing.assert_array_equal(order, np.arange(6))
