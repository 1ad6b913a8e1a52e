"""Linearized fluctuation dynamics around the working point.

State order ``(da, da^dag, dz, dp_z, dphi, dL_z)``, noise order
``(da_in, da_in^dag, eps_z, eps_phi)``. Fourier convention
``f(t) = int dw/2pi exp(-i w t) f(w)``, so ``d/dt -> -i w`` and the transfer
matrix is ``(-i w I - A)^-1 B``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrix, UnstableSystem
from .params import DerivedParams
from .steady import SteadyState

STATE_LABELS = ("a", "a_dag", "z", "p_z", "phi", "L_z")
NOISE_LABELS = ("a_in", "a_in_dag", "eps_z", "eps_phi")
IDX = {name: i for i, name in enumerate(STATE_LABELS)}

# permutation exchanging the two optical components
STATE_SWAP = np.array([1, 0, 2, 3, 4, 5])
NOISE_SWAP = np.array([1, 0, 2, 3])

SOLVE_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class LinearModel:
    A: np.ndarray
    B: np.ndarray
    stable: bool
    eigenvalues: np.ndarray

    def require_stable(self):
        if not self.stable:
            worst = float(np.max(self.eigenvalues.real))
            raise UnstableSystem(
                f"linearized dynamics are unstable (max Re eigenvalue {worst:.6g} 1/s); "
                "spectra are undefined")


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    omega: float
    T: np.ndarray


def drift_matrix(d: DerivedParams, s: SteadyState) -> np.ndarray:
    Delta = s.effective_detuning
    kz = d.g_z * s.a_s
    kphi = d.g_phi * s.a_s
    A = np.zeros((6, 6), dtype=complex)
    A[0, 0] = -(1j * Delta + d.gamma / 2.0)
    A[0, 2] = 1j * kz
    A[0, 4] = -1j * kphi
    A[1, 1] = -(-1j * Delta + d.gamma / 2.0)
    A[1, 2] = -1j * kz
    A[1, 4] = 1j * kphi
    A[2, 3] = d.omega_z
    A[3, 0] = A[3, 1] = kz
    A[3, 2] = -d.omega_z
    A[3, 3] = -d.gamma_z
    A[4, 5] = d.omega_phi
    A[5, 0] = A[5, 1] = -kphi
    A[5, 4] = -d.omega_phi
    A[5, 5] = -d.gamma_phi
    return A


def input_matrix(d: DerivedParams) -> np.ndarray:
    B = np.zeros((6, 4), dtype=complex)
    B[0, 0] = B[1, 1] = math.sqrt(d.gamma)
    B[3, 2] = 1.0
    B[5, 3] = 1.0
    return B


def build_linear_model(d: DerivedParams, s: SteadyState) -> LinearModel:
    """Drift and input matrices plus the eigenvalue stability verdict."""
    A = drift_matrix(d, s)
    eig = np.linalg.eigvals(A)
    eig = eig[np.lexsort((eig.imag, eig.real))]
    return LinearModel(A=A, B=input_matrix(d), stable=bool(np.all(eig.real < 0.0)), eigenvalues=eig)


def quadrature_basis() -> np.ndarray:
    """Matrix Q mapping (da, da^dag, ...) to (dX, dY, ...) with
    dX = (da + da^dag)/sqrt2 and dY = (da - da^dag)/(i sqrt2)."""
    Q = np.eye(6, dtype=complex)
    r = 1.0 / math.sqrt(2.0)
    Q[0, :2] = [r, r]
    Q[1, :2] = [-1j * r, 1j * r]
    return Q


def to_quadratures(m: LinearModel) -> tuple[np.ndarray, np.ndarray]:
    """Drift and input matrices in the Hermitian quadrature basis (both real)."""
    Q = quadrature_basis()
    Qn = Q[:4, :4]
    A = Q @ m.A @ np.linalg.inv(Q)
    B = Q @ m.B @ np.linalg.inv(Qn)
    return A, B


def transfer_batch(m: LinearModel, omegas, basis=None) -> np.ndarray:
    """Stack of transfer matrices, shape ``(len(omegas), 6, 4)``.

    With ``basis`` (an invertible 6x6 matrix P) the response of ``y = P x`` is
    solved directly from ``(P A P^-1, P B)``. This keeps combinations such as
    ``z - phi`` accurate when they are much smaller than their parts.

    The solve is followed by two rounds of iterative refinement with the
    residual accumulated in extended precision, which brings the forward error
    near machine precision despite the resonant conditioning (~Q). The final
    residual ``|(-i w I - A) T - B|_max / |B|_max`` is checked against
    ``SOLVE_RESIDUAL_TOL``.
    """
    m.require_stable()
    A, B0 = m.A, m.B
    if basis is not None:
        P = np.asarray(basis)
        A = P @ A @ np.linalg.inv(P)
        B0 = P @ B0
    w = np.atleast_1d(np.asarray(omegas, dtype=float))
    M = -1j * w[:, None, None] * np.eye(6) - A
    B = np.broadcast_to(B0, (len(w), 6, 4))
    try:
        T = np.linalg.solve(M, B)
        M_ext = M.astype(np.clongdouble)
        B_ext = B.astype(np.clongdouble)
        for _ in range(2):
            r = B_ext - np.einsum("nij,njk->nik", M_ext, T.astype(np.clongdouble))
            T = T + np.linalg.solve(M, r.astype(complex))
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(f"(-i w I - A) is singular: {exc}") from None
    resid = np.max(np.abs(M @ T - B), axis=(1, 2)) / np.max(np.abs(B0))
    if not np.all(np.isfinite(T)) or np.any(resid > SOLVE_RESIDUAL_TOL):
        bad = float(w[np.argmax(np.where(np.isfinite(resid), resid, np.inf))])
        raise SingularMatrix(f"(-i w I - A) is numerically singular near w = {bad!r}")
    return T


def transfer(m: LinearModel, omega: float) -> TransferMatrix:
    """Frequency-domain response of the fluctuation state to the noise inputs."""
    return TransferMatrix(omega=float(omega), T=transfer_batch(m, [omega])[0])
