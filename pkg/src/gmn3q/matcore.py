"""Dense complex linear algebra for three-qubit operators.

Basis convention: computational basis index i = 4a + 2b + c for qubit
values (a, b, c) of parties (A, B, C), so qubit A is the most
significant bit. All matrices are dense numpy arrays indexed row-major.
"""
from __future__ import annotations

import numpy as np

DIM = 8
N_QUBITS = 3

# admission tolerance for Hermiticity (max absolute entry of M - M^dag);
# inputs inside it are symmetrized, outside it rejected
HERM_TOL = 1e-10


class NotHermitian(ValueError):
    """Matrix fails the Hermiticity admission tolerance."""


class NoConvergence(RuntimeError):
    """Eigensolver failed to converge."""


class BadDim(ValueError):
    """Operand has the wrong dimension for a three-qubit operator."""


kron = np.kron

PAULI_Z = np.diag([1.0, -1.0]).astype(complex)


def adjoint(m):
    return np.asarray(m).conj().T


def hermiticity_defect(m):
    """Max absolute entry of M - M^dag."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


def hermitize(m, tol=HERM_TOL):
    """Symmetrize a nearly Hermitian matrix, or reject it.

    Returns (M + M^dag)/2 when the defect is within tol; raises
    NotHermitian otherwise.
    """
    m = np.asarray(m, dtype=complex)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitian(f"Hermiticity defect {defect:.3e} exceeds tolerance {tol:.1e}")
    return 0.5 * (m + m.conj().T)


def eig_hermitian(m, tol=HERM_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvectors as columns). The input
    is symmetrized within the admission tolerance first.
    """
    m = hermitize(m, tol)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return w, v


def _check_dim8(rho):
    rho = np.asarray(rho)
    if rho.shape != (DIM, DIM):
        raise BadDim(f"expected an {DIM}x{DIM} matrix, got shape {rho.shape}")
    return rho


def partial_transpose(rho, qubits):
    """Transpose the given qubits (0 = A, 1 = B, 2 = C) of an 8x8 operator.

    Entry (i, j) of the output equals entry (i', j') of the input where
    i', j' swap the selected qubits' bits of i and j.
    """
    rho = _check_dim8(rho)
    t = rho.reshape((2,) * (2 * N_QUBITS))
    axes = list(range(2 * N_QUBITS))
    for q in qubits:
        if not 0 <= q < N_QUBITS:
            raise BadDim(f"qubit index {q} out of range")
        axes[q], axes[q + N_QUBITS] = axes[q + N_QUBITS], axes[q]
    return t.transpose(axes).reshape(DIM, DIM)


def partial_trace(rho, keep):
    """Marginal of an 8x8 operator on the given qubits, in their original order."""
    rho = _check_dim8(rho)
    keep = sorted(set(keep))
    if any(not 0 <= q < N_QUBITS for q in keep):
        raise BadDim(f"qubit indices {keep} out of range")
    t = rho.reshape((2,) * (2 * N_QUBITS))
    for q in range(N_QUBITS - 1, -1, -1):
        if q not in keep:
            t = np.trace(t, axis1=q, axis2=q + t.ndim // 2)
    d = 2 ** len(keep)
    return t.reshape(d, d)


def realify(h, tol=HERM_TOL):
    """PSD-preserving real embedding of a Hermitian matrix.

    For H = X + iY the output is [[X, -Y], [Y, X]], a real symmetric
    matrix whose spectrum is that of H with every eigenvalue doubled.
    """
    h = hermitize(h, tol)
    x, y = h.real, h.imag
    return np.block([[x, -y], [y, x]])
