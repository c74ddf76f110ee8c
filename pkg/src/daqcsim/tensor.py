"""Dense complex linear algebra used throughout the simulator.

Every operator is a plain ``numpy.ndarray`` of complex dtype. Qubit 0 is the
leftmost Kronecker factor, so ``embed(Z, 0, n)`` is ``Z ⊗ I ⊗ ... ⊗ I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from daqcsim.errors import NumericalError


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every module."""

    hermiticity: float = 1e-10
    unitarity: float = 1e-9
    reconstruction: float = 1e-9
    psd_reject: float = 1e-6
    trace: float = 1e-9


TOL = Tolerances()

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
# Generator whose quarter turn is a Hadamard up to phase
HD = (X + Z) / np.sqrt(2)


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-D complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a ⊗ b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*mats) -> np.ndarray:
    """Kronecker product of several factors, left to right."""
    return reduce(kron, mats)


def embed(op, qubit: int, n: int) -> np.ndarray:
    """Lift a single-qubit operator onto qubit ``qubit`` of an ``n``-qubit register."""
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} out of range for {n} qubits")
    left = np.eye(2**qubit, dtype=complex)
    right = np.eye(2 ** (n - qubit - 1), dtype=complex)
    return np.kron(np.kron(left, as_matrix(op)), right)


def is_hermitian(m, tol: float = TOL.hermiticity) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T), initial=0.0) <= tol


def _require_hermitian(m: np.ndarray, tol: float) -> None:
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got {m.shape}")
    dev = np.max(np.abs(m - m.conj().T), initial=0.0)
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max |m - m†| = {dev:.3e} > {tol:.1e})")


def herm_eig(m, tol: float = TOL.hermiticity) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Args:
        m: Square Hermitian matrix.
        tol: Allowed deviation from exact hermiticity.

    Returns:
        ``(w, v)`` with ascending real eigenvalues ``w`` and unitary ``v`` such
        that ``m = v @ diag(w) @ v†``.

    Raises:
        ValueError: If ``m`` is not Hermitian within ``tol``.
    """
    m = as_matrix(m)
    _require_hermitian(m, tol)
    # LAPACK zheevd; symmetrize first so roundoff asymmetry never leaks in
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w, v


def _is_diagonal(m: np.ndarray) -> bool:
    return not np.any(m - np.diag(np.diag(m)))


def mat_sqrt_psd(m, reject: float = TOL.psd_reject) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Negative eigenvalues down to ``-reject`` are treated as roundoff and set to zero.

    Raises:
        NumericalError: If an eigenvalue lies below ``-reject``.
    """
    w, v = herm_eig(m)
    if w[0] < -reject:
        raise NumericalError(f"matrix is not PSD: smallest eigenvalue {w[0]:.3e}")
    # anything between -reject and 0 is roundoff from repeated channel sums
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def expm_herm(h, scale: complex) -> np.ndarray:
    """Matrix exponential ``exp(scale * h)`` of a Hermitian ``h``.

    Diagonal inputs (every ZZ Hamiltonian) are exponentiated elementwise.
    """
    h = as_matrix(h)
    if _is_diagonal(h):
        _require_hermitian(h, TOL.hermiticity)
        return np.diag(np.exp(scale * np.real(np.diag(h))))
    w, v = herm_eig(h)
    return (v * np.exp(scale * w)) @ v.conj().T


def op_distance(a, b) -> float:
    """Operator (spectral) norm of ``a - b``."""
    return float(np.linalg.norm(as_matrix(a) - as_matrix(b), ord=2))


def phase_aligned_distance(a, b) -> float:
    """Operator distance after removing the best global phase between ``a`` and ``b``."""
    a, b = as_matrix(a), as_matrix(b)
    ov = np.trace(b.conj().T @ a)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return op_distance(a, phase * b)


def unitarity_defect(u) -> float:
    u = as_matrix(u)
    return op_distance(u.conj().T @ u, np.eye(u.shape[0]))
