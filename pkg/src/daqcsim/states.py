"""State preparation, fidelity and observables."""

from __future__ import annotations

import numpy as np

from daqcsim.errors import ConfigError
from daqcsim.tensor import TOL, Z, embed, herm_eig, mat_sqrt_psd


def _check_n(n: int) -> None:
    if int(n) != n or n < 2:
        raise ConfigError(f"need at least 2 qubits, got {n}")


def make_ghz(n: int) -> np.ndarray:
    """GHZ state ``(|0...0> + |1...1>)/sqrt(2)``."""
    _check_n(n)
    v = np.zeros(2**n, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return v


def make_w(n: int) -> np.ndarray:
    """W state, the uniform superposition of single-excitation basis states."""
    _check_n(n)
    v = np.zeros(2**n, dtype=complex)
    v[[1 << k for k in range(n)]] = 1 / np.sqrt(n)
    return v


def make_initial(beta: float, n: int) -> np.ndarray:
    """``sin(beta)|W_n> + cos(beta)|GHZ_n>``.

    W and GHZ have disjoint Hamming-weight supports, so the result is
    normalized for every real ``beta``.
    """
    return np.sin(beta) * make_w(n) + np.cos(beta) * make_ghz(n)


def to_density(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def n_qubits_of(rho: np.ndarray) -> int:
    n = int(round(np.log2(rho.shape[0])))
    if 2**n != rho.shape[0]:
        raise ValueError(f"dimension {rho.shape[0]} is not a power of two")
    return n


def validate_density(rho, trace_tol: float = TOL.trace, eig_tol: float = 1e-8) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, unit-trace and PSD."""
    rho = np.asarray(rho, dtype=complex)
    w, _ = herm_eig(rho)
    tr = np.real(np.trace(rho))
    if abs(tr - 1) > trace_tol:
        raise ValueError(f"trace {tr} differs from 1")
    if w[0] < -eig_tol:
        raise ValueError(f"negative eigenvalue {w[0]:.3e}")


def root_fidelity(ideal, noisy) -> float:
    """Unsquared Uhlmann fidelity ``tr sqrt(sqrt(ideal) noisy sqrt(ideal))``.

    For pure states this is ``|<psi|phi>|``.
    """
    ideal = np.asarray(ideal, dtype=complex)
    noisy = np.asarray(noisy, dtype=complex)
    if ideal.shape != noisy.shape:
        raise ValueError(f"dimension mismatch: {ideal.shape} vs {noisy.shape}")
    s = mat_sqrt_psd(ideal)
    inner = s @ noisy @ s
    w, _ = herm_eig(0.5 * (inner + inner.conj().T))
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))))


def fidelity(ideal, noisy) -> float:
    """Uhlmann fidelity ``[tr sqrt(sqrt(ideal) noisy sqrt(ideal))]^2``."""
    return root_fidelity(ideal, noisy) ** 2


def pure_fidelity(psi, rho) -> float:
    """``<psi|rho|psi>``, the squared fidelity against a pure target."""
    psi = np.asarray(psi, dtype=complex)
    return float(np.real(psi.conj() @ rho @ psi))


def z0_operator(n: int) -> np.ndarray:
    return embed(Z, 0, n)


def expect_z0(rho) -> float:
    """``tr(Z_0 rho)`` with Z acting on the leftmost tensor factor."""
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits_of(rho)
    # Z_0 is diagonal: +1 on the first half of the basis, -1 on the second
    d = np.real(np.diag(rho))
    half = 2 ** (n - 1)
    return float(d[:half].sum() - d[half:].sum())
