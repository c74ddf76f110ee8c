"""Shared generators and brute-force oracles for the test suite."""

import numpy as np
from hypothesis import strategies as st


def random_hermitian(rng, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def random_density(rng, dim: int, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_unitary(rng, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def full_kraus_apply(rho, kraus, qubit: int, n: int) -> np.ndarray:
    """Apply single-qubit Kraus operators by building full 2^n x 2^n matrices."""
    out = np.zeros_like(rho, dtype=complex)
    for e in kraus:
        big = np.kron(np.kron(np.eye(2**qubit), e), np.eye(2 ** (n - qubit - 1)))
        out += big @ rho @ big.conj().T
    return out


seeds = st.integers(min_value=0, max_value=2**32 - 1)
probabilities = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
