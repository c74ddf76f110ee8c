"""Compile inhomogeneous all-to-all ZZ evolutions into homogeneous analog blocks.

A target ``exp(i t_F sum_{j<k} g_jk Z_j Z_k)`` is realized as a product of
blocks ``X_n X_m exp(i t_nm H0) X_n X_m`` with ``H0 = g sum_{j<k} Z_j Z_k``.
Conjugating H0 by ``X_n X_m`` flips the sign of every term that touches exactly
one of ``n, m``; collecting those signs gives the sign matrix ``M`` and the
block times solve ``M t = g_vec t_F / g``.

Pair indices are 1-based at the public ``vec_index`` boundary and 0-based
everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from daqcsim.errors import ConfigError, NumericalError, UnsupportedSizeError
from daqcsim.tensor import X, Z, embed

# Sign matrices are +-1 with tiny dimension; anything above this is singular
_COND_LIMIT = 1e10


def n_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pairs(n: int) -> list[tuple[int, int]]:
    """0-based pairs ``(j, k)``, ``j < k``, in ascending flat-index order."""
    return list(combinations(range(n), 2))


def vec_index(n: int, m: int, N: int) -> int:
    """Flat 1-based index of the 1-based pair ``(n, m)``, ``n < m``."""
    if not (1 <= n < m <= N):
        raise ValueError(f"need 1 <= n < m <= N, got n={n}, m={m}, N={N}")
    return N * (n - 1) - n * (n + 1) // 2 + m


def build_sign_matrix(N: int) -> np.ndarray:
    """``M[a, b] = (-1)^(d_nj + d_nk + d_mj + d_mk)`` for pairs ``a=(n,m)``, ``b=(j,k)``."""
    if N < 2:
        raise ConfigError(f"need at least 2 qubits, got {N}")
    P = pairs(N)
    M = np.empty((len(P), len(P)))
    for a, (n, m) in enumerate(P):
        for b, (j, k) in enumerate(P):
            M[a, b] = (-1) ** ((n == j) + (n == k) + (m == j) + (m == k))
    return M


@dataclass(frozen=True)
class CouplingSpec:
    """Target inhomogeneous Ising evolution.

    Attributes:
        n_qubits: Register size N.
        couplings: ``g_jk`` per pair in flat-index order, rad/s.
        base_coupling: Homogeneous device coupling ``g``, rad/s.
        total_time: Target evolution time ``t_F``, seconds.
    """

    n_qubits: int
    couplings: tuple[float, ...]
    base_coupling: float
    total_time: float

    def __post_init__(self):
        c = tuple(float(x) for x in np.ravel(self.couplings))
        object.__setattr__(self, "couplings", c)
        if len(c) != n_pairs(self.n_qubits):
            raise ConfigError(f"expected {n_pairs(self.n_qubits)} couplings, got {len(c)}")
        if self.base_coupling == 0:
            raise ConfigError("base coupling must be non-zero")
        if not self.total_time > 0:
            raise ConfigError("total time must be positive")

    @classmethod
    def from_angles(cls, n_qubits: int, angles, base_coupling: float = 1.0) -> "CouplingSpec":
        """Target whose evolution is ``exp(i sum angles_jk Z_j Z_k)`` (``t_F = 1``)."""
        return cls(n_qubits, tuple(angles), base_coupling, 1.0)

    def hamiltonian_diag(self) -> np.ndarray:
        """Diagonal of ``sum g_jk Z_j Z_k``."""
        z = spin_table(self.n_qubits)
        return sum(g * z[:, j] * z[:, k] for g, (j, k) in zip(self.couplings, pairs(self.n_qubits)))

    def target_unitary(self) -> np.ndarray:
        return np.diag(np.exp(1j * self.total_time * self.hamiltonian_diag()))


@dataclass(frozen=True)
class AnalogBlock:
    pair: tuple[int, int]
    time: float

    @property
    def sign(self) -> int:
        return -1 if self.time < 0 else 1


@dataclass(frozen=True)
class AnalogSchedule:
    """Analog blocks in execution order plus solve diagnostics.

    Each block is ``X_n X_m exp(i time H0) X_n X_m``. Negative times are valid
    unitaries and are kept; ``sign`` flags them.
    """

    n_qubits: int
    blocks: tuple[AnalogBlock, ...]
    base_coupling: float
    condition_number: float = float("nan")

    def nonzero(self, tol: float = 1e-12) -> tuple[AnalogBlock, ...]:
        return tuple(b for b in self.blocks if abs(b.time * self.base_coupling) > tol)

    def total_abs_time(self) -> float:
        return float(sum(abs(b.time) for b in self.blocks))

    def to_text(self) -> str:
        """One line per block: 1-based ``n m`` and the time in units of ``1/g``."""
        lines = ["# n m t_alpha*g"]
        for b in self.blocks:
            lines.append(f"{b.pair[0] + 1} {b.pair[1] + 1} {b.time * self.base_coupling + 0.0:.12g}")
        return "\n".join(lines) + "\n"


def spin_table(n: int) -> np.ndarray:
    """``z[b, q] = +-1``, the Z eigenvalue of qubit q in basis state b (qubit 0 is the MSB)."""
    b = np.arange(2**n)[:, None]
    shifts = n - 1 - np.arange(n)[None, :]
    return 1 - 2 * ((b >> shifts) & 1)


def h0_diag(n: int) -> np.ndarray:
    """Diagonal of ``sum_{j<k} Z_j Z_k`` (unit coupling)."""
    z = spin_table(n)
    s = z.sum(axis=1)
    return ((s * s - n) // 2).astype(float)


def solve_block_times(spec: CouplingSpec, sign_matrix: np.ndarray | None = None) -> AnalogSchedule:
    """Block times ``t = M^{-1} g_vec t_F / g`` in ascending pair order.

    Args:
        spec: Target evolution.
        sign_matrix: Override for ``M``; only meant for fault-injection tests.

    Raises:
        UnsupportedSizeError: When ``M`` is singular (N = 4).
        NumericalError: When the solve residual exceeds 1e-8.
    """
    N = spec.n_qubits
    M = build_sign_matrix(N) if sign_matrix is None else np.asarray(sign_matrix, dtype=float)
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise UnsupportedSizeError(
            f"sign matrix for N={N} is singular (condition number {cond:.3g}); "
            "analog compilation is impossible for this register size"
        )
    rhs = np.asarray(spec.couplings) * spec.total_time / spec.base_coupling
    # LAPACK gesv: LU with partial pivoting
    t = np.linalg.solve(M, rhs)
    scale = max(1.0, float(np.max(np.abs(rhs), initial=0.0)))
    resid = float(np.max(np.abs(M @ t - rhs), initial=0.0)) / scale
    if resid > 1e-8:
        raise NumericalError(f"block-time solve residual {resid:.3e} exceeds 1e-8")
    blocks = tuple(AnalogBlock(p, float(ti)) for p, ti in zip(pairs(N), t))
    return AnalogSchedule(N, blocks, spec.base_coupling, cond)


def reconstruct_unitary(sched: AnalogSchedule, g: float | None = None) -> np.ndarray:
    """Matrix product of the sandwiched blocks, first block acting first."""
    N = sched.n_qubits
    g = sched.base_coupling if g is None else g
    h = h0_diag(N)
    U = np.eye(2**N, dtype=complex)
    for blk in sched.blocks:
        n, m = blk.pair
        xx = embed(X, n, N) @ embed(X, m, N)
        U = xx @ (np.exp(1j * g * blk.time * h)[:, None] * xx) @ U
    return U


def zz_term(n_qubits: int, j: int, k: int) -> np.ndarray:
    return embed(Z, j, n_qubits) @ embed(Z, k, n_qubits)
