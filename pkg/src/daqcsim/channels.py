"""Single-qubit Kraus channels and their application to density matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from daqcsim.errors import ConfigError
from daqcsim.tensor import I2, X

# Thermal parameter quoted for the reference device. The published tables are
# reproduced when it is read as the excited-state population, see DecoherenceConfig.
THERMAL_PARAMETER = 0.35


def _check_prob(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class KrausChannel:
    """Operator-sum representation of a single-qubit channel."""

    operators: tuple[np.ndarray, ...]
    label: str = "custom"
    _superop: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ops = tuple(np.asarray(e, dtype=complex) for e in self.operators)
        if not ops or any(e.shape != (2, 2) for e in ops):
            raise ValueError("Kraus operators must be a non-empty list of 2x2 matrices")
        object.__setattr__(self, "operators", ops)
        # S[a, d, b, c] = sum_k E_k[a, b] conj(E_k[d, c]), so (E rho E†)_{ad} = S_{adbc} rho_{bc}
        s = sum(np.einsum("ab,dc->adbc", e, e.conj()) for e in ops)
        object.__setattr__(self, "_superop", s)

    @property
    def superoperator(self) -> np.ndarray:
        return self._superop

    def completeness_deviation(self) -> float:
        acc = sum(e.conj().T @ e for e in self.operators)
        return float(np.max(np.abs(acc - I2)))


@dataclass(frozen=True)
class DecoherenceConfig:
    """Thermal relaxation parameters.

    Attributes:
        t1: Relaxation time in seconds.
        p_ground: Stationary population of ``|0>``. The default treats the
            quoted thermal parameter 0.35 as the excited-state weight, which is
            the reading that reproduces the reference mitigation tables.
    """

    t1: float = 50e-6
    p_ground: float = 1.0 - THERMAL_PARAMETER

    def __post_init__(self):
        if not self.t1 > 0:
            raise ConfigError(f"t1 must be positive, got {self.t1}")
        _check_prob("p_ground", self.p_ground)


@dataclass(frozen=True)
class CPTPReport:
    passed: bool
    deviation: float
    tolerance: float


def bit_flip(p: float) -> KrausChannel:
    """Flip with probability ``p``: ``E0 = sqrt(1-p) I``, ``E1 = sqrt(p) X``."""
    _check_prob("p", p)
    return KrausChannel((np.sqrt(1 - p) * I2, np.sqrt(p) * X), label="bit_flip")


def gad(p_ground: float, gamma: float) -> KrausChannel:
    """Generalized amplitude damping toward ``diag(p_ground, 1 - p_ground)``.

    Args:
        p_ground: Stationary population of ``|0>``.
        gamma: Damping strength, ``1 - exp(-t/T1)`` for a segment of length t.
    """
    _check_prob("p_ground", p_ground)
    _check_prob("gamma", gamma)
    a, b = np.sqrt(p_ground), np.sqrt(1 - p_ground)
    keep, jump = np.sqrt(1 - gamma), np.sqrt(gamma)
    ops = (
        a * np.array([[1, 0], [0, keep]], dtype=complex),
        a * np.array([[0, jump], [0, 0]], dtype=complex),
        b * np.array([[keep, 0], [0, 1]], dtype=complex),
        b * np.array([[0, 0], [jump, 0]], dtype=complex),
    )
    return KrausChannel(ops, label="gad")


def gamma_from_time(dt: float, cfg: DecoherenceConfig) -> float:
    """``1 - exp(-dt/T1)``."""
    if dt < 0:
        raise ConfigError(f"segment duration must be non-negative, got {dt}")
    return float(-np.expm1(-dt / cfg.t1))


def superop_matrix(ch: KrausChannel) -> np.ndarray:
    """4x4 matrix acting on ``vec(rho) = (r00, r01, r10, r11)``."""
    return ch.superoperator.reshape(4, 4)


def compose(*mats: np.ndarray) -> np.ndarray:
    """Superoperator of applying ``mats[0]`` first, then ``mats[1]`` and so on."""
    out = np.eye(4, dtype=complex)
    for m in mats:
        out = m @ out
    return out


def unitary_superop(u: np.ndarray) -> np.ndarray:
    """4x4 superoperator of ``rho -> u rho u†``."""
    u = np.asarray(u, dtype=complex)
    return np.kron(u, u.conj())


def apply_superop(rho: np.ndarray, sup: np.ndarray, qubit: int) -> np.ndarray:
    """Apply a single-qubit superoperator (4x4 or 2x2x2x2) to one qubit of ``rho``.

    ``rho`` may carry leading batch axes, i.e. shape ``(..., 2**n, 2**n)``.
    """
    rho = np.asarray(rho)
    dim = rho.shape[-1]
    n = dim.bit_length() - 1
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} out of range for {n} qubits")
    batch = rho.shape[:-2]
    r = rho.reshape((-1,) + (2,) * (2 * n))
    s = np.asarray(sup).reshape(2, 2, 2, 2)
    out = np.tensordot(s, r, axes=([2, 3], [1 + qubit, 1 + n + qubit]))
    out = np.moveaxis(out, [0, 1], [1 + qubit, 1 + n + qubit])
    return out.reshape(batch + (dim, dim))


def apply_channel(rho: np.ndarray, ch: KrausChannel, qubit: int) -> np.ndarray:
    """Apply ``ch`` to one qubit of ``rho`` (batch axes allowed)."""
    return apply_superop(rho, ch.superoperator, qubit)


def apply_to_all(rho: np.ndarray, ch: KrausChannel, qubits=None) -> np.ndarray:
    """Apply ``ch`` independently to each qubit in ``qubits`` (default: all)."""
    n = rho.shape[-1].bit_length() - 1
    for q in range(n) if qubits is None else qubits:
        rho = apply_channel(rho, ch, q)
    return rho


def validate_cptp(ch: KrausChannel, tol: float = 1e-9) -> CPTPReport:
    """Check the completeness relation ``sum_k E_k† E_k = I``."""
    dev = ch.completeness_deviation()
    return CPTPReport(passed=dev < tol, deviation=dev, tolerance=tol)
