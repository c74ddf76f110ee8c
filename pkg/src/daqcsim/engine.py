"""Noisy execution of circuit schedules on density matrices.

Each trajectory draws fresh coherent control errors for every event, then
propagates the density matrix event by event: the (perturbed) unitary, thermal
relaxation for the event's wall-clock length, and bit-flips on the qubits the
event touched. Readout error is a final bit-flip on every qubit.

Random streams are Philox substreams of ``SeedSequence(seed, spawn_key=(i,))``
for trajectory ``i``; within a trajectory draws are consumed in event order.
Ensemble means use ``math.fsum`` so they do not depend on evaluation order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from daqcsim.channels import (
    DecoherenceConfig,
    apply_channel,
    apply_superop,
    bit_flip,
    compose,
    gad,
    gamma_from_time,
    superop_matrix,
    unitary_superop,
)
from daqcsim.circuits import CircuitSchedule, GateEvent, Kind, event_unitary, qft_reference
from daqcsim.compiler import h0_diag, spin_table
from daqcsim.errors import ConfigError
from daqcsim.states import fidelity, make_ghz, make_w, to_density
from daqcsim.tensor import expm_herm


@dataclass(frozen=True)
class NoiseConfig:
    """Noise sources and their strengths.

    Attributes:
        sqgn: Half-width of the multiplicative single-qubit angle factor.
        tqgn: Standard deviation of the relative error on digital ZZ phases.
        s_abn: Analog-time noise std-dev for stepwise schedules, in units of ``1/g0``.
        b_abn: Analog-time noise std-dev for banged schedules, in units of ``1/g0``.
        p_bitflip: Bit-flip probability after gates.
        p_meas: Readout bit-flip probability.
        decoherence: Relaxation parameters.
        control_noise, bitflip, relaxation, measurement_error: Source toggles.
        idle_decoherence: Relax every qubit during every segment; when False only
            the event's targets relax.
        decohere_windows: Apply relaxation during bang windows.
        figure_of_merit: ``"fidelity"`` (squared Uhlmann) or ``"root_fidelity"``.
        tqg_noise_scope: ``"gate"`` draws one relative error per decomposed
            entangling gate and shares it between its two ZZ interactions;
            ``"interaction"`` draws one per ZZ interaction.
    """

    sqgn: float = 0.0005
    tqgn: float = 0.2
    s_abn: float = 0.02
    b_abn: float = 0.01
    p_bitflip: float = 0.005
    p_meas: float = 0.01
    decoherence: DecoherenceConfig = field(default_factory=DecoherenceConfig)
    control_noise: bool = True
    bitflip: bool = True
    relaxation: bool = True
    measurement_error: bool = True
    idle_decoherence: bool = True
    decohere_windows: bool = True
    figure_of_merit: str = "fidelity"
    tqg_noise_scope: str = "gate"

    def __post_init__(self):
        for name in ("p_bitflip", "p_meas"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ConfigError(f"{name} must lie in [0, 1], got {v}")
        for name in ("sqgn", "tqgn", "s_abn", "b_abn"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if self.sqgn > 1:
            raise ConfigError("sqgn above 1 would allow sign-flipped rotations")
        if self.tqg_noise_scope not in ("interaction", "gate"):
            raise ConfigError(f"unknown tqg noise scope {self.tqg_noise_scope!r}")
        if self.figure_of_merit not in ("fidelity", "root_fidelity"):
            raise ConfigError(f"unknown figure of merit {self.figure_of_merit!r}")

    @classmethod
    def noiseless(cls, **kw) -> "NoiseConfig":
        base = dict(control_noise=False, bitflip=False, relaxation=False, measurement_error=False)
        base.update(kw)
        return cls(**base)

    @classmethod
    def decoherence_only(cls, **kw) -> "NoiseConfig":
        base = dict(control_noise=False, bitflip=False, relaxation=True, measurement_error=False)
        base.update(kw)
        return cls(**base)

    def is_stochastic(self) -> bool:
        return self.control_noise and (self.sqgn > 0 or self.tqgn > 0 or self.s_abn > 0 or self.b_abn > 0)


@dataclass(frozen=True)
class NoiseRecord:
    """Sampled control errors of one trajectory, one entry per event."""

    draws: tuple[tuple[float, ...], ...]


@dataclass
class TrajectoryResult:
    state: np.ndarray
    record: NoiseRecord
    elapsed: float


@dataclass
class EnsembleResult:
    mean_fidelity: float
    mean_z0: float
    std_error: float
    n_trajectories: int
    seed: int
    fidelities: np.ndarray = field(repr=False, default=None)


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    """Independent counter-based stream for trajectory ``index``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def sample_controls(schedule: CircuitSchedule, config: NoiseConfig, rng) -> tuple[CircuitSchedule, NoiseRecord]:
    """Draw one realization of the coherent control errors.

    Single-qubit angles get a factor ``U(1-sqgn, 1+sqgn)`` per target, digital
    ZZ phases and their durations get ``(1 + eps)`` with ``eps ~ N(0, tqgn)``,
    and analog times get ``t + delta`` with ``delta ~ N(0, abn / g0)``.
    Virtual frame updates are exact.
    """
    if not config.control_noise:
        return schedule, NoiseRecord(tuple(() for _ in schedule.events))
    if not isinstance(rng, np.random.Generator):
        rng = trajectory_rng(int(rng), 0)
    abn = config.s_abn if schedule.paradigm == "sdaqc" else config.b_abn
    sigma_t = abn / schedule.base_coupling
    events, draws = [], []
    shared: dict[int, float] = {}
    for e in schedule.events:
        if e.kind in (Kind.ROTATION, Kind.BANG) and not e.virtual:
            u = rng.uniform(1 - config.sqgn, 1 + config.sqgn, size=len(e.angles))
            events.append(replace(e, angles=tuple(a * f for a, f in zip(e.angles, u))))
            draws.append(tuple(u))
        elif e.kind == Kind.ZZ:
            if config.tqg_noise_scope == "gate" and e.group >= 0 and e.group in shared:
                eps = shared[e.group]
            else:
                eps = rng.normal(0.0, config.tqgn)
                shared[e.group] = eps
            events.append(replace(e, angles=(e.angles[0] * (1 + eps),), duration=e.duration * abs(1 + eps)))
            draws.append((eps,))
        elif e.kind == Kind.ANALOG:
            delta = rng.normal(0.0, sigma_t)
            t = e.analog_time + delta
            events.append(replace(e, analog_time=t, duration=abs(t)))
            draws.append((delta,))
        else:
            events.append(e)
            draws.append(())
    return schedule.with_events(events), NoiseRecord(tuple(draws))


class _Propagator:
    """Applies events to a (possibly batched) density matrix."""

    def __init__(self, n: int, config: NoiseConfig, paradigm: str, bang_model: str):
        self.n = n
        self.cfg = config
        self.paradigm = paradigm
        self.bang_model = bang_model
        self.h0 = h0_diag(n)
        self.z = spin_table(n)
        self.flip = superop_matrix(bit_flip(config.p_bitflip)) if config.bitflip and config.p_bitflip > 0 else None
        self._gad_cache: dict[float, np.ndarray] = {}

    def _diag(self, rho, d):
        return rho * (d[:, None] * d.conj()[None, :])

    def _gad(self, dt: float):
        sup = self._gad_cache.get(dt)
        if sup is None:
            ch = gad(self.cfg.decoherence.p_ground, gamma_from_time(dt, self.cfg.decoherence))
            sup = superop_matrix(ch)
            self._gad_cache[dt] = sup
        return sup

    def _flip_targets(self, e: GateEvent):
        if e.kind == Kind.ROTATION:
            return () if e.virtual else e.targets
        if e.kind in (Kind.ZZ, Kind.BANG):
            return e.targets
        # analog blocks: stepwise schedules switch the interaction, every qubit is exposed
        return tuple(range(self.n)) if self.paradigm == "sdaqc" else ()

    def _relaxed(self, e: GateEvent):
        if not self.cfg.relaxation or e.duration <= 0:
            return ()
        if e.kind == Kind.BANG and not self.cfg.decohere_windows:
            return ()
        if self.cfg.idle_decoherence or e.kind == Kind.ANALOG:
            return range(self.n)
        return e.targets

    def apply(self, rho, e: GateEvent):
        # per-qubit pipeline: rotation, then relaxation, then bit-flip; channels on
        # different qubits commute, so each qubit's pipeline is one 4x4 superoperator
        local: dict[int, list[np.ndarray]] = {}
        if e.kind == Kind.ROTATION:
            for q, a, G in zip(e.targets, e.angles, e.generators):
                local.setdefault(q, []).append(unitary_superop(expm_herm(G, 1j * a)))
        elif e.kind == Kind.ZZ:
            j, k = e.targets
            rho = self._diag(rho, np.exp(1j * e.angles[0] * self.z[:, j] * self.z[:, k]))
        elif e.kind == Kind.ANALOG:
            rho = self._diag(rho, np.exp(1j * e.phase * self.h0))
        else:
            U = event_unitary(e, self.n, self.bang_model)
            rho = U @ rho @ U.conj().T
        relaxed = self._relaxed(e)
        if relaxed:
            g = self._gad(e.duration)
            for q in relaxed:
                local.setdefault(q, []).append(g)
        if self.flip is not None:
            for q in self._flip_targets(e):
                local.setdefault(q, []).append(self.flip)
        for q, mats in local.items():
            rho = apply_superop(rho, compose(*mats), q)
        return rho

    def readout(self, rho):
        if self.cfg.measurement_error and self.cfg.p_meas > 0:
            ch = bit_flip(self.cfg.p_meas)
            for q in range(self.n):
                rho = apply_channel(rho, ch, q)
        return rho


def run_trajectory(schedule: CircuitSchedule, rho0, config: NoiseConfig, record: NoiseRecord | None = None) -> TrajectoryResult:
    """Propagate ``rho0`` through an already-sampled schedule.

    ``rho0`` may be a stack of operators with shape ``(..., 2**n, 2**n)``;
    every channel is linear so non-Hermitian stack members are allowed.
    """
    rho = np.array(rho0, dtype=complex)
    dim = 2**schedule.n_qubits
    if rho.shape[-2:] != (dim, dim):
        raise ConfigError(f"state shape {rho.shape} does not match {schedule.n_qubits} qubits")
    prop = _Propagator(schedule.n_qubits, config, schedule.paradigm, schedule.bang_model)
    for e in schedule.events:
        rho = prop.apply(rho, e)
    rho = prop.readout(rho)
    rec = record if record is not None else NoiseRecord(tuple(() for _ in schedule.events))
    return TrajectoryResult(rho, rec, schedule.total_time)


def ideal_unitary(schedule: CircuitSchedule) -> np.ndarray:
    return qft_reference(schedule.n_qubits, schedule.zz_scale)


def _merit(ideal, rho, kind: str) -> float:
    if np.ndim(ideal) == 1:
        f = float(np.real(np.conj(ideal) @ rho @ ideal))
        f = min(max(f, 0.0), 1.0)
    else:
        f = fidelity(ideal, rho)
    return math.sqrt(f) if kind == "root_fidelity" else f


def _z0(rho) -> float:
    d = np.real(np.diagonal(rho, axis1=-2, axis2=-1))
    half = d.shape[-1] // 2
    return d[..., :half].sum(-1) - d[..., half:].sum(-1)


def _summarize(fids, zs, seed: int) -> EnsembleResult:
    fids = np.asarray(fids, dtype=float)
    n = fids.size
    mean = math.fsum(fids) / n
    zmean = math.fsum(zs) / n
    if n > 1:
        var = math.fsum((f - mean) ** 2 for f in fids) / (n - 1)
        se = math.sqrt(var / n)
    else:
        se = 0.0
    return EnsembleResult(mean, zmean, se, n, seed, fids)


def _one(schedule, config, seed, i, rho0):
    noisy, rec = sample_controls(schedule, config, trajectory_rng(seed, i))
    return run_trajectory(noisy, rho0, config, rec).state


def _trajectory_states(schedule, rho0, config, n_traj, seed, workers):
    if not config.is_stochastic():
        # nothing is sampled, so every trajectory is the same deterministic map
        st = run_trajectory(schedule, rho0, config).state
        return [st] * n_traj
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(_one, schedule, config, seed, i, rho0) for i in range(n_traj)]
            return [f.result() for f in futs]
    return [_one(schedule, config, seed, i, rho0) for i in range(n_traj)]


def run_ensemble(
    schedule: CircuitSchedule,
    rho0,
    config: NoiseConfig,
    n_traj: int = 1,
    seed: int = 0,
    ideal=None,
    workers: int = 1,
) -> EnsembleResult:
    """Average the figure of merit and ``<Z_0>`` over independent trajectories.

    Args:
        schedule: Noiseless schedule; control errors are drawn per trajectory.
        rho0: Initial density matrix, or a state vector.
        config: Noise configuration.
        n_traj: Number of trajectories.
        seed: Root seed for the trajectory substreams.
        ideal: Target state (vector or density matrix). Defaults to the exact
            transform applied to ``rho0``.
        workers: Process count; results do not depend on it.
    """
    if n_traj < 1:
        raise ConfigError("n_traj must be at least 1")
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.ndim == 1:
        if ideal is None:
            ideal = ideal_unitary(schedule) @ rho0
        rho0 = to_density(rho0)
    elif ideal is None:
        U = ideal_unitary(schedule)
        ideal = U @ rho0 @ U.conj().T
    states = _trajectory_states(schedule, rho0, config, n_traj, seed, workers)
    fids = [_merit(ideal, r, config.figure_of_merit) for r in states]
    zs = [float(_z0(r)) for r in states]
    return _summarize(fids, zs, seed)


def beta_grid(count: int = 33) -> np.ndarray:
    return np.linspace(0.0, np.pi, count)


def run_beta_sweep(
    schedule: CircuitSchedule,
    betas,
    config: NoiseConfig,
    n_traj: int = 1,
    seed: int = 0,
    workers: int = 1,
) -> list[EnsembleResult]:
    """Ensembles for every ``sin(b)|W> + cos(b)|GHZ>`` input, sharing noise draws.

    The channel of one trajectory is linear, so it is applied once to the stack
    ``(|W><W|, |G><G|, |W><G|)`` and every beta is assembled from the three
    outputs. Trajectory ``i`` uses the same substream as in :func:`run_ensemble`.
    """
    n = schedule.n_qubits
    w, g = make_w(n), make_ghz(n)
    stack = np.stack([np.outer(w, w.conj()), np.outer(g, g.conj()), np.outer(w, g.conj())])
    U = ideal_unitary(schedule)
    uw, ug = U @ w, U @ g
    outs = _trajectory_states(schedule, stack, config, n_traj, seed, workers)
    results = []
    for beta in betas:
        s, c = np.sin(beta), np.cos(beta)
        phi = s * uw + c * ug
        fids, zs = [], []
        for A in outs:
            rho = s * s * A[0] + c * c * A[1] + s * c * (A[2] + A[2].conj().T)
            fids.append(_merit(phi, rho, config.figure_of_merit))
            zs.append(float(_z0(rho)))
        results.append(_summarize(fids, zs, seed))
    return results
