"""Quantum Fourier transform schedules for digital, stepwise and banged execution.

The transform is expressed as a time-ordered program. For each step ``m``
(0-based, ``m = 0 .. N-2``): a Hadamard-like rotation on qubit ``m``, Z
rotations, then one inhomogeneous ZZ evolution coupling ``m`` to every later
qubit. A final Hadamard-like rotation acts on the last qubit. The resulting
unitary is the discrete Fourier transform with bit-reversed output.

The program is then lowered into a :class:`CircuitSchedule` for each paradigm:

* ``dqc``: every ZZ term becomes two fixed quarter-turn ZZ gates plus single-qubit
  rotations.
* ``sdaqc``: every ZZ step is compiled into sandwiched analog blocks, with the
  interaction switched off while single-qubit gates run.
* ``bdaqc``: as ``sdaqc``, but the interaction stays on and the single-qubit
  gates between two analog blocks are executed as one bang window.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from daqcsim.compiler import CouplingSpec, h0_diag, pairs, solve_block_times, spin_table
from daqcsim.errors import ConfigError
from daqcsim.tensor import HD, I2, X, Y, Z, embed, expm_herm

PARADIGMS = ("dqc", "sdaqc", "bdaqc")


class Kind(str, Enum):
    ROTATION = "rotation"
    ZZ = "zz"
    ANALOG = "analog"
    BANG = "bang"


@dataclass(frozen=True)
class GateEvent:
    """One timed operation.

    Attributes:
        kind: Operation type.
        targets: Qubits acted on. For ``ANALOG`` events this is every qubit.
        duration: Wall-clock length in seconds.
        angles: Rotation angle per target (``ROTATION``/``BANG``) or the single
            ZZ phase (``ZZ``).
        generators: Unit Hermitian 2x2 generator per target; the rotation is
            ``exp(i * angle * generator)``.
        analog_time: Signed evolution time under ``coupling * sum Z_j Z_k``.
        coupling: Interaction strength in rad/s for ``ANALOG``/``BANG``.
        label: Free-form tag used by schedule dumps.
        virtual: Instantaneous frame update; no pulse is played.
        group: Index of the decomposed entangling gate a ZZ event belongs to,
            ``-1`` when ungrouped.
    """

    kind: Kind
    targets: tuple[int, ...]
    duration: float
    angles: tuple[float, ...] = ()
    generators: tuple[np.ndarray, ...] = field(default=(), repr=False)
    analog_time: float = 0.0
    coupling: float = 0.0
    label: str = ""
    virtual: bool = False
    group: int = -1

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError(f"negative duration {self.duration}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"repeated targets {self.targets}")

    @property
    def phase(self) -> float:
        """Dimensionless interaction phase ``coupling * analog_time``."""
        return self.coupling * self.analog_time


@dataclass(frozen=True)
class CircuitSchedule:
    paradigm: str
    events: tuple[GateEvent, ...]
    n_qubits: int
    base_coupling: float
    sqg_time_factor: float
    bang_model: str = "simultaneous"
    zz_scale: float = 1.0

    @property
    def total_time(self) -> float:
        return float(sum(e.duration for e in self.events))

    def with_events(self, events) -> "CircuitSchedule":
        return replace(self, events=tuple(events))

    def dump(self) -> str:
        """Human-readable event list, durations in units of ``1/g0``."""
        g = self.base_coupling
        lines = [f"# paradigm={self.paradigm} n_qubits={self.n_qubits} g0={g:g} rad/s b={self.sqg_time_factor:g}"]
        for i, e in enumerate(self.events):
            desc = ",".join(str(q) for q in e.targets)
            extra = ""
            if e.kind in (Kind.ROTATION, Kind.BANG):
                extra = " angles=" + ",".join(f"{a:.6g}" for a in e.angles)
            if e.kind == Kind.ZZ:
                extra = f" phase={e.angles[0]:.6g}"
            if e.kind in (Kind.ANALOG, Kind.BANG):
                extra += f" g*t={e.phase:.6g}"
            v = " virtual" if e.virtual else ""
            lines.append(f"{i:4d} {e.kind.value:8s} {e.label:10s} q=[{desc}] dt*g0={e.duration * g:.6g}{extra}{v}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class QftAngles:
    """Exact dyadic angles of the transform for ``n`` qubits (0-based indices).

    ``zz_scale`` multiplies every ZZ phase; 1 gives the Fourier transform.
    """

    n: int
    zz_scale: float = 1.0

    @staticmethod
    def theta(k: int) -> float:
        """``pi / 2**(k+1)``, with ``k`` the 1-based distance label (k >= 2)."""
        return np.pi / 2 ** (k + 1)

    def alpha(self, c: int, k: int, m: int) -> float:
        """ZZ phase between qubits ``c < k`` during step ``m`` (0-based)."""
        return self.zz_scale * np.pi / 2 ** (k - m + 2) if c == m else 0.0

    def zz_step(self, m: int) -> np.ndarray:
        return np.array([self.alpha(c, k, m) for c, k in pairs(self.n)])

    def z_layer(self, m: int) -> dict[int, float]:
        """Z rotation angle per qubit for step ``m``; both qubits of each controlled phase get ``-theta``."""
        out: dict[int, float] = {}
        for k in range(2, self.n - m + 1):
            th = self.theta(k)
            for q in (k + m - 1, m):
                out[q] = out.get(q, 0.0) - th
        return out


# Hadamard up to a global phase: exp(-i pi/2 (X+Z)/sqrt2) = -i H
_H_ANGLE = -np.pi / 2
_X_ANGLE = np.pi / 2


@dataclass(frozen=True)
class _Rot:
    ops: tuple[tuple[int, float, np.ndarray], ...]
    label: str


@dataclass(frozen=True)
class _ZZStep:
    angles: np.ndarray


def qft_program(n: int, zz_scale: float = 1.0) -> list:
    """Time-ordered logical program of the transform."""
    ang = QftAngles(n, zz_scale)
    prog: list = []
    for m in range(n - 1):
        prog.append(_Rot(((m, _H_ANGLE, HD),), "H"))
        prog.append(_Rot(tuple((q, a, Z) for q, a in sorted(ang.z_layer(m).items())), "Z"))
        prog.append(_ZZStep(ang.zz_step(m)))
    prog.append(_Rot(((n - 1, _H_ANGLE, HD),), "H"))
    return prog


def _rot_unitary(n: int, ops) -> np.ndarray:
    U = np.eye(2**n, dtype=complex)
    for q, a, G in ops:
        U = embed(expm_herm(G, 1j * a), q, n) @ U
    return U


def qft_reference(n: int, zz_scale: float = 1.0) -> np.ndarray:
    """Exact unitary of the transform program (bit-reversed DFT up to global phase)."""
    if not 1 <= n <= 8:
        raise ConfigError(f"reference transform supports 1..8 qubits, got {n}")
    if n == 1:
        return expm_herm(HD, 1j * _H_ANGLE)
    z = spin_table(n)
    U = np.eye(2**n, dtype=complex)
    for item in qft_program(n, zz_scale):
        if isinstance(item, _Rot):
            U = _rot_unitary(n, item.ops) @ U
        else:
            d = sum(a * z[:, j] * z[:, k] for a, (j, k) in zip(item.angles, pairs(n)))
            U = np.exp(1j * d)[:, None] * U
    return U


def dft_bit_reversed(n: int) -> np.ndarray:
    """``P F`` with ``F[j,k] = w^(jk)/sqrt(2^n)`` and ``P`` the bit-reversal permutation."""
    d = 2**n
    j = np.arange(d)
    F = np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)
    rev = np.array([int(format(b, f"0{n}b")[::-1], 2) for b in range(d)])
    out = np.empty_like(F)
    out[rev] = F
    return out


def zz_decomposition(alpha: float, n: int = 2, c: int = 0, k: int = 1) -> list[tuple[str, np.ndarray]]:
    """Seven time-ordered factors realizing ``exp(i alpha Z_c Z_k)`` with quarter-turn ZZ gates.

    ``exp(i a Z_c Z_k) = e^{i pi/4 Y_c} e^{i pi/4 ZZ} e^{i a Y_c} X_k e^{i pi/4 ZZ} X_k e^{-i pi/4 Y_c}``.
    The factor list is returned first-applied first.
    """
    zz = embed(Z, c, n) @ embed(Z, k, n)
    yc = embed(Y, c, n)
    xk = embed(X, k, n)
    q = np.pi / 4
    return [
        ("Y", expm_herm(yc, -1j * q)),
        ("X", xk),
        ("ZZ", expm_herm(zz, 1j * q)),
        ("X", xk),
        ("Y", expm_herm(yc, 1j * alpha)),
        ("ZZ", expm_herm(zz, 1j * q)),
        ("Y", expm_herm(yc, 1j * q)),
    ]


def su2_generator(U: np.ndarray) -> tuple[float, np.ndarray] | None:
    """Canonical ``(angle, G)`` with ``U ∝ exp(i angle G)``, ``G = n·σ`` unit and ``angle ∈ [0, pi/2]``.

    At ``angle = pi/2`` the axis sign is ambiguous; the first nonzero axis
    component is made positive. Returns ``None`` for the identity up to phase.
    """
    U = np.asarray(U, dtype=complex)
    U = U / np.sqrt(np.linalg.det(U))
    c = np.real(np.trace(U)) / 2
    if c < 0:
        U, c = -U, -c
    half = float(np.arccos(min(1.0, c)))
    if half < 1e-12:
        return None
    # U = cos(h) I + i sin(h) n·σ
    v = np.array([np.trace(U @ P) for P in (X, Y, Z)]) / 2
    axis = np.real(v / (1j * np.sin(half)))
    axis = axis / np.linalg.norm(axis)
    if abs(half - np.pi / 2) < 1e-9:
        lead = axis[np.argmax(np.abs(axis) > 1e-9)]
        if lead < 0:
            axis = -axis
    return half, axis[0] * X + axis[1] * Y + axis[2] * Z


@dataclass(frozen=True)
class BuildOptions:
    """Timing and bang-model parameters shared by the builders.

    Attributes:
        g0: Base coupling in rad/s.
        b: Rotation-time factor, a single-qubit gate lasts ``b / g0``.
        bang_model: ``"simultaneous"`` evolves interaction and rotation together,
            ``"midpoint"`` plays the rotation in the middle of the window.
        compensate: Shorten neighbouring analog blocks by the window length.
        virtual_z: Execute the Z layers of the transform as instantaneous frame
            updates (no pulse, no duration, no control error or bit-flip).
        window_sign: Sign convention of the interaction during bang windows,
            ``"block"`` copies the sign of the nearest analog block, ``"+"`` / ``"-"``
            force it.
        merge_sdaqc: Merge X sandwiches between consecutive sDAQC blocks.
        merge_dqc: Merge all single-qubit gates between two ZZ gates into one
            layer of net rotations in the digital schedule.
        block_order: Optional permutation of the analog blocks of every step.
        zz_scale: Multiplier on every ZZ phase of the program.
        z_placement: ``"in_place"`` keeps each Z layer before its ZZ step,
            ``"after_step"`` moves it behind the step (exact, Z commutes with
            the whole sandwiched step).
        edge_windows: ``"bang"`` plays the opening and closing windows under
            the interaction, ``"instant"`` treats them as instantaneous pulses
            before the interaction is switched on and after it is switched off.
    """

    g0: float = 1e7
    b: float = 1 / 100
    bang_model: str = "simultaneous"
    compensate: bool = False
    virtual_z: bool = True
    window_sign: str = "block"
    merge_sdaqc: bool = True
    merge_dqc: bool = False
    block_order: tuple[int, ...] | None = None
    zz_scale: float = 1.0
    z_placement: str = "in_place"
    edge_windows: str = "bang"

    def __post_init__(self):
        if self.g0 <= 0 or self.b <= 0:
            raise ConfigError("g0 and b must be positive")
        if self.bang_model not in ("simultaneous", "midpoint"):
            raise ConfigError(f"unknown bang model {self.bang_model!r}")
        if self.window_sign not in ("block", "+", "-"):
            raise ConfigError(f"unknown window sign {self.window_sign!r}")
        if self.z_placement not in ("in_place", "after_step"):
            raise ConfigError(f"unknown z placement {self.z_placement!r}")
        if self.edge_windows not in ("bang", "instant"):
            raise ConfigError(f"unknown edge window mode {self.edge_windows!r}")

    @property
    def sqg_time(self) -> float:
        return self.b / self.g0


def _check_size(n: int, paradigm: str) -> None:
    if n < 2:
        raise ConfigError(f"need at least 2 qubits, got {n}")


def _rot_event(ops, dt: float, label: str, virtual: bool = False) -> GateEvent:
    return GateEvent(
        Kind.ROTATION,
        tuple(q for q, _, _ in ops),
        0.0 if virtual else dt,
        angles=tuple(a for _, a, _ in ops),
        generators=tuple(G for _, _, G in ops),
        label=label,
        virtual=virtual,
    )


def build_qft_dqc(n: int, opts: BuildOptions = BuildOptions()) -> CircuitSchedule:
    """Digital schedule: each ZZ term expanded into quarter-turn ZZ gates and rotations."""
    _check_size(n, "dqc")
    dt = opts.sqg_time
    t_zz = np.pi / (4 * opts.g0)
    ev: list[GateEvent] = []
    q4 = np.pi / 4
    gid = -1
    for item in qft_program(n, opts.zz_scale):
        if isinstance(item, _Rot):
            ev.append(_rot_event(item.ops, dt, item.label, virtual=item.label == "Z" and opts.virtual_z))
            continue
        for a, (c, k) in zip(item.angles, pairs(n)):
            if a == 0:
                continue
            gid += 1
            ev += [
                _rot_event(((c, -q4, Y),), dt, "Y"),
                _rot_event(((k, _X_ANGLE, X),), dt, "X"),
                GateEvent(Kind.ZZ, (c, k), t_zz, angles=(q4,), label="ZZ", group=gid),
                _rot_event(((k, _X_ANGLE, X),), dt, "X"),
                _rot_event(((c, a, Y),), dt, "Y"),
                GateEvent(Kind.ZZ, (c, k), t_zz, angles=(q4,), label="ZZ", group=gid),
                _rot_event(((c, q4, Y),), dt, "Y"),
            ]
    if opts.merge_dqc:
        ev = _merge_digital(ev, dt)
    return CircuitSchedule("dqc", tuple(ev), n, opts.g0, opts.b, opts.bang_model, opts.zz_scale)


def _merge_digital(ev: list[GateEvent], dt: float) -> list[GateEvent]:
    out: list[GateEvent] = []
    pending: dict[int, np.ndarray] = {}

    def flush():
        ops = _merge(pending)
        pending.clear()
        if ops:
            out.append(_rot_event(ops, dt, "R"))

    for e in ev:
        if e.kind == Kind.ROTATION and not e.virtual:
            for q, a, G in zip(e.targets, e.angles, e.generators):
                pending[q] = expm_herm(G, 1j * a) @ pending.get(q, I2)
        else:
            flush()
            out.append(e)
    flush()
    return out


def _analog_steps(n: int, opts: BuildOptions):
    """Compiled analog blocks ``(pair, time)`` per ZZ step, zero-time blocks dropped."""
    ang = QftAngles(n, opts.zz_scale)
    steps = []
    for m in range(n - 1):
        spec = CouplingSpec.from_angles(n, ang.zz_step(m), base_coupling=opts.g0)
        sched = solve_block_times(spec)
        blocks = list(sched.blocks)
        if opts.block_order is not None:
            blocks = [blocks[i] for i in opts.block_order]
        steps.append([(b.pair, b.time) for b in blocks if abs(b.time * opts.g0) > 1e-12])
    return steps


def _lowered(n: int, opts: BuildOptions):
    """Program with ZZ steps replaced by X-sandwiched analog blocks.

    Yields ``("rot", ops, label)`` and ``("block", pair, time)`` items.
    """
    steps = iter(_analog_steps(n, opts))
    held = None
    for item in qft_program(n, opts.zz_scale):
        if isinstance(item, _Rot):
            if item.label == "Z" and opts.z_placement == "after_step":
                held = item
            else:
                yield ("rot", item.ops, item.label)
            continue
        for pair, t in next(steps):
            xs = tuple((q, _X_ANGLE, X) for q in pair)
            yield ("rot", xs, "X")
            yield ("block", pair, t)
            yield ("rot", xs, "X")
        if held is not None:
            yield ("rot", held.ops, held.label)
            held = None


def _analog_event(n: int, t: float, g: float, pair) -> GateEvent:
    return GateEvent(Kind.ANALOG, tuple(range(n)), abs(t), analog_time=t, coupling=g, label=f"A{pair[0]}{pair[1]}")


def _merge(pending: dict[int, np.ndarray]):
    """Net single-qubit unitaries as canonical ``(q, angle, G)`` ops."""
    ops = []
    for q in sorted(pending):
        gen = su2_generator(pending[q])
        if gen is not None:
            ops.append((q, gen[0], gen[1]))
    return tuple(ops)


def build_qft_sdaqc(n: int, opts: BuildOptions = BuildOptions()) -> CircuitSchedule:
    """Stepwise schedule: interaction off during single-qubit gates."""
    _check_size(n, "sdaqc")
    dt, g = opts.sqg_time, opts.g0
    ev: list[GateEvent] = []
    pending: dict[int, np.ndarray] = {}

    def flush():
        ops = _merge(pending)
        pending.clear()
        if ops:
            ev.append(_rot_event(ops, dt, "X"))

    for item in _lowered(n, opts):
        if item[0] == "block":
            flush()
            ev.append(_analog_event(n, item[2], g, item[1]))
        elif item[2] == "X" and opts.merge_sdaqc:
            for q, a, G in item[1]:
                pending[q] = expm_herm(G, 1j * a) @ pending.get(q, I2)
        else:
            flush()
            virtual = item[2] == "Z" and opts.virtual_z
            ev.append(_rot_event(item[1], dt, item[2], virtual=virtual))
    flush()
    return CircuitSchedule("sdaqc", tuple(ev), n, g, opts.b, opts.bang_model, opts.zz_scale)


def build_qft_bdaqc(n: int, opts: BuildOptions = BuildOptions()) -> CircuitSchedule:
    """Banged schedule: the interaction is never switched off.

    All single-qubit gates between two analog blocks are merged into one bang
    window of length ``b/g0``; each qubit gets its net rotation in canonical
    form. With ``virtual_z`` the Z layer is an instantaneous frame update that
    splits the window around it.
    """
    _check_size(n, "bdaqc")
    dt, g = opts.sqg_time, opts.g0
    raw: list = []
    pending: dict[int, np.ndarray] = {}

    def flush():
        ops = _merge(pending)
        pending.clear()
        if ops:
            raw.append(("window", ops))

    for item in _lowered(n, opts):
        if item[0] == "block":
            flush()
            raw.append(("block", item[1], item[2]))
        elif item[2] == "Z" and opts.virtual_z:
            flush()
            raw.append(("virtual", item[1]))
        else:
            for q, a, G in item[1]:
                pending[q] = expm_herm(G, 1j * a) @ pending.get(q, I2)
    flush()

    signs = _window_signs(raw, opts.window_sign)
    ev: list[GateEvent] = []
    for i, item in enumerate(raw):
        if item[0] == "virtual":
            ev.append(_rot_event(item[1], 0.0, "Z", virtual=True))
        elif item[0] == "window" and opts.edge_windows == "instant" and i in (0, len(raw) - 1):
            ev.append(_rot_event(item[1], 0.0, "edge"))
        elif item[0] == "window":
            ops = item[1]
            ev.append(
                GateEvent(
                    Kind.BANG,
                    tuple(q for q, _, _ in ops),
                    dt,
                    angles=tuple(a for _, a, _ in ops),
                    generators=tuple(G for _, _, G in ops),
                    analog_time=signs[i] * dt,
                    coupling=g,
                    label="window",
                )
            )
        else:
            t = item[2]
            if opts.compensate:
                t = _compensated(raw, i, t, dt)
            ev.append(_analog_event(n, t, g, item[1]))
    return CircuitSchedule("bdaqc", tuple(ev), n, g, opts.b, opts.bang_model, opts.zz_scale)


def _window_signs(raw, mode: str) -> list[float]:
    """Interaction sign seen by each window: the preceding block's sign, else the next one's."""
    if mode in ("+", "-"):
        s = 1.0 if mode == "+" else -1.0
        return [s] * len(raw)
    signs = [1.0] * len(raw)
    last = None
    for i, item in enumerate(raw):
        if item[0] == "block":
            last = 1.0 if item[2] >= 0 else -1.0
        signs[i] = last if last is not None else 0.0
    nxt = None
    for i in range(len(raw) - 1, -1, -1):
        if raw[i][0] == "block":
            nxt = 1.0 if raw[i][2] >= 0 else -1.0
        if signs[i] == 0.0:
            signs[i] = nxt if nxt is not None else 1.0
    return signs


def _compensated(raw, i: int, t: float, dt: float) -> float:
    """Remove half a window of interaction on each side that borders a window."""
    cut = 0.0
    for j in (i - 1, i + 1):
        if 0 <= j < len(raw) and raw[j][0] == "window":
            cut += dt / 2
    mag = max(abs(t) - cut, 0.0)
    return np.copysign(mag, t)


def build_schedule(paradigm: str, n: int, opts: BuildOptions = BuildOptions()) -> CircuitSchedule:
    builders = {"dqc": build_qft_dqc, "sdaqc": build_qft_sdaqc, "bdaqc": build_qft_bdaqc}
    if paradigm not in builders:
        raise ConfigError(f"unknown paradigm {paradigm!r}; choose from {PARADIGMS}")
    return builders[paradigm](n, opts)


def event_unitary(e: GateEvent, n: int, bang_model: str = "simultaneous") -> np.ndarray:
    """Dense ``2^n x 2^n`` unitary of an event; used by tests and small-n tooling."""
    z = spin_table(n)
    if e.kind == Kind.ROTATION:
        return _rot_unitary(n, zip(e.targets, e.angles, e.generators))
    if e.kind == Kind.ZZ:
        j, k = e.targets
        return np.diag(np.exp(1j * e.angles[0] * z[:, j] * z[:, k]))
    h = h0_diag(n)
    if e.kind == Kind.ANALOG:
        return np.diag(np.exp(1j * e.phase * h))
    rot = sum(a * embed(G, q, n) for q, a, G in zip(e.targets, e.angles, e.generators))
    if bang_model == "midpoint":
        half = np.exp(0.5j * e.phase * h)
        return half[:, None] * expm_herm(rot, 1j) * half[None, :]
    return expm_herm(np.diag(e.phase * h) + rot, 1j)


def schedule_unitary(s: CircuitSchedule) -> np.ndarray:
    """Noiseless unitary of a whole schedule."""
    U = np.eye(2**s.n_qubits, dtype=complex)
    for e in s.events:
        U = event_unitary(e, s.n_qubits, s.bang_model) @ U
    return U
