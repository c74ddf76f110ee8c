"""Two-stage zero-noise extrapolation for banged digital-analog circuits.

Stage 1 removes decoherence: for a fixed rotation-time factor ``b`` the
coupling is scaled by ``a_j``, which scales the total runtime, and the figure of
merit is extrapolated linearly (least squares) to zero runtime.

Stage 2 removes the intrinsic bang error: the zero-decoherence values are
extrapolated in ``b`` to ``b = 0`` with low-order polynomials through the
smallest-``b`` points or with Richardson's tableau over all points.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

import numpy as np

from daqcsim.errors import ConfigError

if TYPE_CHECKING:
    from daqcsim.circuits import BuildOptions
    from daqcsim.engine import NoiseConfig

STAGE2_METHODS = ("linear", "quadratic", "cubic", "richardson")
_ORDERS = {"linear": 1, "quadratic": 2, "cubic": 3}

B_VALUES = (1 / 50, 1 / 100, 1 / 150, 1 / 200, 1 / 250)
A_VALUES = (0.94, 0.97, 1.00, 1.03, 1.07)


@dataclass(frozen=True)
class ExtrapolationResult:
    method: str
    value: float
    points_used: int
    residuals: tuple[float, ...] = ()


def stage1_zero_decoherence(times, values) -> ExtrapolationResult:
    """Least-squares line through ``(time, value)`` evaluated at time 0.

    Args:
        times: Total circuit time per point (any consistent unit).
        values: Figure of merit per point.

    Raises:
        ConfigError: With fewer than two points, non-positive or identical times.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape or t.size < 2:
        raise ConfigError("stage 1 needs at least two (time, value) pairs of equal length")
    if np.any(t <= 0):
        raise ConfigError("stage 1 times must be positive")
    if np.ptp(t) == 0:
        raise ConfigError("stage 1 times are all equal; the slope is undetermined")
    A = np.column_stack([np.ones_like(t), t])
    coef, *_ = np.linalg.lstsq(A, v, rcond=None)
    resid = v - A @ coef
    return ExtrapolationResult("linear-least-squares", float(coef[0]), t.size, tuple(resid))


def neville_at_zero(xs, ys) -> float:
    """Value at ``x = 0`` of the interpolating polynomial through ``(xs, ys)``.

    Richardson elimination written as Neville's tableau:
    ``P[i..j](0) = (x_j P[i..j-1](0) - x_i P[i+1..j](0)) / (x_j - x_i)``.
    """
    x = [float(v) for v in xs]
    p = [float(v) for v in ys]
    if len(x) != len(p) or not x:
        raise ConfigError("need matching, non-empty point lists")
    if len(set(x)) != len(x):
        raise ConfigError("interpolation nodes must be distinct")
    n = len(x)
    for level in range(1, n):
        for i in range(n - level):
            j = i + level
            p[i] = (x[j] * p[i] - x[i] * p[i + 1]) / (x[j] - x[i])
    return p[0]


def polynomial_at_zero(xs, ys, order: int) -> float:
    """Degree-``order`` polynomial through ``order + 1`` points, evaluated at 0.

    Solved as a Vandermonde system, independently of the tableau route.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size != order + 1:
        raise ConfigError(f"order {order} needs exactly {order + 1} points, got {x.size}")
    V = np.vander(x, order + 1, increasing=True)
    return float(np.linalg.solve(V, y)[0])


def stage2_zero_bang(b_values, values, method: str | int) -> ExtrapolationResult:
    """Extrapolate the zero-decoherence row to ``b = 0``.

    Args:
        b_values: Rotation-time factors.
        values: Zero-decoherence figure of merit per ``b``.
        method: ``"linear"``, ``"quadratic"``, ``"cubic"``, an integer order,
            or ``"richardson"`` (all points).

    Raises:
        ConfigError: Unknown method or too few points for the order.
    """
    b = np.asarray(b_values, dtype=float)
    v = np.asarray(values, dtype=float)
    if b.shape != v.shape:
        raise ConfigError("b_values and values differ in length")
    if method == "richardson":
        return ExtrapolationResult("richardson", neville_at_zero(b, v), b.size)
    order = _ORDERS.get(method, method) if isinstance(method, str) else int(method)
    if isinstance(order, str):
        raise ConfigError(f"unknown stage-2 method {method!r}; choose from {STAGE2_METHODS}")
    if order < 1 or b.size < order + 1:
        raise ConfigError(f"order {order} needs at least {order + 1} points, got {b.size}")
    idx = np.argsort(b, kind="stable")[: order + 1]
    name = method if isinstance(method, str) else f"polynomial-{order}"
    return ExtrapolationResult(name, polynomial_at_zero(b[idx], v[idx], order), order + 1)


@dataclass
class MitigationGrid:
    """Figure-of-merit grid, rows indexed by coupling factor ``a_j``, columns by ``b_i``."""

    b_values: tuple[float, ...]
    a_values: tuple[float, ...]
    values: np.ndarray
    times: np.ndarray
    ideal: np.ndarray | None = None
    zero_decoherence: np.ndarray = field(init=False)
    stage2: dict = field(init=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.times = np.asarray(self.times, dtype=float)
        shape = (len(self.a_values), len(self.b_values))
        if self.values.shape != shape or self.times.shape != shape:
            raise ConfigError(f"grid and times must have shape {shape}")
        self.zero_decoherence = np.array(
            [stage1_zero_decoherence(self.times[:, i], self.values[:, i]).value for i in range(shape[1])]
        )
        self.stage2 = {m: stage2_zero_bang(self.b_values, self.zero_decoherence, m) for m in STAGE2_METHODS}


def nominal_times(b_values, a_values) -> np.ndarray:
    """Runtime proxy ``1/a_j`` for every cell; valid because runtime scales as ``1/g_j``."""
    return np.array([[1.0 / a for _ in b_values] for a in a_values])


BENCHMARK_QUBITS = 6
BENCHMARK_G0 = 1e6


def benchmark_options(b: float, g: float = BENCHMARK_G0) -> "BuildOptions":
    """Banged schedule settings that reproduce the reference mitigation grids.

    Every ZZ phase is doubled, Z layers are frame updates placed after their
    step, windows see ``+g H0``, and the first and last windows are
    instantaneous pulses outside the interaction span. See the README for why.
    """
    from daqcsim.circuits import BuildOptions

    return BuildOptions(
        g0=g, b=b, zz_scale=2.0, z_placement="after_step", window_sign="+", edge_windows="instant"
    )


def benchmark_noise() -> "NoiseConfig":
    """Decoherence only, root fidelity, no relaxation during windows."""
    from daqcsim.engine import NoiseConfig

    return NoiseConfig.decoherence_only(figure_of_merit="root_fidelity", decohere_windows=False)


@dataclass
class MitigationExperiment:
    fidelity: MitigationGrid
    z0: MitigationGrid


def run_mitigation_experiment(
    n: int = BENCHMARK_QUBITS,
    b_values=B_VALUES,
    a_values=A_VALUES,
    g0: float = BENCHMARK_G0,
    noise: "NoiseConfig | None" = None,
    options=benchmark_options,
) -> MitigationExperiment:
    """Simulate the banged transform on ``(|W> + |GHZ>)/sqrt(2)`` over the (a, b) grid.

    Each cell runs with coupling ``a_j g0`` and rotation factor ``b_i``; the
    ideal row uses ``g0`` with all noise off. Stage-1 abscissae are the actual
    schedule runtimes.

    Args:
        n: Qubit count.
        b_values: Rotation-time factors (columns).
        a_values: Coupling factors (rows).
        g0: Base coupling in rad/s.
        noise: Noise configuration, default :func:`benchmark_noise`.
        options: Callable ``(b, g) -> BuildOptions``.
    """
    from daqcsim.circuits import build_schedule
    from daqcsim.engine import run_ensemble
    from daqcsim.states import make_initial

    noise = benchmark_noise() if noise is None else noise
    psi = make_initial(np.pi / 4, n)
    shape = (len(a_values), len(b_values))
    fid, z0, times = np.zeros(shape), np.zeros(shape), np.zeros(shape)
    ideal_f, ideal_z = np.zeros(shape[1]), np.zeros(shape[1])
    quiet = replace(noise, control_noise=False, bitflip=False, relaxation=False, measurement_error=False)
    for i, b in enumerate(b_values):
        for j, a in enumerate(a_values):
            sched = build_schedule("bdaqc", n, options(b, a * g0))
            r = run_ensemble(sched, psi, noise)
            fid[j, i], z0[j, i], times[j, i] = r.mean_fidelity, r.mean_z0, sched.total_time
        r = run_ensemble(build_schedule("bdaqc", n, options(b, g0)), psi, quiet)
        ideal_f[i], ideal_z[i] = r.mean_fidelity, r.mean_z0
    return MitigationExperiment(
        MitigationGrid(tuple(b_values), tuple(a_values), fid, times, ideal_f),
        MitigationGrid(tuple(b_values), tuple(a_values), z0, times, ideal_z),
    )
