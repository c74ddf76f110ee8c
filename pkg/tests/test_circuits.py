import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daqcsim.circuits import (
    BuildOptions,
    Kind,
    QftAngles,
    build_schedule,
    dft_bit_reversed,
    event_unitary,
    qft_reference,
    schedule_unitary,
    su2_generator,
    zz_decomposition,
)
from daqcsim.errors import ConfigError, UnsupportedSizeError
from daqcsim.states import make_initial
from daqcsim.tensor import X, Z, embed, expm_herm, phase_aligned_distance
from helpers import random_unitary, seeds


def textbook_qft(n):
    """Hadamard plus controlled-phase ladder without the final swaps."""
    d = 2**n
    had = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    U = np.eye(d, dtype=complex)
    bits = (np.arange(d)[:, None] >> (n - 1 - np.arange(n))) & 1
    for j in range(n):
        U = embed(had, j, n) @ U
        for k in range(j + 1, n):
            phase = np.exp(2j * np.pi / 2 ** (k - j + 1) * bits[:, j] * bits[:, k])
            U = phase[:, None] * U
    return U


@pytest.mark.parametrize("n", [1, 2, 3, 5, 6])
def test_reference_is_textbook_transform(n):
    assert phase_aligned_distance(qft_reference(n), textbook_qft(n)) < 1e-12
    assert phase_aligned_distance(dft_bit_reversed(n), textbook_qft(n)) < 1e-12


def test_doubled_phases_are_not_the_transform():
    assert phase_aligned_distance(qft_reference(3, zz_scale=2.0), textbook_qft(3)) > 0.5


@pytest.mark.parametrize("alpha", [0.0, np.pi / 8, np.pi / 16])
def test_zz_identity_exact(alpha):
    U = np.eye(4, dtype=complex)
    for _, f in zz_decomposition(alpha):
        U = f @ U
    target = expm_herm(np.kron(Z, Z), 1j * alpha)
    assert np.max(np.abs(U - target)) < 1e-12


@given(alpha=st.floats(-np.pi, np.pi))
def test_zz_identity_any_angle(alpha):
    U = np.eye(8, dtype=complex)
    for _, f in zz_decomposition(alpha, 3, 0, 2):
        U = f @ U
    zz = embed(Z, 0, 3) @ embed(Z, 2, 3)
    assert np.max(np.abs(U - expm_herm(zz, 1j * alpha))) < 1e-12


def test_angles_are_dyadic():
    ang = QftAngles(4)
    assert ang.theta(2) == np.pi / 8
    assert ang.alpha(0, 1, 0) == np.pi / 8
    assert ang.alpha(1, 3, 1) == np.pi / 16
    assert ang.alpha(0, 3, 1) == 0.0


@pytest.mark.parametrize("paradigm", ["dqc", "sdaqc"])
@pytest.mark.parametrize("n", [2, 3, 5])
def test_exact_paradigms(paradigm, n):
    U = schedule_unitary(build_schedule(paradigm, n))
    assert phase_aligned_distance(U, qft_reference(n)) < 1e-10


@pytest.mark.parametrize("n", [2, 3, 5])
def test_merged_digital_schedule_is_exact(n):
    s = build_schedule("dqc", n, BuildOptions(merge_dqc=True))
    assert phase_aligned_distance(schedule_unitary(s), qft_reference(n)) < 1e-10


def test_bang_error_vanishes_with_rotation_time():
    psi = make_initial(np.pi / 4, 3)
    exact = qft_reference(3) @ psi
    fids = []
    for b in (1 / 20, 1 / 50, 1 / 200, 1 / 2000):
        U = schedule_unitary(build_schedule("bdaqc", 3, BuildOptions(b=b)))
        fids.append(abs(np.vdot(exact, U @ psi)) ** 2)
    assert all(np.diff(fids) > 0)
    assert fids[-1] > 1 - 1e-4


@pytest.mark.parametrize("model", ["simultaneous", "midpoint"])
def test_bang_models_agree_to_first_order(model):
    s = build_schedule("bdaqc", 3, BuildOptions(b=1e-4, bang_model=model))
    assert phase_aligned_distance(schedule_unitary(s), qft_reference(3)) < 5e-3


def test_bang_event_simultaneous_unitary():
    s = build_schedule("bdaqc", 3, BuildOptions(b=0.05))
    e = next(e for e in s.events if e.kind == Kind.BANG)
    U = event_unitary(e, 3)
    h = sum(embed(Z, j, 3) @ embed(Z, k, 3) for j, k in [(0, 1), (0, 2), (1, 2)])
    gen = e.phase * h + sum(a * embed(G, q, 3) for q, a, G in zip(e.targets, e.angles, e.generators))
    assert phase_aligned_distance(U, expm_herm(gen, 1j)) < 1e-12


def test_event_durations():
    g0, b = 1e7, 0.01
    for paradigm in ("dqc", "sdaqc", "bdaqc"):
        s = build_schedule(paradigm, 3, BuildOptions(g0=g0, b=b))
        for e in s.events:
            if e.kind == Kind.ROTATION and not e.virtual and e.label != "edge":
                assert np.isclose(e.duration, b / g0)
            elif e.kind == Kind.ZZ:
                assert np.isclose(e.duration, np.pi / (4 * g0))
            elif e.kind == Kind.ANALOG:
                assert np.isclose(e.duration, abs(e.analog_time))
            elif e.virtual:
                assert e.duration == 0


def test_dqc_zz_events_grouped_in_pairs():
    s = build_schedule("dqc", 4)
    groups = [e.group for e in s.events if e.kind == Kind.ZZ]
    assert len(groups) == 2 * 6
    assert all(groups.count(g) == 2 for g in set(groups))


def test_virtual_z_layers():
    s = build_schedule("sdaqc", 3)
    virt = [e for e in s.events if e.virtual]
    assert virt and all(e.kind == Kind.ROTATION and e.duration == 0 for e in virt)
    s2 = build_schedule("sdaqc", 3, BuildOptions(virtual_z=False))
    assert not any(e.virtual for e in s2.events)
    assert phase_aligned_distance(schedule_unitary(s2), qft_reference(3)) < 1e-10


def test_four_qubits_only_digital():
    build_schedule("dqc", 4)
    for paradigm in ("sdaqc", "bdaqc"):
        with pytest.raises(UnsupportedSizeError):
            build_schedule(paradigm, 4)


@pytest.mark.parametrize(
    "kw", [dict(g0=0), dict(b=-1), dict(bang_model="x"), dict(window_sign="?"), dict(edge_windows="y")]
)
def test_option_validation(kw):
    with pytest.raises(ConfigError):
        BuildOptions(**kw)


def test_unknown_paradigm():
    with pytest.raises(ConfigError):
        build_schedule("analog", 3)


@given(seed=seeds)
@settings(max_examples=50, deadline=None)
def test_su2_generator_round_trip(seed):
    u = random_unitary(np.random.default_rng(seed), 2)
    angle, G = su2_generator(u)
    assert 0 <= angle <= np.pi / 2 + 1e-12
    assert np.allclose(G @ G, np.eye(2))
    assert phase_aligned_distance(expm_herm(G, 1j * angle), u) < 1e-9


def test_su2_generator_identity_and_pi_half():
    assert su2_generator(np.eye(2) * np.exp(0.3j)) is None
    angle, G = su2_generator(-X)
    assert np.isclose(angle, np.pi / 2) and np.allclose(G, X)


def test_dump_lists_every_event():
    s = build_schedule("bdaqc", 3)
    lines = s.dump().splitlines()
    assert lines[0].startswith("# paradigm=bdaqc")
    assert len(lines) == len(s.events) + 1
