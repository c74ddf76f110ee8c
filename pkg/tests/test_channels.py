import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daqcsim.channels import (
    DecoherenceConfig,
    KrausChannel,
    apply_channel,
    apply_superop,
    apply_to_all,
    bit_flip,
    compose,
    gad,
    gamma_from_time,
    superop_matrix,
    unitary_superop,
    validate_cptp,
)
from daqcsim.errors import ConfigError
from daqcsim.tensor import X, Z
from helpers import full_kraus_apply, probabilities, random_density, random_unitary, seeds


@given(p=probabilities, gamma=probabilities)
def test_gad_is_cptp(p, gamma):
    assert validate_cptp(gad(p, gamma)).passed


@given(p=probabilities)
def test_bit_flip_is_cptp(p):
    assert validate_cptp(bit_flip(p)).passed


@pytest.mark.parametrize("p, gamma", [(-0.1, 0.5), (0.5, 1.2), (1.5, 0.0)])
def test_out_of_range_parameters_rejected(p, gamma):
    with pytest.raises(ConfigError):
        gad(p, gamma)


def test_non_cptp_channel_detected():
    report = validate_cptp(KrausChannel((0.9 * np.eye(2),)))
    assert not report.passed and report.deviation > 0.1


@given(seed=seeds, n=st.integers(1, 4), p=probabilities, gamma=probabilities)
@settings(max_examples=40, deadline=None)
def test_apply_matches_full_kraus_embedding(seed, n, p, gamma):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, 2**n)
    q = int(rng.integers(n))
    ch = gad(p, gamma)
    np.testing.assert_allclose(apply_channel(rho, ch, q), full_kraus_apply(rho, ch.operators, q, n), atol=1e-12)


def test_apply_on_batch_equals_individual():
    rng = np.random.default_rng(3)
    stack = np.stack([random_density(rng, 8) for _ in range(3)])
    ch = bit_flip(0.2)
    out = apply_channel(stack, ch, 1)
    for r, o in zip(stack, out):
        np.testing.assert_allclose(apply_channel(r, ch, 1), o, atol=1e-14)


def test_gad_fixed_point_and_full_damping():
    p = 0.65
    ss = np.diag([p, 1 - p]).astype(complex)
    np.testing.assert_allclose(apply_channel(ss, gad(p, 0.3), 0), ss, atol=1e-15)
    excited = np.diag([0, 1]).astype(complex)
    np.testing.assert_allclose(apply_channel(excited, gad(p, 1.0), 0), ss, atol=1e-15)


def test_gad_coherence_decay():
    plus = np.full((2, 2), 0.5, dtype=complex)
    out = apply_channel(plus, gad(0.4, 0.19), 0)
    assert np.isclose(out[0, 1], 0.5 * np.sqrt(1 - 0.19))


def test_bit_flip_action():
    rho = np.diag([1, 0]).astype(complex)
    np.testing.assert_allclose(apply_channel(rho, bit_flip(0.25), 0), np.diag([0.75, 0.25]))
    np.testing.assert_allclose(apply_channel(rho, bit_flip(0.0), 0), rho)


def test_gamma_from_time():
    cfg = DecoherenceConfig(t1=50e-6)
    assert gamma_from_time(0.0, cfg) == 0.0
    assert np.isclose(gamma_from_time(50e-6, cfg), 1 - np.exp(-1))
    with pytest.raises(ConfigError):
        gamma_from_time(-1.0, cfg)
    with pytest.raises(ConfigError):
        DecoherenceConfig(t1=0.0)


def test_compose_order_and_unitary_superop():
    rng = np.random.default_rng(5)
    rho = random_density(rng, 4)
    u = random_unitary(rng, 2)
    seq = apply_channel(apply_superop(rho, unitary_superop(u), 1), gad(0.3, 0.4), 1)
    fused = apply_superop(rho, compose(unitary_superop(u), superop_matrix(gad(0.3, 0.4))), 1)
    np.testing.assert_allclose(seq, fused, atol=1e-14)
    big = np.kron(np.eye(2), u)
    np.testing.assert_allclose(apply_superop(rho, unitary_superop(u), 1), big @ rho @ big.conj().T, atol=1e-14)


def test_apply_to_all_qubits():
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1
    out = apply_to_all(rho, KrausChannel((X,)))
    assert np.isclose(out[3, 3], 1)


def test_qubit_out_of_range():
    with pytest.raises(IndexError):
        apply_channel(np.eye(4) / 4, bit_flip(0.1), 2)


def test_kraus_shape_validation():
    with pytest.raises(ValueError):
        KrausChannel((np.eye(3),))
    with pytest.raises(ValueError):
        KrausChannel(())


def test_superoperator_of_pauli_channel():
    ch = KrausChannel((np.sqrt(0.5) * np.eye(2), np.sqrt(0.5) * Z))
    plus = np.full((2, 2), 0.5, dtype=complex)
    np.testing.assert_allclose(apply_channel(plus, ch, 0), np.eye(2) / 2, atol=1e-15)
