import math

import numpy as np
import pytest

from qaoaforge.errors import SizeCapError
from qaoaforge import simulator as sim


def random_state(rng, n):
    amp = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amp /= np.linalg.norm(amp)
    return sim.StateVector(n, amp)


def test_init_plus():
    psi = sim.init_plus(2)
    assert np.allclose(psi.amp, [0.5, 0.5, 0.5, 0.5])
    assert psi.norm_error() < 1e-15


def test_basis_state():
    psi = sim.basis_state(3, 5)
    want = np.zeros(8)
    want[5] = 1.0
    assert np.allclose(psi.amp, want)
    with pytest.raises(ValueError):
        sim.basis_state(2, 4)


def test_statevector_cap():
    with pytest.raises(SizeCapError):
        sim.init_plus(sim.STATEVECTOR_CAP + 1)


def test_rx_on_zero():
    psi = sim.basis_state(1, 0)
    sim.apply_rx(psi, 0, 0.8)
    assert abs(psi.amp[0] - math.cos(0.4)) < 1e-15
    assert abs(psi.amp[1] - (-1j * math.sin(0.4))) < 1e-15


def test_rx_acts_on_named_qubit():
    psi = sim.basis_state(2, 0)
    sim.apply_rx(psi, 1, math.pi)  # |00> -> -i|10>: flips bit 1, index 2
    assert abs(psi.amp[2] + 1j) < 1e-12
    assert abs(psi.amp[0]) < 1e-12


def test_rz_phases():
    theta = 1.3
    psi = sim.init_plus(1)
    sim.apply_rz(psi, 0, theta)
    assert abs(psi.amp[0] - np.exp(-1j * theta / 2) / math.sqrt(2)) < 1e-15
    assert abs(psi.amp[1] - np.exp(+1j * theta / 2) / math.sqrt(2)) < 1e-15


def test_cnot_truth_table():
    # control 0, target 1: basis order z = (bit1 bit0)
    for z_in, z_out in [(0, 0), (1, 3), (2, 2), (3, 1)]:
        psi = sim.basis_state(2, z_in)
        sim.apply_cnot(psi, 0, 1)
        assert abs(psi.amp[z_out] - 1.0) < 1e-15
    for z_in, z_out in [(0, 0), (1, 1), (2, 3), (3, 2)]:
        psi = sim.basis_state(2, z_in)
        sim.apply_cnot(psi, 1, 0)
        assert abs(psi.amp[z_out] - 1.0) < 1e-15
    psi = sim.basis_state(2, 0)
    with pytest.raises(ValueError):
        sim.apply_cnot(psi, 0, 0)


def test_rzz_diagonal_phases():
    theta = 0.9
    psi = sim.init_plus(2)
    sim.apply_rzz(psi, 0, 1, theta)
    em, ep = np.exp(-1j * theta / 2) / 2, np.exp(1j * theta / 2) / 2
    assert np.allclose(psi.amp, [em, ep, ep, em])


def test_rzk_parity_sign():
    rng = np.random.default_rng(31)
    n, theta = 4, 1.7
    psi = random_state(rng, n)
    before = psi.amp.copy()
    sim.apply_rzk(psi, (0, 2, 3), theta)
    mask = 0b1101
    for z in range(1 << n):
        parity = bin(z & mask).count("1") % 2
        phase = np.exp(-1j * (theta / 2) * (1 - 2 * parity))
        assert abs(psi.amp[z] - phase * before[z]) < 1e-12


def test_rzk_ladder_matches_direct():
    rng = np.random.default_rng(32)
    for _ in range(10):
        n = int(rng.integers(2, 6))
        k = int(rng.integers(1, n + 1))
        qubits = tuple(sorted(rng.choice(n, size=k, replace=False)))
        theta = float(rng.uniform(-6, 6))
        a = random_state(rng, n)
        b = sim.StateVector(n, a.amp.copy())
        sim.apply_rzk(a, qubits, theta)
        sim.apply_rzk_ladder(b, qubits, theta)
        assert np.abs(a.amp - b.amp).max() < 1e-12


def test_qubit_index_validation():
    psi = sim.init_plus(2)
    with pytest.raises(ValueError):
        sim.apply_rx(psi, 2, 0.1)
    with pytest.raises(ValueError):
        sim.apply_rzk(psi, (0, 0), 0.1)
    with pytest.raises(ValueError):
        sim.apply_rzk(psi, (), 0.1)


def test_norm_preserved_random_circuit():
    rng = np.random.default_rng(33)
    psi = random_state(rng, 5)
    for _ in range(40):
        gate = rng.integers(0, 4)
        theta = float(rng.uniform(-6, 6))
        q = int(rng.integers(0, 5))
        if gate == 0:
            sim.apply_rx(psi, q, theta)
        elif gate == 1:
            sim.apply_rz(psi, q, theta)
        elif gate == 2:
            r = int((q + 1 + rng.integers(0, 4)) % 5)
            sim.apply_cnot(psi, q, r)
        else:
            qs = tuple(sorted(rng.choice(5, size=3, replace=False)))
            sim.apply_rzk_ladder(psi, qs, theta)
    assert psi.norm_error() < 1e-12


def test_diagonal_phase_matches_per_term_gates():
    rng = np.random.default_rng(34)
    n = 4
    energies = rng.normal(size=1 << n)
    gamma = 0.77
    a = random_state(rng, n)
    before = a.amp.copy()
    sim.apply_diagonal_phase(a, energies, gamma)
    assert np.abs(a.amp - np.exp(-1j * (gamma / 2) * energies) * before).max() < 1e-12


def test_expectation_diagonal():
    psi = sim.basis_state(2, 3)
    energies = np.array([5.0, 1.0, -2.0, 4.0])
    assert sim.expectation_diagonal(psi, energies) == 4.0
    plus = sim.init_plus(2)
    assert abs(sim.expectation_diagonal(plus, energies) - 2.0) < 1e-12


def test_probabilities_sum_to_one():
    rng = np.random.default_rng(35)
    psi = random_state(rng, 4)
    p = psi.probabilities()
    assert abs(p.sum() - 1.0) < 1e-12
    assert (p >= 0).all()


def test_sample_deterministic_and_consistent():
    rng = np.random.default_rng(36)
    psi = random_state(rng, 3)
    h1 = sim.sample(psi, 5000, 123)
    h2 = sim.sample(psi, 5000, 123)
    assert h1 == h2
    assert sum(h1.values()) == 5000
    h3 = sim.sample(psi, 5000, 124)
    assert h3 != h1  # different seed, different draw (overwhelmingly)


def test_sample_never_draws_zero_amplitude():
    psi = sim.basis_state(3, 6)
    hist = sim.sample(psi, 1000, 0)
    assert hist == {6: 1000}
