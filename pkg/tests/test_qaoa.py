import math

import numpy as np
import pytest

from qaoaforge import qaoa
from qaoaforge import simulator as sim
from qaoaforge.ising import SpinHamiltonian, qubo_to_spin
from qaoaforge.model import build_maxcut, build_qubo


def single_z():
    return SpinHamiltonian(1, {(0,): 1.0})


def random_hamiltonian(rng, n):
    return qubo_to_spin(build_qubo(rng.normal(size=(n, n)), rng.normal(size=n)))


def test_params_shapes():
    params = qaoa.QaoaParams(beta=[0.1, 0.2], gamma=[0.3, 0.4])
    assert params.p == 2
    assert np.allclose(params.as_vector(), [0.1, 0.2, 0.3, 0.4])
    back = qaoa.QaoaParams.from_vector(params.as_vector())
    assert np.allclose(back.beta, params.beta)
    with pytest.raises(ValueError):
        qaoa.QaoaParams(beta=[0.1], gamma=[0.2, 0.3])
    with pytest.raises(ValueError):
        qaoa.QaoaParams.from_vector([1.0, 2.0, 3.0])


def test_build_circuit_scaling():
    h = SpinHamiltonian(2, {(0,): -4.0, (0, 1): 2.0}, constant=1.0)
    spec = qaoa.build_circuit(h)
    assert spec.k_scale == 4.0
    assert spec.hamiltonian.terms == {(0,): -1.0, (0, 1): 0.5}
    raw = qaoa.build_circuit(h, scaled=False)
    assert raw.k_scale == 1.0
    with pytest.raises(ValueError):
        qaoa.build_circuit(SpinHamiltonian(2, {}))
    with pytest.raises(ValueError):
        qaoa.build_circuit(h, layers=0)


def test_single_qubit_energy_oracle():
    # H = sigma_z on one qubit, p=1: E(beta, gamma) = sin(beta) sin(gamma)
    spec = qaoa.build_circuit(single_z())
    for b in np.linspace(-3.0, 3.0, 9):
        for g in np.linspace(-3.0, 3.0, 9):
            e = qaoa.energy(spec, qaoa.QaoaParams([b], [g]))
            assert abs(e - math.sin(b) * math.sin(g)) < 1e-12


def test_layer_order_changes_energy():
    # phases before mixing give sin.sin; mixing first leaves |+> invariant
    forward = qaoa.build_circuit(single_z())
    reverse = qaoa.build_circuit(single_z(), layer_order=qaoa.LayerOrder.UI_THEN_UF)
    params = qaoa.QaoaParams([math.pi / 2], [math.pi / 2])
    assert abs(qaoa.energy(forward, params) - 1.0) < 1e-12
    assert abs(qaoa.energy(reverse, params)) < 1e-12


def test_run_matches_manual_layering():
    rng = np.random.default_rng(41)
    h = random_hamiltonian(rng, 3)
    spec = qaoa.build_circuit(h, layers=2)
    params = qaoa.QaoaParams(beta=[0.3, -0.8], gamma=[1.1, 0.4])

    psi = sim.init_plus(3)
    for k in range(2):
        sim.apply_diagonal_phase(psi, spec.energies, float(params.gamma[k]))
        for q in range(3):
            sim.apply_rx(psi, q, float(params.beta[k]))
    got = qaoa.run(spec, params)
    assert np.abs(got.amp - psi.amp).max() < 1e-12


def test_energy_breakdown_units():
    rng = np.random.default_rng(42)
    h = random_hamiltonian(rng, 3)
    spec = qaoa.build_circuit(h)
    params = qaoa.QaoaParams([0.5], [0.9])
    parts = qaoa.energy_breakdown(spec, params)
    assert abs(parts["unscaled"] - parts["scaled"] * spec.k_scale) < 1e-12
    assert abs(parts["objective"] - parts["unscaled"] - h.constant) < 1e-12


def test_scaled_and_raw_circuits_agree_after_angle_change():
    rng = np.random.default_rng(43)
    h = random_hamiltonian(rng, 4)
    scaled = qaoa.build_circuit(h, scaled=True)
    raw = qaoa.build_circuit(h, scaled=False)
    k = scaled.k_scale
    for _ in range(5):
        b, g = rng.uniform(-math.pi, math.pi, 2)
        e1 = qaoa.energy(scaled, qaoa.QaoaParams([b], [g])) * k
        e2 = qaoa.energy(raw, qaoa.QaoaParams([b], [g / k]))
        assert abs(e1 - e2) < 1e-12


def test_gate_execution_matches_fast_path():
    rng = np.random.default_rng(44)
    h = random_hamiltonian(rng, 4)
    fast = qaoa.build_circuit(h, layers=2)
    gates = qaoa.build_circuit(h, layers=2, execution=qaoa.Execution.GATE_DECOMPOSED)
    params = qaoa.QaoaParams(beta=[0.4, 1.3], gamma=[-0.7, 2.1])
    a = qaoa.run(fast, params).amp
    b = qaoa.run(gates, params).amp
    assert abs(1.0 - abs(np.vdot(a, b))) < 1e-12
    assert abs(qaoa.energy(fast, params) - qaoa.energy(gates, params)) < 1e-12


def test_term_signs():
    h = SpinHamiltonian(3, {(0,): 1.0, (1, 2): 2.0})
    spec = qaoa.build_circuit(h)
    signs = spec.term_signs()
    assert signs.shape == (2, 8)
    for z in range(8):
        assert signs[0, z] == (1.0 if (z & 1) == 0 else -1.0)
        parity = (bin(z & 0b110).count("1")) % 2
        assert signs[1, z] == (1.0 - 2.0 * parity)


def test_shot_energy_converges():
    rng = np.random.default_rng(45)
    h = random_hamiltonian(rng, 3)
    spec = qaoa.build_circuit(h)
    params = qaoa.QaoaParams([0.8], [0.5])
    exact = qaoa.energy(spec, params)
    est = qaoa.shot_energy(spec, params, 200000, 7)
    assert abs(est - exact) < 0.02


def test_gradient_fd_matches_shift():
    rng = np.random.default_rng(46)
    for _ in range(5):
        h = random_hamiltonian(rng, int(rng.integers(2, 5)))
        spec = qaoa.build_circuit(h)
        p = int(rng.integers(1, 3))
        params = qaoa.QaoaParams(rng.uniform(-2, 2, p), rng.uniform(-2, 2, p))
        g_fd = qaoa.parameter_shift_gradient(spec, params, method="fd")
        g_sh = qaoa.parameter_shift_gradient(spec, params, method="shift")
        assert g_fd.shape == (2 * p,)
        assert np.abs(g_fd - g_sh).max() < 1e-7


def test_gradient_matches_energy_slope():
    spec = qaoa.build_circuit(single_z())
    params = qaoa.QaoaParams([0.6], [1.1])
    g = qaoa.parameter_shift_gradient(spec, params, method="shift")
    # E = sin(b) sin(g): dE/db = cos(b) sin(g), dE/dg = sin(b) cos(g)
    assert abs(g[0] - math.cos(0.6) * math.sin(1.1)) < 1e-10
    assert abs(g[1] - math.sin(0.6) * math.cos(1.1)) < 1e-10


def test_landscape_grid_shape_and_values():
    h = qubo_to_spin(build_maxcut(3, [(0, 1), (1, 2)]))
    spec = qaoa.build_circuit(h)
    grid = qaoa.landscape_scan(spec, 2)
    assert grid.values.shape == (2, 2)
    assert grid.beta_axis.tolist() == [-math.pi, math.pi]
    grid5 = qaoa.landscape_scan(spec, 5, beta_range=(0.0, 1.0), gamma_range=(-1.0, 1.0))
    for i, b in enumerate(grid5.beta_axis):
        for j, g in enumerate(grid5.gamma_axis):
            assert grid5.values[i, j] == qaoa.energy(spec, qaoa.QaoaParams([b], [g]))
    with pytest.raises(ValueError):
        qaoa.landscape_scan(spec, 1)
    with pytest.raises(ValueError):
        qaoa.landscape_scan(qaoa.build_circuit(h, layers=2), 3)


def test_landscape_csv_format():
    h = qubo_to_spin(build_maxcut(2, [(0, 1)]))
    grid = qaoa.landscape_scan(qaoa.build_circuit(h), 2)
    lines = grid.to_csv().strip().split("\n")
    assert lines[0].startswith("beta\\gamma,")
    assert len(lines) == 3
    assert len(lines[1].split(",")) == 3


def test_restricted_domain():
    even = qaoa.build_circuit(SpinHamiltonian(2, {(0, 1): 1.0}))
    dom = qaoa.restricted_domain(even)
    assert dom.fully_restricted
    assert dom.beta_range == (0.0, math.pi) and dom.gamma_range == (0.0, math.pi)
    assert dom.volume_reduction(3) == 2 ** 6

    odd = qaoa.build_circuit(SpinHamiltonian(2, {(0,): 1.0, (0, 1): 1.0}))
    dom2 = qaoa.restricted_domain(odd)
    assert not dom2.fully_restricted
    assert dom2.gamma_range == (-math.pi, math.pi)
    assert dom2.volume_reduction(3) == 2 ** 3
