import numpy as np
import pytest

from qaoaforge.errors import SizeCapError
from qaoaforge.ising import (
    SpinHamiltonian,
    assignment_of_basis_index,
    basis_index_of_assignment,
    diagonalize,
    evaluate_spin,
    pubo_to_spin,
    qubo_to_spin,
    scale,
    scaling_factor,
    spin_vector,
    to_spin,
)
from qaoaforge.model import (
    build_knapsack,
    build_pubo,
    build_qubo,
    evaluate_pubo,
    evaluate_qubo,
)


def test_spin_hamiltonian_validation():
    with pytest.raises(ValueError):
        SpinHamiltonian(2, {(1, 0): 1.0})  # keys must be strictly increasing
    with pytest.raises(ValueError):
        SpinHamiltonian(2, {(0, 0): 1.0})
    with pytest.raises(ValueError):
        SpinHamiltonian(2, {(): 1.0})
    h = SpinHamiltonian(3, {(0,): 1.0, (1, 2): -2.0})
    assert h.max_degree == 2
    assert h.has_linear_term
    assert not h.all_even_degrees()
    assert SpinHamiltonian(3, {(1, 2): -2.0}).all_even_degrees()


def test_qubo_to_spin_knapsack_frozen():
    h = qubo_to_spin(build_knapsack((4, 4), (4, 3), 5, p1=1.0, p2=1.0))
    assert h.terms == {(0,): -6.0, (1,): -5.0, (0, 1): 6.0}
    assert h.constant == 3.0
    assert scaling_factor(h) == 6.0


def test_qubo_round_trip_all_assignments():
    rng = np.random.default_rng(21)
    for _ in range(25):
        n = int(rng.integers(1, 7))
        p = build_qubo(rng.normal(size=(n, n)), rng.normal(size=n), offset=float(rng.normal()))
        h = qubo_to_spin(p)
        for m in range(1 << n):
            bits = tuple((m >> i) & 1 for i in range(n))
            s = tuple(2 * b - 1 for b in bits)
            assert abs(evaluate_spin(h, s) + h.constant - evaluate_qubo(p, bits)) < 1e-10


def test_pubo_expand_single_cubic_term():
    h = pubo_to_spin(build_pubo(3, [((0, 1, 2), 8.0)]), method="expand")
    # x0 x1 x2 = prod (1+s_i)/2: every subset picks up 8 / 2^3
    want = {(0,): 1.0, (1,): 1.0, (2,): 1.0, (0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0, (0, 1, 2): 1.0}
    assert h.terms == want
    assert h.constant == 1.0


def test_pubo_round_trip_both_methods():
    rng = np.random.default_rng(22)
    for method in ("expand", "closed_form"):
        for _ in range(10):
            n = int(rng.integers(2, 7))
            items = [
                (tuple(sorted(rng.choice(n, size=int(rng.integers(1, min(4, n) + 1)), replace=False))),
                 float(rng.normal()))
                for _ in range(6)
            ]
            p = build_pubo(n, items, offset=0.75)
            if not p.terms:
                continue
            h = pubo_to_spin(p, method=method)
            for m in range(1 << n):
                bits = tuple((m >> i) & 1 for i in range(n))
                s = tuple(2 * b - 1 for b in bits)
                assert abs(evaluate_spin(h, s) + h.constant - evaluate_pubo(p, bits)) < 1e-10


def test_pubo_methods_agree():
    rng = np.random.default_rng(23)
    for _ in range(15):
        n = int(rng.integers(2, 8))
        items = [
            (tuple(sorted(rng.choice(n, size=int(rng.integers(1, min(4, n) + 1)), replace=False))),
             float(rng.normal()))
            for _ in range(2 * n)
        ]
        p = build_pubo(n, items)
        ha = pubo_to_spin(p, method="expand")
        hb = pubo_to_spin(p, method="closed_form")
        assert abs(ha.constant - hb.constant) < 1e-12
        for key in set(ha.terms) | set(hb.terms):
            assert abs(ha.terms.get(key, 0.0) - hb.terms.get(key, 0.0)) < 1e-12


def test_to_spin_dispatch():
    q = build_qubo(np.eye(2), np.zeros(2))
    p = build_pubo(2, [((0, 1), 1.0)])
    assert to_spin(q).n == 2
    hp = to_spin(p)
    assert hp.terms == {(0,): 0.25, (1,): 0.25, (0, 1): 0.25}
    assert hp.constant == 0.25


def test_scaling():
    h = SpinHamiltonian(2, {(0,): -3.0, (0, 1): 1.5}, constant=7.0)
    assert scaling_factor(h) == 3.0
    hs = scale(h)
    assert hs.terms == {(0,): -1.0, (0, 1): 0.5}
    assert hs.constant == 7.0  # constant stays in original units
    with pytest.raises(ValueError):
        scaling_factor(SpinHamiltonian(2, {}))


def test_evaluate_spin_validates_entries():
    h = SpinHamiltonian(2, {(0, 1): 1.0})
    assert evaluate_spin(h, (1, -1)) == -1.0
    with pytest.raises(ValueError):
        evaluate_spin(h, (1, 0))


def test_diagonalize_frozen():
    assert diagonalize(SpinHamiltonian(2, {(0,): 1.0})).tolist() == [1.0, -1.0, 1.0, -1.0]
    assert diagonalize(SpinHamiltonian(2, {(0, 1): 1.0})).tolist() == [1.0, -1.0, -1.0, 1.0]
    d = diagonalize(SpinHamiltonian(3, {(0, 2): 2.0, (1,): -1.0}))
    for z in range(8):
        s = spin_vector(z, 3)
        assert d[z] == 2.0 * s[0] * s[2] - 1.0 * s[1]


def test_diagonalize_cap():
    with pytest.raises(SizeCapError):
        diagonalize(SpinHamiltonian(25, {(0,): 1.0}))


def test_basis_index_conventions():
    # spin +1 is bit 0, so assignment bits are complemented
    assert spin_vector(0, 2) == (1, 1)
    assert spin_vector(1, 2) == (-1, 1)
    assert assignment_of_basis_index(0, 2) == (1, 1)
    assert assignment_of_basis_index(1, 2) == (0, 1)
    assert basis_index_of_assignment((0, 1, 0, 1)) == 5
    for z in range(16):
        assert basis_index_of_assignment(assignment_of_basis_index(z, 4)) == z


def test_diagonal_matches_spin_convention():
    rng = np.random.default_rng(24)
    p = build_qubo(rng.normal(size=(4, 4)), rng.normal(size=4))
    h = qubo_to_spin(p)
    d = diagonalize(h)
    for z in range(16):
        bits = assignment_of_basis_index(z, 4)
        assert abs(d[z] + h.constant - evaluate_qubo(p, bits)) < 1e-10


def test_serialization_round_trip():
    h = SpinHamiltonian(3, {(0,): 1.0, (0, 1, 2): -0.25}, constant=2.0)
    h2 = SpinHamiltonian.from_dict(h.to_dict())
    assert h2.n == h.n and h2.terms == h.terms and h2.constant == h.constant
