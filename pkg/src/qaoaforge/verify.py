"""Executable checks of the structural claims behind the circuit construction.

Each check builds its own random instances from a seed, compares two
independent computation routes (bit-kernel vs dense matrix, expansion vs
closed form, exhaustive enumeration vs spin diagonal), and reports a
CheckResult.  The CLI verify command groups them into suites; the
acceptance tests call them directly with pinned counts and tolerances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import dense, qaoa
from . import simulator as sim
from .ising import (
    SpinHamiltonian,
    diagonalize,
    evaluate_spin,
    pubo_to_spin,
    qubo_to_spin,
    spin_vector,
)
from .model import (
    ConstraintKind,
    ConstraintSpec,
    PuboProblem,
    QuboProblem,
    apply_penalty,
    brute_force_solve,
    build_pubo,
    build_qubo,
    evaluate_pubo,
    evaluate_qubo,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, worst: float, tol: float, extra: str = "") -> CheckResult:
    msg = f"max deviation {worst:.3e} (tolerance {tol:.1e})"
    if extra:
        msg += "; " + extra
    return CheckResult(name, worst <= tol, msg)


# ---------------------------------------------------------------- instances

def random_qubo(rng, n: int) -> QuboProblem:
    return build_qubo(rng.normal(0.0, 1.0, (n, n)), rng.normal(0.0, 1.0, n))


def random_pubo(rng, n: int, dmax: int = 4, n_terms: int | None = None) -> PuboProblem:
    if n_terms is None:
        n_terms = max(2, 2 * n)
    items = []
    for _ in range(n_terms):
        k = int(rng.integers(1, min(dmax, n) + 1))
        idx = tuple(sorted(rng.choice(n, size=k, replace=False)))
        items.append((idx, float(rng.normal())))
    p = build_pubo(n, items)
    if not p.terms:  # exact cancellation is astronomically unlikely, but stay total
        p = build_pubo(n, [((0,), 1.0)])
    return p


def random_spin_hamiltonian(rng, n: int, degrees) -> SpinHamiltonian:
    """Random H built only from terms of the listed degrees (all present)."""
    terms = {}
    for d in degrees:
        count = max(1, n // 2)
        for _ in range(count):
            idx = tuple(sorted(rng.choice(n, size=d, replace=False)))
            terms[idx] = terms.get(idx, 0.0) + float(rng.normal())
    for d in degrees:
        if not any(len(k) == d and v != 0.0 for k, v in terms.items()):
            idx = tuple(range(d))
            terms[idx] = 1.0
    return SpinHamiltonian(n=n, terms={k: v for k, v in terms.items() if v != 0.0})


def random_spin_mixed(rng, n: int) -> SpinHamiltonian:
    """Spin form of a random QUBO or PUBO, whichever the coin says."""
    if rng.random() < 0.5:
        return qubo_to_spin(random_qubo(rng, n))
    return pubo_to_spin(random_pubo(rng, n))


# ------------------------------------------------------------------- gates

def check_rzz_diagonal(trials: int = 100, tol: float = 1e-12, seed: int = 0) -> CheckResult:
    """Kernel matrix of the two-qubit ZZ rotation vs its diagonal form."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        u = dense.operator_of(lambda psi: sim.apply_rzz(psi, 0, 1, theta), 2)
        em, ep = np.exp(-0.5j * theta), np.exp(0.5j * theta)
        expected = np.diag([em, ep, ep, em])
        worst = max(worst, float(np.abs(u - expected).max()))
    return _result("rzz_diagonal_form", worst, tol)


def check_rzz_swap(trials: int = 100, tol: float = 1e-12, seed: int = 0) -> CheckResult:
    """The ZZ rotation is invariant under swapping its two qubits."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        u01 = dense.operator_of(lambda psi: sim.apply_rzz(psi, 0, 1, theta), 3)
        u10 = dense.operator_of(lambda psi: sim.apply_rzz(psi, 1, 0, theta), 3)
        worst = max(worst, float(np.abs(u01 - u10).max()))
    return _result("rzz_swap_invariance", worst, tol)


def check_rzz_cnot_composite(trials: int = 20, tol: float = 1e-12, seed: int = 0) -> CheckResult:
    """ZZ rotation equals CNOT, R_z on the target, CNOT."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        i, j = rng.choice(3, size=2, replace=False)

        def composite(psi, i=int(i), j=int(j), theta=theta):
            sim.apply_cnot(psi, i, j)
            sim.apply_rz(psi, j, theta)
            sim.apply_cnot(psi, i, j)

        ua = dense.operator_of(composite, 3)
        ub = dense.operator_of(lambda psi: sim.apply_rzz(psi, int(i), int(j), theta), 3)
        worst = max(worst, float(np.abs(ua - ub).max()))
    return _result("rzz_cnot_composite", worst, tol)


def check_rzk_ladder_vs_dense(kmax: int = 5, trials: int = 20, tol: float = 1e-12, seed: int = 0) -> CheckResult:
    """CNOT-ladder construction vs dense exp(-i(theta/2) Z tensor power).

    The dense side is built from Kronecker products and a Hermitian matrix
    exponential, sharing nothing with the bit kernels.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(1, kmax + 1):
        zk = dense.kron_factors([dense.SIGMA_Z] * k)
        for _ in range(trials):
            theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
            u_ladder = dense.operator_of(
                lambda psi: sim.apply_rzk_ladder(psi, tuple(range(k)), theta), k
            )
            u_dense = dense.expm_hermitian(zk, theta / 2.0)
            worst = max(worst, float(np.abs(u_ladder - u_dense).max()))
    # scattered qubits inside a larger register
    n = min(kmax + 2, dense.DENSE_CAP)
    for _ in range(trials):
        k = int(rng.integers(2, kmax + 1))
        qs = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        u_ladder = dense.operator_of(lambda psi: sim.apply_rzk_ladder(psi, qs, theta), n)
        u_dense = dense.expm_hermitian(dense.z_product_matrix(qs, n), theta / 2.0)
        worst = max(worst, float(np.abs(u_ladder - u_dense).max()))
    return _result("rzk_ladder_vs_dense", worst, tol)


def check_single_qubit_gates(trials: int = 20, tol: float = 1e-12, seed: int = 0) -> CheckResult:
    """R_x and R_z kernels vs embedded 2x2 matrices on random states."""
    rng = np.random.default_rng(seed)
    n = 3
    worst = 0.0
    for _ in range(trials):
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        q = int(rng.integers(0, n))
        amp = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        amp /= np.linalg.norm(amp)
        for kernel, mat in ((sim.apply_rx, dense.rx_matrix), (sim.apply_rz, dense.rz_matrix)):
            psi = sim.StateVector(n, amp.copy())
            kernel(psi, q, theta)
            want = dense.embed_single(mat(theta), q, n) @ amp
            worst = max(worst, float(np.abs(psi.amp - want).max()))
    return _result("single_qubit_gates_vs_dense", worst, tol)


def check_cnot_projector_form(tol: float = 1e-12) -> CheckResult:
    """CNOT kernel vs |0><0| (x) I + |1><1| (x) X built densely."""
    p0 = np.diag([1.0, 0.0]).astype(np.complex128)
    p1 = np.diag([0.0, 1.0]).astype(np.complex128)
    worst = 0.0
    n = 3
    for control in range(n):
        for target in range(n):
            if control == target:
                continue
            want = (
                dense.embed_single(p0, control, n)
                + dense.embed_single(p1, control, n) @ dense.embed_single(dense.SIGMA_X, target, n)
            )
            got = dense.operator_of(lambda psi: sim.apply_cnot(psi, control, target), n)
            worst = max(worst, float(np.abs(got - want).max()))
    return _result("cnot_projector_form", worst, tol)


def check_gate_inverses(trials: int = 20, tol: float = 1e-12, seed: int = 0) -> CheckResult:
    """Running any rotation at -theta undoes the rotation at +theta."""
    rng = np.random.default_rng(seed)
    n = 4
    worst = 0.0
    for _ in range(trials):
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        amp = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        amp /= np.linalg.norm(amp)
        psi = sim.StateVector(n, amp.copy())
        sim.apply_rx(psi, 1, theta)
        sim.apply_rx(psi, 1, -theta)
        sim.apply_rz(psi, 2, theta)
        sim.apply_rz(psi, 2, -theta)
        sim.apply_rzz(psi, 0, 3, theta)
        sim.apply_rzz(psi, 0, 3, -theta)
        sim.apply_rzk(psi, (0, 1, 3), theta)
        sim.apply_rzk(psi, (0, 1, 3), -theta)
        sim.apply_rzk_ladder(psi, (1, 2, 3), theta)
        sim.apply_rzk_ladder(psi, (1, 2, 3), -theta)
        worst = max(worst, float(np.abs(psi.amp - amp).max()), psi.norm_error())
    return _result("gate_inverses", worst, tol)


def check_mixer_ground_state(tol: float = 1e-12) -> CheckResult:
    """-sum sigma_x has ground energy -n with |+...+> as ground state."""
    worst = 0.0
    for n in (2, 3, 4):
        h = dense.mixer_matrix(n)
        evals = np.linalg.eigvalsh(h)
        worst = max(worst, abs(float(evals[0]) + n))
        plus = sim.init_plus(n).amp
        worst = max(worst, float(np.abs(h @ plus + n * plus).max()))
        worst = max(worst, abs(float(np.real(plus.conj() @ h @ plus)) + n))
    return _result("mixer_ground_state", worst, tol)


# ---------------------------------------------------------------- symmetry

def _random_params(rng, p: int) -> qaoa.QaoaParams:
    return qaoa.QaoaParams(
        beta=rng.uniform(-math.pi, math.pi, p), gamma=rng.uniform(-math.pi, math.pi, p)
    )


def check_point_symmetry(
    instances: int = 50, nmax: int = 6, pmax: int = 3, points: int = 20,
    tol: float = 1e-10, seed: int = 0,
) -> CheckResult:
    """Energy is unchanged under flipping the sign of all angles."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(2, nmax + 1))
        spec = qaoa.build_circuit(random_spin_mixed(rng, n))
        p = int(rng.integers(1, pmax + 1))
        for _ in range(points):
            params = _random_params(rng, p)
            flipped = qaoa.QaoaParams(beta=-params.beta, gamma=-params.gamma)
            worst = max(worst, abs(qaoa.energy(spec, params) - qaoa.energy(spec, flipped)))
    return _result("point_symmetry", worst, tol)


def check_beta_periodicity_even(
    instances: int = 50, nmax: int = 6, pmax: int = 3, points: int = 20,
    tol: float = 1e-10, seed: int = 0,
) -> CheckResult:
    """With only even-degree terms, shifting any one beta by pi is invisible."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(2, nmax + 1))
        degrees = [2] if n < 4 else ([2, 4] if rng.random() < 0.5 else [2])
        spec = qaoa.build_circuit(random_spin_hamiltonian(rng, n, degrees))
        p = int(rng.integers(1, pmax + 1))
        for _ in range(points):
            params = _random_params(rng, p)
            e0 = qaoa.energy(spec, params)
            for i in range(p):
                beta = params.beta.copy()
                beta[i] += math.pi
                worst = max(worst, abs(qaoa.energy(spec, qaoa.QaoaParams(beta, params.gamma)) - e0))
    return _result("beta_pi_periodicity_even", worst, tol)


def check_beta_shift_detects_odd(
    instances: int = 50, nmax: int = 6, search_points: int = 100,
    threshold: float = 1e-3, min_found: int = 45, seed: int = 0,
) -> CheckResult:
    """With an odd-degree term, a pi shift in beta is observable.

    For each instance a random search must find a parameter point where the
    shifted energy differs by more than the threshold; the even-degree
    hypothesis of the periodicity claim is therefore necessary.
    """
    rng = np.random.default_rng(seed)
    found = 0
    for _ in range(instances):
        n = int(rng.integers(2, nmax + 1))
        degrees = [1, 2] if n < 3 or rng.random() < 0.5 else [2, 3]
        spec = qaoa.build_circuit(random_spin_hamiltonian(rng, n, degrees))
        hit = False
        for _ in range(search_points):
            params = _random_params(rng, 1)
            beta = params.beta.copy()
            beta[0] += math.pi
            diff = abs(qaoa.energy(spec, qaoa.QaoaParams(beta, params.gamma)) - qaoa.energy(spec, params))
            if diff > threshold:
                hit = True
                break
        found += hit
    return CheckResult(
        "beta_shift_detects_odd_terms",
        found >= min_found,
        f"violation found for {found}/{instances} instances (need >= {min_found})",
    )


def check_beta_2pi_periodicity(
    instances: int = 20, nmax: int = 6, points: int = 10, tol: float = 1e-10, seed: int = 0
) -> CheckResult:
    """Shifting any beta by 2 pi never changes the energy."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(2, nmax + 1))
        spec = qaoa.build_circuit(random_spin_mixed(rng, n))
        p = int(rng.integers(1, 3 + 1))
        for _ in range(points):
            params = _random_params(rng, p)
            e0 = qaoa.energy(spec, params)
            for i in range(p):
                beta = params.beta.copy()
                beta[i] += 2 * math.pi
                worst = max(worst, abs(qaoa.energy(spec, qaoa.QaoaParams(beta, params.gamma)) - e0))
    return _result("beta_2pi_periodicity", worst, tol)


def check_restricted_box_holds_minimum(
    instances: int = 6, resolution: int = 33, tol: float = 1e-9, seed: int = 0
) -> CheckResult:
    """On a shared p=1 grid, the restricted box attains the full-grid minimum.

    The grid spans [-pi, pi]^2 with symmetric nodes so the restricted boxes
    ([0,pi] x [0,pi] or [0,pi] x [-pi,pi]) are exact node subsets.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(2, 5))
        spec = qaoa.build_circuit(random_spin_mixed(rng, n))
        grid = qaoa.landscape_scan(spec, resolution)
        domain = qaoa.restricted_domain(spec)
        b_in = grid.beta_axis >= -1e-12
        if domain.fully_restricted:
            g_in = grid.gamma_axis >= -1e-12
        else:
            g_in = np.ones_like(grid.gamma_axis, dtype=bool)
        sub = grid.values[np.ix_(b_in, g_in)]
        worst = max(worst, float(sub.min() - grid.values.min()))
    return _result("restricted_box_holds_minimum", worst, tol)


# ----------------------------------------------------------------- trotter

def check_trotter_convergence(
    hams: int = 5, ps=(4, 8, 16, 32, 64), ratio_window=(1.5, 2.5), ratio_from: int = 16,
    steps_exact: int = 4096, seed: int = 0,
) -> CheckResult:
    """Split-step error strictly decreases in p with a first-order ratio."""
    rng = np.random.default_rng(seed)
    ok = True
    details = []
    for _ in range(hams):
        h = qubo_to_spin(random_qubo(rng, 3))
        errs = [dense.trotter_compare(h, p, steps_exact=steps_exact) for p in ps]
        decreasing = all(errs[i + 1] < errs[i] for i in range(len(errs) - 1))
        ratios = []
        for i in range(len(ps) - 1):
            if ps[i] >= ratio_from:
                ratios.append(errs[i] / errs[i + 1])
        in_window = all(ratio_window[0] <= r <= ratio_window[1] for r in ratios)
        ok = ok and decreasing and in_window
        details.append(
            "errs=[" + ", ".join(f"{e:.2e}" for e in errs) + "], ratios=["
            + ", ".join(f"{r:.2f}" for r in ratios) + "]"
        )
    return CheckResult("trotter_convergence", ok, "; ".join(details))


def check_split_exact_when_commuting(tol: float = 1e-12, seed: int = 0) -> CheckResult:
    """One split slice is exact when the two generators commute.

    Two diagonal Hamiltonians commute, so e^{-i dt (A+B)} must equal
    e^{-i dt A} e^{-i dt B} to rounding for any slice length.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        a = np.diag(rng.normal(size=8)).astype(np.complex128)
        b = np.diag(rng.normal(size=8)).astype(np.complex128)
        for dt in (1.0, 0.25, 0.01):
            lhs = dense.expm_hermitian(a + b, dt)
            rhs = dense.expm_hermitian(a, dt) @ dense.expm_hermitian(b, dt)
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    return _result("split_exact_when_commuting", worst, tol)


# ------------------------------------------------------------------ oracle

def _roundtrip_worst(problem, h: SpinHamiltonian) -> float:
    """Max |binary cost - (spin diagonal + constant)| over all assignments.

    Basis state z encodes the assignment with complemented bits, so the
    cost table in assignment order is diag[mask ^ m] + constant.
    """
    n = problem.n
    table = brute_force_solve(problem, full_table=True).table
    diag = diagonalize(h)
    mask = (1 << n) - 1
    spin_costs = diag[np.arange(1 << n) ^ mask] + h.constant
    return float(np.abs(table - spin_costs).max())


def check_qubo_roundtrip(instances: int = 200, nmax: int = 8, tol: float = 1e-9, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(1, nmax + 1))
        p = random_qubo(rng, n)
        worst = max(worst, _roundtrip_worst(p, qubo_to_spin(p)))
    return _result("qubo_spin_roundtrip", worst, tol)


def check_pubo_roundtrip(instances: int = 100, nmax: int = 8, dmax: int = 4, tol: float = 1e-9, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(2, nmax + 1))
        p = random_pubo(rng, n, dmax=dmax)
        worst = max(worst, _roundtrip_worst(p, pubo_to_spin(p, method="expand")))
        worst = max(worst, _roundtrip_worst(p, pubo_to_spin(p, method="closed_form")))
    return _result("pubo_spin_roundtrip", worst, tol)


def check_pubo_conversion_paths(instances: int = 50, nmax: int = 8, tol: float = 1e-12, seed: int = 0) -> CheckResult:
    """Expansion route vs closed-form route produce the same Hamiltonian."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    same_keys = True
    for _ in range(instances):
        p = random_pubo(rng, int(rng.integers(2, nmax + 1)))
        ha = pubo_to_spin(p, method="expand")
        hb = pubo_to_spin(p, method="closed_form")
        keys = set(ha.terms) | set(hb.terms)
        for k in keys:
            worst = max(worst, abs(ha.terms.get(k, 0.0) - hb.terms.get(k, 0.0)))
        worst = max(worst, abs(ha.constant - hb.constant))
    return _result("pubo_conversion_paths", worst, tol, "keys compared on union" if same_keys else "")


def check_diagonal_matches_brute(instances: int = 20, nmax: int = 8, tol: float = 1e-9, seed: int = 0) -> CheckResult:
    """Minimum of the spin diagonal equals the enumerated optimum cost."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(2, nmax + 1))
        p = random_qubo(rng, n)
        res = brute_force_solve(p)
        h = qubo_to_spin(p)
        diag = diagonalize(h)
        worst = max(worst, abs(float(diag.min()) + h.constant - res.best_cost))
    return _result("diagonal_min_matches_brute", worst, tol)


def check_penalties_exact(seed: int = 0) -> CheckResult:
    """Penalties with exact encodings vanish precisely on feasible points."""
    failures = []

    def base(n):
        return build_qubo(np.zeros((n, n)), np.zeros(n))

    def penalty_values(spec, n):
        pen = apply_penalty(base(n), spec)
        return pen

    # pairwise and set penalties: enumerate every assignment
    cases = [
        (ConstraintSpec(ConstraintKind.AT_MOST_ONE_PAIR, (0, 1)), 3,
         lambda bits: bits[0] + bits[1] <= 1),
        (ConstraintSpec(ConstraintKind.AT_LEAST_ONE_PAIR, (0, 2)), 3,
         lambda bits: bits[0] + bits[2] >= 1),
        (ConstraintSpec(ConstraintKind.EQUAL_PAIR, (1, 2)), 3,
         lambda bits: bits[1] == bits[2]),
        (ConstraintSpec(ConstraintKind.AT_MOST_ONE_SET, (0, 1, 2, 3)), 4,
         lambda bits: sum(bits[:4]) <= 1),
        (ConstraintSpec(ConstraintKind.EXACT_SUM, (0, 1, 2), bound=2), 4,
         lambda bits: bits[0] + bits[1] + bits[2] == 2),
    ]
    for spec, n, feasible in cases:
        pen = penalty_values(spec, n)
        for m in range(1 << n):
            bits = tuple((m >> i) & 1 for i in range(n))
            v = evaluate_qubo(pen, bits)
            if feasible(bits) != (abs(v) < 1e-12) or v < -1e-12:
                failures.append(f"{spec.kind.value} at {bits}: {v}")

    # slack inequality: zero attainable over slacks iff the constraint holds
    weights, bound = (3.0, 1.0, 2.0), 4
    spec = ConstraintSpec(ConstraintKind.SLACK_INEQUALITY, (0, 1, 2), weights=weights, bound=bound)
    pen = apply_penalty(base(3), spec)
    m_slack = pen.n - 3
    for m in range(1 << 3):
        bits = tuple((m >> i) & 1 for i in range(3))
        feasible = sum(w * b for w, b in zip(weights, bits)) <= bound
        best = min(
            evaluate_qubo(pen, bits + tuple((s >> j) & 1 for j in range(m_slack)))
            for s in range(1 << m_slack)
        )
        if feasible != (abs(best) < 1e-12) or best < -1e-12:
            failures.append(f"slack_inequality at {bits}: min over slacks {best}")

    return CheckResult(
        "penalties_exact_iff_feasible",
        not failures,
        "all exact penalty kinds vanish exactly on feasible points" if not failures else "; ".join(failures[:4]),
    )


def check_unbalanced_inexact() -> CheckResult:
    """The slack-free inequality penalty is biased: a documented counterexample.

    With weights (1,), bound 1, p1=p2=1, the empty assignment satisfies the
    constraint but the penalty evaluates to p1(0-1) + p2(0-1)^2 = 0 only if
    p1 == p2; with the defaults it is nonzero, so the encoding is inexact.
    """
    spec = ConstraintSpec(
        ConstraintKind.UNBALANCED_INEQUALITY, (0,), weights=(1.0,), bound=1.0, p1=0.96, p2=0.0371
    )
    pen = apply_penalty(build_qubo(np.zeros((1, 1)), np.zeros(1)), spec)
    v = evaluate_qubo(pen, (0,))
    expected = 0.96 * (0.0 - 1.0) + 0.0371 * (0.0 - 1.0) ** 2
    detail = f"feasible x=(0,) has penalty {v:.4f} != 0 (predicted {expected:.4f})"
    return CheckResult("unbalanced_penalty_inexact", abs(v - expected) < 1e-12 and v != 0.0, detail)


def check_fast_gate_agreement(instances: int = 50, n: int = 5, p: int = 3, tol: float = 1e-10, seed: int = 0) -> CheckResult:
    """Diagonal-phase path vs gate-ladder path: same state up to global phase."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        h = random_spin_mixed(rng, n)
        fast = qaoa.build_circuit(h, layers=p, execution=qaoa.Execution.FAST_DIAGONAL)
        gate = qaoa.build_circuit(h, layers=p, execution=qaoa.Execution.GATE_DECOMPOSED)
        params = _random_params(rng, p)
        a = qaoa.run(fast, params).amp
        b = qaoa.run(gate, params).amp
        overlap = abs(np.vdot(a, b))
        worst = max(worst, 1.0 - overlap)
    return _result("fast_vs_gate_overlap_deficit", worst, tol)


def check_expectation_vs_dense(trials: int = 20, nmax: int = 5, tol: float = 1e-10, seed: int = 0) -> CheckResult:
    """expectation_diagonal vs dense <psi|H|psi> on random states."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, nmax + 1))
        h = random_spin_mixed(rng, n)
        amp = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        amp /= np.linalg.norm(amp)
        psi = sim.StateVector(n, amp)
        fast = sim.expectation_diagonal(psi, diagonalize(h))
        ref = float(np.real(amp.conj() @ dense.hamiltonian_matrix(h) @ amp))
        worst = max(worst, abs(fast - ref))
    return _result("expectation_vs_dense", worst, tol)


def check_gradient_methods_agree(
    instances: int = 30, nmax: int = 5, pmax: int = 3, points: int = 5,
    rtol: float = 1e-6, fd_step: float = 1e-5, seed: int = 0,
) -> CheckResult:
    """Exact per-gate shift gradient vs central finite differences.

    Relative error is the max component difference over the max finite-
    difference component magnitude (floored to dodge division by zero).
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(2, nmax + 1))
        spec = qaoa.build_circuit(random_spin_mixed(rng, n))
        p = int(rng.integers(1, pmax + 1))
        for _ in range(points):
            params = _random_params(rng, p)
            g_fd = qaoa.parameter_shift_gradient(spec, params, method="fd", fd_step=fd_step)
            g_sh = qaoa.parameter_shift_gradient(spec, params, method="shift")
            denom = max(float(np.abs(g_fd).max()), 1e-8)
            worst = max(worst, float(np.abs(g_sh - g_fd).max()) / denom)
    return _result("gradient_shift_vs_fd", worst, rtol)


# ------------------------------------------------------------------ suites

def suite_gates(seed: int = 0) -> list[CheckResult]:
    return [
        check_rzz_diagonal(seed=seed),
        check_rzz_swap(seed=seed),
        check_rzz_cnot_composite(seed=seed),
        check_rzk_ladder_vs_dense(seed=seed),
        check_single_qubit_gates(seed=seed),
        check_cnot_projector_form(),
        check_gate_inverses(seed=seed),
        check_mixer_ground_state(),
    ]


def suite_symmetry(seed: int = 0) -> list[CheckResult]:
    return [
        check_point_symmetry(seed=seed),
        check_beta_periodicity_even(seed=seed),
        check_beta_shift_detects_odd(seed=seed),
        check_beta_2pi_periodicity(seed=seed),
        check_restricted_box_holds_minimum(seed=seed),
    ]


def suite_trotter(seed: int = 0) -> list[CheckResult]:
    return [
        check_trotter_convergence(seed=seed),
        check_split_exact_when_commuting(seed=seed),
    ]


def suite_oracle(seed: int = 0) -> list[CheckResult]:
    return [
        check_qubo_roundtrip(seed=seed),
        check_pubo_roundtrip(seed=seed),
        check_pubo_conversion_paths(seed=seed),
        check_diagonal_matches_brute(seed=seed),
        check_penalties_exact(seed=seed),
        check_unbalanced_inexact(),
        check_fast_gate_agreement(seed=seed),
        check_expectation_vs_dense(seed=seed),
        check_gradient_methods_agree(seed=seed),
    ]


SUITES = {
    "gates": suite_gates,
    "symmetry": suite_symmetry,
    "trotter": suite_trotter,
    "oracle": suite_oracle,
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed=seed)
