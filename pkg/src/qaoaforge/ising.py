"""Spin Hamiltonians: products of sigma_z factors with real coefficients.

Binary problems convert through the change of variables s = 2x - 1, so
s = +1 corresponds to x = 1.  In the computational basis sigma_z has
eigenvalue +1 on |0> and -1 on |1>, which means basis state z encodes the
assignment x_i = 1 - bit_i(z).  The helpers at the bottom own that mapping;
everything else goes through them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial

import numpy as np

from .errors import SizeCapError
from .model import PuboProblem, QuboProblem

# Diagonal tables take 2^n floats; same ceiling as the statevector engine.
DIAGONAL_CAP = 24


@dataclass(frozen=True)
class SpinHamiltonian:
    """H(s) = sum over terms of coef * prod(s_i for i in idx), s_i in {-1,+1}.

    Term keys are strictly increasing index tuples of degree >= 1.  The
    constant records the assignment-independent shift discarded when a
    binary problem was converted; it is not part of H itself and stays in
    original problem units even after scaling.
    """

    n: int
    terms: dict[tuple[int, ...], float]
    constant: float = 0.0

    def __post_init__(self):
        for idx, coef in self.terms.items():
            if len(idx) == 0 or list(idx) != sorted(set(idx)):
                raise ValueError(f"term key must be strictly increasing and non-empty: {idx}")
            if not all(0 <= i < self.n for i in idx):
                raise ValueError(f"term index out of range for n={self.n}: {idx}")
            if not math.isfinite(coef):
                raise ValueError("term coefficients must be finite")
        if not math.isfinite(self.constant):
            raise ValueError("constant must be finite")

    @property
    def max_degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def has_linear_term(self) -> bool:
        return any(len(k) == 1 for k in self.terms)

    def all_even_degrees(self) -> bool:
        return all(len(k) % 2 == 0 for k in self.terms)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"idx": list(k), "coef": v} for k, v in self.terms.items()],
            "constant": self.constant,
        }

    @staticmethod
    def from_dict(d) -> "SpinHamiltonian":
        terms = {tuple(int(i) for i in t["idx"]): float(t["coef"]) for t in d["terms"]}
        return SpinHamiltonian(n=int(d["n"]), terms=_canon(terms), constant=float(d.get("constant", 0.0)))


def _canon(terms: dict) -> dict:
    """Deterministic term order (by degree, then indices), exact zeros dropped."""
    return {k: terms[k] for k in sorted(terms, key=lambda k: (len(k), k)) if terms[k] != 0.0}


def qubo_to_spin(problem: QuboProblem) -> SpinHamiltonian:
    """Convert x^T Q x + c^T x + offset to spin variables via s = 2x - 1.

    Pair couplings are Q_ij / 2 for i < j, fields are (c_i + sum_j Q_ij) / 2,
    and the diagonal of Q folds into the constant because s_i^2 = 1.  The
    constant is sum(Q)/4 + sum(c)/2 + trace(Q)/4 + offset, so evaluating the
    spin form and adding the constant reproduces the binary cost exactly.
    """
    n = problem.n
    Q, c = problem.Q, problem.c
    terms: dict[tuple[int, ...], float] = {}
    for i in range(n):
        b = (c[i] + Q[i, :].sum()) / 2.0
        if b != 0.0:
            terms[(i,)] = float(b)
    for i in range(n):
        for j in range(i + 1, n):
            a = Q[i, j] / 2.0
            if a != 0.0:
                terms[(i, j)] = float(a)
    constant = float(Q.sum() / 4.0 + c.sum() / 2.0 + np.trace(Q) / 4.0 + problem.offset)
    return SpinHamiltonian(n=n, terms=_canon(terms), constant=constant)


def _pubo_to_spin_expand(problem: PuboProblem) -> SpinHamiltonian:
    """Substitute x_i = (s_i + 1) / 2 and expand every monomial over subsets."""
    terms: dict[tuple[int, ...], float] = {}
    constant = problem.offset
    for idx, q in problem.terms.items():
        k = len(idx)
        w = q / float(1 << k)
        for r in range(k + 1):
            for sub in combinations(idx, r):
                if sub:
                    terms[sub] = terms.get(sub, 0.0) + w
                else:
                    constant += w
    return SpinHamiltonian(n=problem.n, terms=_canon(terms), constant=float(constant))


def _pubo_to_spin_closed_form(problem: PuboProblem) -> SpinHamiltonian:
    """Closed-form spin coefficients from the symmetric-tensor view.

    A monomial coefficient q on a degree-m index set spreads as q / m! over
    the m! orderings of a full symmetric tensor.  The spin coefficient of an
    ordered tuple of degree k collects its own tensor entry scaled 2^-k plus
    binom(k+h, k)-weighted sums over all degree-(k+h) extensions scaled
    2^-(k+h); multiplying by the k! orderings of the target tuple gives the
    per-set coefficient.
    """
    mono = problem.terms
    d = problem.degree
    targets: set[tuple[int, ...]] = set()
    for idx in mono:
        for r in range(len(idx) + 1):
            targets.update(combinations(idx, r))
    out: dict[tuple[int, ...], float] = {}
    constant = problem.offset
    for T in sorted(targets, key=lambda t: (len(t), t)):
        k = len(T)
        f = (2.0 ** -k) * mono.get(T, 0.0) / factorial(k)
        for h in range(1, d - k + 1):
            s = 0.0
            for M, q in mono.items():
                if len(M) == k + h and set(T) <= set(M):
                    # h! orderings of the extension indices, each q / (k+h)!
                    s += factorial(h) * q / factorial(k + h)
            f += (2.0 ** -(k + h)) * comb(k + h, k) * s
        a = factorial(k) * f
        if k == 0:
            constant += a
        else:
            out[T] = a
    return SpinHamiltonian(n=problem.n, terms=_canon(out), constant=float(constant))


def pubo_to_spin(problem: PuboProblem, method: str = "expand") -> SpinHamiltonian:
    """Convert a multilinear binary polynomial to spin variables.

    method="expand" substitutes and expands term by term; method="closed_form"
    evaluates the per-tuple coefficient formula directly.  Both agree to
    rounding and exist as independent routes on purpose.
    """
    if method == "expand":
        return _pubo_to_spin_expand(problem)
    if method == "closed_form":
        return _pubo_to_spin_closed_form(problem)
    raise ValueError(f"unknown method: {method!r}")


def to_spin(problem) -> SpinHamiltonian:
    """Convert either problem kind to its spin form."""
    if isinstance(problem, QuboProblem):
        return qubo_to_spin(problem)
    if isinstance(problem, PuboProblem):
        return pubo_to_spin(problem)
    raise TypeError(f"unsupported problem type: {type(problem).__name__}")


def scaling_factor(h: SpinHamiltonian) -> float:
    """Largest coefficient magnitude, the divisor that normalizes H."""
    if not h.terms:
        raise ValueError("cannot scale a Hamiltonian with no terms")
    return max(abs(v) for v in h.terms.values())


def scale(h: SpinHamiltonian, k: float | None = None) -> SpinHamiltonian:
    """Divide every term coefficient by k (default: the scaling factor).

    Minimizers are unchanged.  The constant is left in original units; an
    original-units energy is scaled_energy * k + constant.
    """
    if k is None:
        k = scaling_factor(h)
    if not (math.isfinite(k) and k > 0):
        raise ValueError(f"scale factor must be positive and finite, got {k}")
    return SpinHamiltonian(n=h.n, terms={key: v / k for key, v in h.terms.items()}, constant=h.constant)


def evaluate_spin(h: SpinHamiltonian, s) -> float:
    """H(s) for one spin vector with entries in {-1,+1}; constant excluded."""
    sv = tuple(int(v) for v in s)
    if len(sv) != h.n:
        raise ValueError(f"spin vector has {len(sv)} entries, expected {h.n}")
    if any(v not in (-1, 1) for v in sv):
        raise ValueError("spin entries must be -1 or +1")
    total = 0.0
    for idx, coef in h.terms.items():
        p = 1
        for i in idx:
            p *= sv[i]
        total += coef * p
    return float(total)


def diagonalize(h: SpinHamiltonian) -> np.ndarray:
    """Eigenvalue of H on every computational basis state, as a 2^n vector.

    sigma_z contributes +1 where the basis bit is 0 and -1 where it is 1, so
    a term's sign on state z is (-1)^popcount(z & mask).  Constant excluded.
    """
    if h.n > DIAGONAL_CAP:
        raise SizeCapError(f"diagonal table needs n <= {DIAGONAL_CAP}, got n = {h.n}")
    z = np.arange(1 << h.n, dtype=np.uint64)
    vals = np.zeros(1 << h.n)
    for idx, coef in h.terms.items():
        mask = np.uint64(sum(1 << i for i in idx))
        parity = (np.bitwise_count(z & mask) & np.uint64(1)).astype(np.float64)
        vals += coef * (1.0 - 2.0 * parity)
    return vals


def spin_vector(z: int, n: int) -> tuple[int, ...]:
    """Spin values of basis state z: +1 where bit i is 0, -1 where it is 1."""
    return tuple(1 - 2 * ((z >> i) & 1) for i in range(n))


def assignment_of_basis_index(z: int, n: int) -> tuple[int, ...]:
    """Binary assignment encoded by basis state z (bitwise complement of z)."""
    return tuple(1 - ((z >> i) & 1) for i in range(n))


def basis_index_of_assignment(bits) -> int:
    """Basis state whose spin vector is s = 2x - 1 for assignment x."""
    return sum((1 - int(b)) << i for i, b in enumerate(bits))
