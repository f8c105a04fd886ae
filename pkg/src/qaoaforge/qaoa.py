"""Layered alternating circuits over a diagonal target Hamiltonian.

A layer applies the target-phase operator U_f(gamma) = e^{-i(gamma/2)H_f}
and the mixer U_i(beta) = prod_q R_x(beta) to the uniform superposition,
layers in increasing order.  Energies are exact expectations of the scaled
Hamiltonian; unscaled and original-unit values follow by multiplying back
the scale factor and adding the dropped constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .ising import SpinHamiltonian, diagonalize, scale, scaling_factor
from . import simulator as sim


class LayerOrder(Enum):
    UF_THEN_UI = "uf_then_ui"   # target phase first within a layer
    UI_THEN_UF = "ui_then_uf"


class Execution(Enum):
    FAST_DIAGONAL = "fast_diagonal"
    GATE_DECOMPOSED = "gate_decomposed"


@dataclass(frozen=True)
class QaoaParams:
    """One angle pair per layer."""

    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        beta = np.atleast_1d(np.array(self.beta, dtype=float))
        gamma = np.atleast_1d(np.array(self.gamma, dtype=float))
        if beta.ndim != 1 or beta.shape != gamma.shape or beta.size < 1:
            raise ValueError("beta and gamma must be equal-length nonempty vectors")
        if not (np.isfinite(beta).all() and np.isfinite(gamma).all()):
            raise ValueError("parameters must be finite")
        beta.setflags(write=False)
        gamma.setflags(write=False)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)

    @property
    def p(self) -> int:
        return self.beta.size

    def as_vector(self) -> np.ndarray:
        """Concatenated [beta..., gamma...]."""
        return np.concatenate([self.beta, self.gamma])

    @staticmethod
    def from_vector(vec) -> "QaoaParams":
        vec = np.asarray(vec, dtype=float)
        if vec.size % 2 != 0 or vec.size == 0:
            raise ValueError("parameter vector must have even positive length")
        p = vec.size // 2
        return QaoaParams(beta=vec[:p], gamma=vec[p:])


@dataclass
class QaoaCircuitSpec:
    """Prepared circuit context: scaled Hamiltonian, its diagonal, and options."""

    hamiltonian: SpinHamiltonian
    k_scale: float
    layers: int
    layer_order: LayerOrder
    execution: Execution
    scaled: bool
    energies: np.ndarray
    term_keys: list[tuple[int, ...]]
    term_coefs: np.ndarray
    _term_signs: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.hamiltonian.n

    @property
    def constant(self) -> float:
        return self.hamiltonian.constant

    def term_signs(self) -> np.ndarray:
        """Per-term diagonal sign vectors, (terms x 2^n), built on first use."""
        if self._term_signs is None:
            z = np.arange(self.energies.size, dtype=np.uint64)
            rows = []
            for idx in self.term_keys:
                mask = np.uint64(sum(1 << i for i in idx))
                parity = (np.bitwise_count(z & mask) & np.uint64(1)).astype(np.float64)
                rows.append(1.0 - 2.0 * parity)
            self._term_signs = np.array(rows)
        return self._term_signs


def build_circuit(
    h_raw: SpinHamiltonian,
    layers: int = 1,
    scaled: bool = True,
    layer_order: LayerOrder = LayerOrder.UF_THEN_UI,
    execution: Execution = Execution.FAST_DIAGONAL,
) -> QaoaCircuitSpec:
    """Prepare a circuit spec from a raw Hamiltonian.

    With scaled=True every coefficient is divided by the largest magnitude,
    so max |coef| == 1 and rotation angles stop being redundant across
    scale; minimizers are unchanged.
    """
    if not h_raw.terms:
        raise ValueError("Hamiltonian has no terms")
    if layers < 1:
        raise ValueError("layers must be >= 1")
    k = scaling_factor(h_raw) if scaled else 1.0
    h = scale(h_raw, k) if scaled else h_raw
    energies = diagonalize(h)
    keys = list(h.terms.keys())
    coefs = np.array([h.terms[key] for key in keys])
    return QaoaCircuitSpec(
        hamiltonian=h,
        k_scale=k,
        layers=layers,
        layer_order=layer_order,
        execution=execution,
        scaled=scaled,
        energies=energies,
        term_keys=keys,
        term_coefs=coefs,
    )


def _apply_uf(spec: QaoaCircuitSpec, psi: sim.StateVector, gamma: float) -> None:
    if spec.execution is Execution.FAST_DIAGONAL:
        sim.apply_diagonal_phase(psi, spec.energies, gamma)
        return
    # gate path: one rotation per term, all diagonal so order is irrelevant
    for idx, coef in zip(spec.term_keys, spec.term_coefs):
        angle = gamma * coef
        if len(idx) == 1:
            sim.apply_rz(psi, idx[0], angle)
        else:
            sim.apply_rzk_ladder(psi, idx, angle)


def _apply_ui(spec: QaoaCircuitSpec, psi: sim.StateVector, beta: float) -> None:
    for q in range(spec.n):
        sim.apply_rx(psi, q, beta)


def run(spec: QaoaCircuitSpec, params: QaoaParams) -> sim.StateVector:
    """Apply all layers to the uniform superposition, layer 1 first."""
    psi = sim.init_plus(spec.n)
    for k in range(params.p):
        if spec.layer_order is LayerOrder.UF_THEN_UI:
            _apply_uf(spec, psi, float(params.gamma[k]))
            _apply_ui(spec, psi, float(params.beta[k]))
        else:
            _apply_ui(spec, psi, float(params.beta[k]))
            _apply_uf(spec, psi, float(params.gamma[k]))
    return psi


def energy(spec: QaoaCircuitSpec, params: QaoaParams) -> float:
    """Exact expectation of the scaled Hamiltonian in the circuit output."""
    return sim.expectation_diagonal(run(spec, params), spec.energies)


def energy_breakdown(spec: QaoaCircuitSpec, params: QaoaParams) -> dict[str, float]:
    """Scaled expectation plus its unscaled and original-objective forms."""
    e = energy(spec, params)
    return {
        "scaled": e,
        "unscaled": e * spec.k_scale,
        "objective": e * spec.k_scale + spec.constant,
    }


def shot_energy(spec: QaoaCircuitSpec, params: QaoaParams, shots: int, seed) -> float:
    """Monte-Carlo estimate of energy() from a finite sample."""
    psi = run(spec, params)
    hist = sim.sample(psi, shots, seed)
    total = 0.0
    for z, count in hist.items():
        total += count * spec.energies[z]
    return float(total / shots)


def _energy_per_gate(spec: QaoaCircuitSpec, beta_angles: np.ndarray, term_angles: np.ndarray) -> float:
    """Energy with every gate angle free: beta_angles is (p, n), term_angles (p, T).

    Uses the diagonal representation for U_f, so each term's rotation angle
    can be shifted independently.  Layer order follows the spec.
    """
    signs = spec.term_signs()
    psi = sim.init_plus(spec.n)
    p = beta_angles.shape[0]
    for k in range(p):
        if spec.layer_order is LayerOrder.UF_THEN_UI:
            psi.amp *= np.exp(-0.5j * (term_angles[k] @ signs))
            for q in range(spec.n):
                sim.apply_rx(psi, q, float(beta_angles[k, q]))
        else:
            for q in range(spec.n):
                sim.apply_rx(psi, q, float(beta_angles[k, q]))
            psi.amp *= np.exp(-0.5j * (term_angles[k] @ signs))
    return sim.expectation_diagonal(psi, spec.energies)


def parameter_shift_gradient(
    spec: QaoaCircuitSpec,
    params: QaoaParams,
    method: str = "fd",
    fd_step: float = 1e-5,
) -> np.ndarray:
    """Gradient of energy() w.r.t. [beta_1..beta_p, gamma_1..gamma_p].

    method="fd" (default): central finite differences with step fd_step on
    the exact energy.  The layer generators are sums of Pauli words with
    unequal coefficients, so a literal two-point shift per layer parameter
    is not exact; finite differences are correct for any generator.

    method="shift": exact per-gate decomposition.  Every gate angle is a
    rotation by a single +/-1-spectrum generator, so d/d(angle) is half the
    difference of the angle shifted by +/- pi/2; summing over the gates a
    layer parameter feeds (chain rule: d(angle)/d(gamma_k) = coef) gives the
    exact derivative from 2 p (n + T) evaluations.
    """
    p = params.p
    if method == "fd":
        base = params.as_vector()
        grad = np.zeros(2 * p)
        for i in range(2 * p):
            up = base.copy()
            dn = base.copy()
            up[i] += fd_step
            dn[i] -= fd_step
            e_up = energy(spec, QaoaParams.from_vector(up))
            e_dn = energy(spec, QaoaParams.from_vector(dn))
            grad[i] = (e_up - e_dn) / (2.0 * fd_step)
        return grad
    if method != "shift":
        raise ValueError(f"unknown gradient method: {method!r}")

    n = spec.n
    coefs = spec.term_coefs
    beta_base = np.repeat(params.beta[:, None], n, axis=1)
    term_base = params.gamma[:, None] * coefs[None, :]
    grad = np.zeros(2 * p)
    half_pi = math.pi / 2.0
    for k in range(p):
        total = 0.0
        for q in range(n):
            for sgn in (half_pi, -half_pi):
                shifted = beta_base.copy()
                shifted[k, q] += sgn
                e = _energy_per_gate(spec, shifted, term_base)
                total += 0.5 * e if sgn > 0 else -0.5 * e
        grad[k] = total
    for k in range(p):
        total = 0.0
        for t in range(coefs.size):
            for sgn in (half_pi, -half_pi):
                shifted = term_base.copy()
                shifted[k, t] += sgn
                e = _energy_per_gate(spec, beta_base, shifted)
                total += (0.5 * e if sgn > 0 else -0.5 * e) * coefs[t]
        grad[p + k] = total
    return grad


@dataclass
class LandscapeGrid:
    """Energy values over a (beta, gamma) grid for a one-layer circuit."""

    beta_axis: np.ndarray
    gamma_axis: np.ndarray
    values: np.ndarray
    scaled: bool
    problem_id: str = ""

    def to_csv(self) -> str:
        """First row 'beta\\gamma' then the gamma axis; one row per beta."""
        header = "beta\\gamma," + ",".join(f"{g:.17g}" for g in self.gamma_axis)
        lines = [header]
        for i, b in enumerate(self.beta_axis):
            row = ",".join(f"{v:.17g}" for v in self.values[i])
            lines.append(f"{b:.17g},{row}")
        return "\n".join(lines) + "\n"


def landscape_scan(
    spec: QaoaCircuitSpec,
    resolution: int,
    beta_range: tuple[float, float] | None = None,
    gamma_range: tuple[float, float] | None = None,
) -> LandscapeGrid:
    """Dense grid of energy() over one layer's (beta, gamma) box."""
    if spec.layers != 1:
        raise ValueError("landscape scans are defined for single-layer circuits only")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if beta_range is None:
        beta_range = (-math.pi, math.pi)
    if gamma_range is None:
        gamma_range = (-math.pi, math.pi)
    beta_axis = np.linspace(beta_range[0], beta_range[1], resolution)
    gamma_axis = np.linspace(gamma_range[0], gamma_range[1], resolution)
    values = np.zeros((resolution, resolution))
    for i, b in enumerate(beta_axis):
        for j, g in enumerate(gamma_axis):
            values[i, j] = energy(spec, QaoaParams(beta=[b], gamma=[g]))
    return LandscapeGrid(beta_axis=beta_axis, gamma_axis=gamma_axis, values=values, scaled=spec.scaled)


@dataclass(frozen=True)
class DomainDescriptor:
    """Parameter box the landscape symmetries justify searching.

    beta always folds to [0, pi].  gamma folds to [0, pi] too when every
    term has even degree (the pi-periodicity in beta holds there); with any
    odd-degree term gamma stays [-pi, pi].  The box volume shrinks by
    2^(2p) in the fully restricted case and 2^p otherwise, relative to the
    full [-pi, pi]^2p box.
    """

    beta_range: tuple[float, float]
    gamma_range: tuple[float, float]
    fully_restricted: bool
    reduction_exponent_per_layer: int

    def volume_reduction(self, p: int) -> int:
        return 2 ** (self.reduction_exponent_per_layer * p)

    def to_dict(self) -> dict:
        return {
            "beta_range": list(self.beta_range),
            "gamma_range": list(self.gamma_range),
            "fully_restricted": self.fully_restricted,
            "reduction_exponent_per_layer": self.reduction_exponent_per_layer,
        }


def restricted_domain(spec: QaoaCircuitSpec) -> DomainDescriptor:
    """Search box implied by the circuit Hamiltonian's term degrees."""
    fully = spec.hamiltonian.all_even_degrees()
    if fully:
        return DomainDescriptor((0.0, math.pi), (0.0, math.pi), True, 2)
    return DomainDescriptor((0.0, math.pi), (-math.pi, math.pi), False, 1)
