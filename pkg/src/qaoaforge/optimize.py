"""Classical outer loops over the circuit parameters.

SPSA perturbs all parameters at once with a Bernoulli +/-1 vector and
estimates the gradient from two energy evaluations; gradient descent uses
the exact gradient.  Both support multiple restarts, each on its own
deterministic PRNG stream derived from (seed, restart index), and optional
tanh squashing that keeps angles inside the restricted search box.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .errors import OptimizerDivergence
from .ising import assignment_of_basis_index
from .model import bits_to_string
from . import qaoa
from . import simulator as sim

HISTOGRAM_MAX_ENTRIES = 4096


def squash_pi(x):
    """(pi/2)(tanh x + 1): all reals onto (0, pi), monotone."""
    return (math.pi / 2.0) * (np.tanh(x) + 1.0)


def squash_2pi(x):
    """pi tanh x: all reals onto (-pi, pi), monotone."""
    return math.pi * np.tanh(x)


def squash_params(raw, fully_restricted: bool) -> qaoa.QaoaParams:
    """Map 2p raw reals into the restricted box.

    beta always gets the (0, pi) map; gamma gets it only when the domain is
    fully restricted, otherwise the (-pi, pi) map.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.size % 2 != 0 or raw.size == 0:
        raise ValueError("raw vector must have even positive length")
    p = raw.size // 2
    beta = squash_pi(raw[:p])
    gamma = squash_pi(raw[p:]) if fully_restricted else squash_2pi(raw[p:])
    return qaoa.QaoaParams(beta=beta, gamma=gamma)


def _unsquash(angles: np.ndarray, fully_restricted: bool) -> np.ndarray:
    """Raw vector whose squash reproduces the given angle vector."""
    p = angles.size // 2
    lim = 1.0 - 1e-12
    tb = np.clip(2.0 * angles[:p] / math.pi - 1.0, -lim, lim)
    if fully_restricted:
        tg = np.clip(2.0 * angles[p:] / math.pi - 1.0, -lim, lim)
    else:
        tg = np.clip(angles[p:] / math.pi, -lim, lim)
    return np.concatenate([np.arctanh(tb), np.arctanh(tg)])


def _squash_jacobian(raw: np.ndarray, fully_restricted: bool) -> np.ndarray:
    """d(angle)/d(raw), elementwise."""
    p = raw.size // 2
    sech2 = 1.0 - np.tanh(raw) ** 2
    jac = np.empty_like(raw)
    jac[:p] = (math.pi / 2.0) * sech2[:p]
    jac[p:] = ((math.pi / 2.0) if fully_restricted else math.pi) * sech2[p:]
    return jac


@dataclass
class OptimizerConfig:
    """All knobs of the outer loop.

    shots=0 evaluates exact expectations.  a0=None calibrates the SPSA step
    gain per restart from an initial gradient-magnitude probe; A=None uses
    10% of max_iters.  plateau_window=0 disables early stopping.
    """

    method: str = "spsa"
    max_iters: int = 2000
    restarts: int = 10
    seed: int = 0
    shots: int = 0
    squash: str = "none"
    a0: float | None = None
    c0: float = 0.1
    A: float | None = None
    alpha: float = 0.602
    gamma_decay: float = 0.101
    learning_rate: float = 0.05
    fd_step: float = 1e-5
    gradient_method: str = "fd"
    plateau_window: int = 0
    plateau_rtol: float = 1e-6

    def __post_init__(self):
        if self.method not in ("spsa", "gd"):
            raise ValueError(f"method must be 'spsa' or 'gd', got {self.method!r}")
        if self.squash not in ("none", "tanh"):
            raise ValueError(f"squash must be 'none' or 'tanh', got {self.squash!r}")
        if self.gradient_method not in ("fd", "shift"):
            raise ValueError(f"gradient_method must be 'fd' or 'shift'")
        if self.max_iters < 0 or self.restarts < 1 or self.shots < 0:
            raise ValueError("max_iters >= 0, restarts >= 1, shots >= 0 required")
        if self.c0 <= 0 or self.alpha <= 0 or self.gamma_decay <= 0:
            raise ValueError("SPSA gains must be positive")
        if (self.a0 is not None and self.a0 <= 0) or (self.A is not None and self.A < 0):
            raise ValueError("a0 must be positive, A nonnegative")
        if self.learning_rate < 0 or self.fd_step <= 0:
            raise ValueError("learning_rate >= 0 and fd_step > 0 required")


@dataclass
class RunRecord:
    """Everything a solve produced, JSON-ready via to_dict().

    Per restart, the final iterate is the best energy seen during that
    restart (including its initial point), so restart_finals[r] is restart
    r's final energy and best_energy == min(restart_finals).  wall_time_s
    is informational and excluded from reproducibility comparisons.
    """

    method: str
    best_energy: float
    best_energy_unscaled: float
    best_objective: float
    best_bitstring: str
    best_basis_index: int
    best_cost: float
    final_params: dict
    best_restart: int
    restart_finals: list
    traces: list
    initial_energies: list
    histogram: dict
    histogram_mode: str
    iterations: int
    config: dict
    domain: dict
    wall_time_s: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["histogram"] = {str(z): v for z, v in self.histogram.items()}
        return d

    def comparable_dict(self) -> dict:
        """All reproducible fields (drops wall-clock timing)."""
        d = self.to_dict()
        d.pop("wall_time_s")
        return d


def _initial_vector(domain: qaoa.DomainDescriptor, p: int, rng, squash: str) -> np.ndarray:
    """Uniform draw inside the restricted box: all betas first, then gammas.

    In tanh mode the optimizer works on raw values, so the drawn angles are
    pulled back through the inverse squash.
    """
    beta = rng.uniform(domain.beta_range[0], domain.beta_range[1], p)
    gamma = rng.uniform(domain.gamma_range[0], domain.gamma_range[1], p)
    angles = np.concatenate([beta, gamma])
    if squash == "tanh":
        return _unsquash(angles, domain.fully_restricted)
    return angles


def init_params(domain: qaoa.DomainDescriptor, p: int, seed: int = 0, restart: int = 0) -> qaoa.QaoaParams:
    """The deterministic initial angles of one restart."""
    rng = np.random.default_rng([seed, restart])
    vec = _initial_vector(domain, p, rng, "none")
    return qaoa.QaoaParams.from_vector(vec)


def _start_vector(spec, domain, config: OptimizerConfig, rng, initial_params) -> np.ndarray:
    """Restart starting point: a random box draw, or the given warm start."""
    if initial_params is None:
        return _initial_vector(domain, spec.layers, rng, config.squash)
    angles = initial_params.as_vector()
    if angles.size != 2 * spec.layers:
        raise ValueError(
            f"initial_params has {angles.size // 2} layers, circuit has {spec.layers}"
        )
    if config.squash == "tanh":
        return _unsquash(angles, domain.fully_restricted)
    return angles.copy()


def _make_objective(spec, config: OptimizerConfig, fully: bool, rng):
    def decode(vec: np.ndarray) -> qaoa.QaoaParams:
        if config.squash == "tanh":
            return squash_params(vec, fully)
        return qaoa.QaoaParams.from_vector(vec)

    def objective(vec: np.ndarray) -> float:
        params = decode(vec)
        if config.shots > 0:
            return qaoa.shot_energy(spec, params, config.shots, rng)
        return qaoa.energy(spec, params)

    return decode, objective


def _check_finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise OptimizerDivergence(f"non-finite {what} encountered; aborting")
    return value


def _calibrate_a0(objective, vec, rng, config: OptimizerConfig, big_a: float) -> float:
    """Pick a0 so the first step moves roughly 0.1 rad.

    Probes the SPSA gradient magnitude a few times at the initial point with
    the k=0 perturbation size; a0 = target_step * (A+1)^alpha / |g|.
    """
    dim = vec.size
    mags = []
    for _ in range(5):
        delta = rng.integers(0, 2, size=dim) * 2.0 - 1.0
        e_plus = _check_finite(objective(vec + config.c0 * delta), "energy")
        e_minus = _check_finite(objective(vec - config.c0 * delta), "energy")
        mags.append(abs(e_plus - e_minus) / (2.0 * config.c0))
    gmag = max(float(np.mean(mags)), 1e-3)
    return min(0.1 * (big_a + 1.0) ** config.alpha / gmag, 50.0)


def _plateau_hit(best_history: list, config: OptimizerConfig) -> bool:
    w = config.plateau_window
    if w <= 0 or len(best_history) <= w:
        return False
    before = best_history[-w - 1]
    improvement = before - best_history[-1]
    return improvement < config.plateau_rtol * max(1.0, abs(before))


def _spsa_restart(spec, config: OptimizerConfig, domain, restart: int, initial_params=None):
    rng = np.random.default_rng([config.seed, restart])
    decode, objective = _make_objective(spec, config, domain.fully_restricted, rng)
    vec = _start_vector(spec, domain, config, rng, initial_params)
    dim = vec.size
    e0 = _check_finite(objective(vec), "energy")
    big_a = config.A if config.A is not None else 0.1 * config.max_iters
    a0 = config.a0 if config.a0 is not None else _calibrate_a0(objective, vec, rng, config, big_a)
    best_e, best_vec = e0, vec.copy()
    trace: list[float] = []
    best_history: list[float] = [best_e]
    for k in range(config.max_iters):
        ck = config.c0 / (k + 1) ** config.gamma_decay
        ak = a0 / (big_a + k + 1) ** config.alpha
        delta = rng.integers(0, 2, size=dim) * 2.0 - 1.0
        e_plus = _check_finite(objective(vec + ck * delta), "energy")
        e_minus = _check_finite(objective(vec - ck * delta), "energy")
        # 1/delta_i == delta_i for Bernoulli +/-1 perturbations
        ghat = (e_plus - e_minus) / (2.0 * ck) * delta
        vec = vec - ak * ghat
        if not np.isfinite(vec).all():
            raise OptimizerDivergence("parameter vector diverged; aborting")
        e = _check_finite(objective(vec), "energy")
        trace.append(e)
        if e < best_e:
            best_e, best_vec = e, vec.copy()
        best_history.append(best_e)
        if _plateau_hit(best_history, config):
            break
    return trace, e0, best_e, best_vec, decode, a0


def _gd_restart(spec, config: OptimizerConfig, domain, restart: int, initial_params=None):
    rng = np.random.default_rng([config.seed, restart])
    decode, objective = _make_objective(spec, config, domain.fully_restricted, rng)
    vec = _start_vector(spec, domain, config, rng, initial_params)
    e0 = _check_finite(objective(vec), "energy")
    best_e, best_vec = e0, vec.copy()
    trace: list[float] = []
    best_history: list[float] = [best_e]
    for _ in range(config.max_iters):
        params = decode(vec)
        g = qaoa.parameter_shift_gradient(
            spec, params, method=config.gradient_method, fd_step=config.fd_step
        )
        if not np.isfinite(g).all():
            raise OptimizerDivergence("non-finite gradient encountered; aborting")
        if config.squash == "tanh":
            g = g * _squash_jacobian(vec, domain.fully_restricted)
        vec = vec - config.learning_rate * g
        if not np.isfinite(vec).all():
            raise OptimizerDivergence("parameter vector diverged; aborting")
        e = _check_finite(objective(vec), "energy")
        trace.append(e)
        if e < best_e:
            best_e, best_vec = e, vec.copy()
        best_history.append(best_e)
        if _plateau_hit(best_history, config):
            break
    return trace, e0, best_e, best_vec, decode, None


def _final_histogram(spec, params: qaoa.QaoaParams, config: OptimizerConfig):
    """Distribution at the returned params and its argmax (ties: lowest index)."""
    psi = qaoa.run(spec, params)
    if config.shots > 0:
        rng = np.random.default_rng([config.seed, config.restarts])
        hist = sim.sample(psi, config.shots, rng)
        best_z = min(hist, key=lambda z: (-hist[z], z))
        if len(hist) > HISTOGRAM_MAX_ENTRIES:
            kept = sorted(hist.items(), key=lambda kv: (-kv[1], kv[0]))[:HISTOGRAM_MAX_ENTRIES]
            hist = dict(sorted(kept))
        mode = "counts"
    else:
        probs = psi.probabilities()
        best_z = int(np.argmax(probs))
        if probs.size <= HISTOGRAM_MAX_ENTRIES:
            hist = {int(z): float(probs[z]) for z in range(probs.size)}
        else:
            top = np.sort(np.argpartition(probs, -HISTOGRAM_MAX_ENTRIES)[-HISTOGRAM_MAX_ENTRIES:])
            hist = {int(z): float(probs[z]) for z in top}
        mode = "exact"
    return hist, best_z, mode


def _run_restarts(spec, config: OptimizerConfig, restart_fn, initial_params=None) -> RunRecord:
    t_start = time.perf_counter()
    domain = qaoa.restricted_domain(spec)
    traces, initials, finals, vectors, a0s = [], [], [], [], []
    decode = None
    for r in range(config.restarts):
        trace, e0, best_e, best_vec, decode, a0 = restart_fn(
            spec, config, domain, r, initial_params
        )
        traces.append(trace)
        initials.append(e0)
        finals.append(best_e)
        vectors.append(best_vec)
        a0s.append(a0)
    best_r = int(np.argmin(finals))
    final_params = decode(vectors[best_r])
    hist, best_z, mode = _final_histogram(spec, final_params, config)
    breakdown = qaoa.energy_breakdown(spec, final_params)
    best_bits = assignment_of_basis_index(best_z, spec.n)
    config_echo = asdict(config)
    config_echo["A_resolved"] = config.A if config.A is not None else 0.1 * config.max_iters
    if a0s[0] is not None:
        config_echo["a0_resolved"] = a0s
    return RunRecord(
        method=config.method,
        best_energy=float(finals[best_r]),
        best_energy_unscaled=breakdown["unscaled"],
        best_objective=breakdown["objective"],
        best_bitstring=bits_to_string(best_bits),
        best_basis_index=best_z,
        best_cost=float(spec.energies[best_z] * spec.k_scale + spec.constant),
        final_params={"beta": final_params.beta.tolist(), "gamma": final_params.gamma.tolist()},
        best_restart=best_r,
        restart_finals=[float(v) for v in finals],
        traces=[[float(v) for v in t] for t in traces],
        initial_energies=[float(v) for v in initials],
        histogram=hist,
        histogram_mode=mode,
        iterations=config.max_iters,
        config=config_echo,
        domain=qaoa.restricted_domain(spec).to_dict(),
        wall_time_s=time.perf_counter() - t_start,
    )


def optimize_spsa(
    spec: qaoa.QaoaCircuitSpec, config: OptimizerConfig, initial_params=None
) -> RunRecord:
    """Multi-restart SPSA; returns the best restart's best-seen iterate.

    initial_params, when given, warm-starts every restart from those angles
    instead of a random draw (restarts still perturb independently).
    """
    return _run_restarts(spec, config, _spsa_restart, initial_params)


def optimize_gd(
    spec: qaoa.QaoaCircuitSpec, config: OptimizerConfig, initial_params=None
) -> RunRecord:
    """Multi-restart fixed-step gradient descent on exact energies."""
    if config.shots != 0:
        raise ValueError("gradient descent requires exact expectations (shots=0)")
    return _run_restarts(spec, config, _gd_restart, initial_params)


def optimize(
    spec: qaoa.QaoaCircuitSpec, config: OptimizerConfig, initial_params=None
) -> RunRecord:
    if config.method == "spsa":
        return optimize_spsa(spec, config, initial_params)
    return optimize_gd(spec, config, initial_params)
