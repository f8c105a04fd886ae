"""Exact-simulation QAOA toolkit for QUBO/PUBO problems.

Build a binary problem (directly or through penalty encodings), convert it
to a diagonal spin Hamiltonian, run the layered circuit on a statevector
simulator, and optimize the angles with SPSA or gradient descent.
"""

__version__ = "0.1.0"

from .errors import OptimizerDivergence, ProblemFormatError, SizeCapError
from .model import (
    BRUTE_FORCE_CAP,
    BruteForceResult,
    ConstraintKind,
    ConstraintSpec,
    PuboProblem,
    QuboProblem,
    apply_penalty,
    brute_force_solve,
    build_knapsack,
    build_maxcut,
    build_pubo,
    build_qubo,
    evaluate_pubo,
    evaluate_qubo,
    load_problem,
    problem_from_dict,
)
from .ising import (
    SpinHamiltonian,
    diagonalize,
    evaluate_spin,
    pubo_to_spin,
    qubo_to_spin,
    scale,
    scaling_factor,
    to_spin,
)
from .simulator import STATEVECTOR_CAP, StateVector, init_plus
from .qaoa import (
    Execution,
    LayerOrder,
    QaoaCircuitSpec,
    QaoaParams,
    build_circuit,
    energy,
    energy_breakdown,
    landscape_scan,
    parameter_shift_gradient,
    restricted_domain,
    run,
)
from .optimize import (
    OptimizerConfig,
    RunRecord,
    init_params,
    optimize,
    optimize_gd,
    optimize_spsa,
)

__all__ = [
    "__version__",
    "BRUTE_FORCE_CAP",
    "STATEVECTOR_CAP",
    "BruteForceResult",
    "ConstraintKind",
    "ConstraintSpec",
    "Execution",
    "LayerOrder",
    "OptimizerConfig",
    "OptimizerDivergence",
    "ProblemFormatError",
    "PuboProblem",
    "QaoaCircuitSpec",
    "QaoaParams",
    "QuboProblem",
    "RunRecord",
    "SizeCapError",
    "SpinHamiltonian",
    "StateVector",
    "apply_penalty",
    "brute_force_solve",
    "build_circuit",
    "build_knapsack",
    "build_maxcut",
    "build_pubo",
    "build_qubo",
    "diagonalize",
    "energy",
    "energy_breakdown",
    "evaluate_pubo",
    "evaluate_qubo",
    "evaluate_spin",
    "init_params",
    "init_plus",
    "landscape_scan",
    "load_problem",
    "optimize",
    "optimize_gd",
    "optimize_spsa",
    "parameter_shift_gradient",
    "problem_from_dict",
    "pubo_to_spin",
    "qubo_to_spin",
    "restricted_domain",
    "run",
    "scale",
    "scaling_factor",
    "to_spin",
]
