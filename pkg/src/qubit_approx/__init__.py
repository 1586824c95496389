"""Best convex approximation of a qubit state by mixtures of given pure states."""

from .bloch import (
    PairwiseCache,
    PureState,
    TargetState,
    bloch_of_pure,
    distance,
    fidelity_sq_mixture,
    pairwise_cache,
    pure_from_bloch,
    target_from_bloch,
    target_from_params,
    validate_density,
)
from .closed_form import (
    Branch,
    NoExact,
    SolveResult,
    exact_quad_decomposition,
    kkt_residual,
    solve_orthonormal_pair,
    solve_pair,
    solve_pauli_quad,
    solve_single,
    solve_triple,
)
from .oracle import GridSpec, grid_search, local_refine
from .planner import Instance, PlannerReport, best_approximation, verify_against_oracle

__version__ = "0.1.0"
