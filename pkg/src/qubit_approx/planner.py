"""Global optimum for an arbitrary finite set of pure states.

The optimal mixture's Bloch vector lies in the convex hull of the set.
If it equals the target's Bloch vector, four states suffice to write it
exactly (Caratheodory in three dimensions). Otherwise the objective is
strictly concave in the mixture's Bloch vector (or linear, for a pure
target), so the optimum sits on a hull face and three states suffice.
Hence: check every 4-subset for an exact decomposition, then take the
best 3-subset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional

import numpy as np

from .bloch import PureState, TargetState
from .closed_form import (
    NoExact,
    SolveResult,
    best_of,
    embed,
    exact_quad_decomposition,
    make_result,
    solve_pair,
    solve_single,
    solve_triple,
)
from .errors import EmptySet, RankDeficient
from .oracle import GridSpec, default_spec, grid_search

DEDUP_TOL = 1e-9
# Documented grid bound: closed-vs-grid distance gap <= ORACLE_SLOPE * step.
ORACLE_SLOPE = 0.5
GAP_FLOOR = -1e-12


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-9
    tie_break: str = "support-lex"
    oracle_step: Optional[float] = None


@dataclass(frozen=True, eq=False)
class Instance:
    target: TargetState
    states: List[PureState]
    options: SolverOptions = field(default_factory=SolverOptions)


@dataclass(frozen=True, eq=False)
class PlannerReport:
    result: SolveResult
    candidates_evaluated: int
    exact_hit: bool
    subset: tuple


def dedupe(states, tol: float = DEDUP_TOL):
    """Drop states whose Bloch vectors coincide within ``tol``.

    Returns the unique states and, for each, the index of its first
    occurrence in ``states``.
    """
    unique, first = [], []
    for i, s in enumerate(states):
        if not any(np.linalg.norm(s.bloch - u.bloch) < tol for u in unique):
            unique.append(s)
            first.append(i)
    return unique, first


def _solve_small(target, states):
    n = len(states)
    if n == 1:
        return solve_single(target, states[0])
    if n == 2:
        return solve_pair(target, *states)
    return solve_triple(target, *states)


def _search(target, states):
    """Returns (result over ``states``, candidates evaluated, exact flag)."""
    n = len(states)
    if n <= 3:
        return _solve_small(target, states), 1, False
    evaluated = 0
    for quad in combinations(range(n), 4):
        evaluated += 1
        try:
            hit = exact_quad_decomposition(target, [states[i] for i in quad])
        except RankDeficient:
            continue
        if not isinstance(hit, NoExact):
            return embed(hit, quad, n), evaluated, True
    candidates = []
    for tri in combinations(range(n), 3):
        evaluated += 1
        res = solve_triple(target, *(states[i] for i in tri))
        candidates.append(embed(res, tri, n))
    return best_of(candidates), evaluated, False


def best_approximation(instance: Instance) -> PlannerReport:
    target, states = instance.target, list(instance.states)
    if not states:
        raise EmptySet("the state set is empty")
    unique, first = dedupe(states)
    res, evaluated, exact = _search(target, unique)
    n = len(states)
    weights = np.zeros(n)
    weights[first] = res.weights
    # residual and support are recomputed on the full (possibly duplicated) set
    full = make_result(target, states, weights, res.branch, fidelity_sq=res.fidelity ** 2,
                       kkt=len(unique) == n)
    if len(unique) != n:
        full = SolveResult(full.weights, full.distance, full.fidelity, full.support,
                           full.branch, res.kkt_residual)
    return PlannerReport(full, evaluated, exact, full.support)


def best_distance(target, states) -> float:
    return best_approximation(Instance(target, list(states))).result.distance


@dataclass(frozen=True)
class OracleComparison:
    closed: float
    grid: float
    gap: float
    evaluations: int
    bound: float

    @property
    def ok(self) -> bool:
        return GAP_FLOOR <= self.gap <= self.bound


def oracle_bound(step: float) -> float:
    return ORACLE_SLOPE * step


def oracle_spec(n_states: int, step: Optional[float] = None) -> GridSpec:
    """Default grid for ``n_states``; an explicit ``step`` keeps the default
    refinement schedule."""
    spec = default_spec(n_states)
    if step is None:
        return spec
    return GridSpec(step=step, refine_rounds=spec.refine_rounds, refine_factor=spec.refine_factor)


def verify_against_oracle(instance: Instance, step: Optional[float] = None) -> OracleComparison:
    """Compare the planner's distance with the exhaustive grid.

    The gap ``grid - closed`` must be nonnegative (up to rounding) since the
    planner is exact, and at most :func:`oracle_bound` of the coarse step.
    """
    if step is None:
        step = instance.options.oracle_step
    spec = oracle_spec(len(instance.states), step)
    closed = best_approximation(instance).result.distance
    grid = grid_search(instance.target, list(instance.states), spec)
    return OracleComparison(closed, grid.distance, grid.distance - closed,
                            grid.evaluations, oracle_bound(spec.step))
