"""Closed-form optimal mixtures for one to four pure states.

Every solver maximizes the squared fidelity over the probability simplex
and returns a :class:`SolveResult`. The maths lives in the Bloch picture,
see :mod:`qubit_approx.bloch` for the objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .bloch import (
    PureState,
    TargetState,
    bloch_matrix,
    distance,
    fidelity_sq_mixture,
    pairwise_cache,
    pauli_eigenstate,
)
from .errors import BoundaryMixture, NotOrthonormal, RankDeficient, TOutOfRange

SUPPORT_TOL = 1e-9
PSEUDO_TOL = 1e-9
DEGEN_TOL = 1e-10
RANK_RTOL = 1e-10
ORTHO_TOL = 2e-9
S_TOL = 1e-12
AXES = ("x", "y", "z")


class Branch(str, Enum):
    INTERIOR = "Interior"
    BOUNDARY_PAIR = "BoundaryPair"
    VERTEX = "Vertex"
    EXACT = "Exact"
    PAULI_INTERIOR = "PauliInterior"
    PAULI_EDGE = "PauliEdge"
    GRID = "Grid"


@dataclass(frozen=True, eq=False)
class SolveResult:
    weights: np.ndarray
    distance: float
    fidelity: float
    support: tuple
    branch: Branch
    kkt_residual: Optional[float] = None
    evaluations: Optional[int] = None

    @property
    def fidelity_sq(self):
        return self.fidelity ** 2

    def rank_key(self):
        """Ordering used to pick among candidate solutions: distance, then
        smaller support, then lexicographically smaller support."""
        return (self.distance, len(self.support), self.support)


@dataclass(frozen=True)
class TripleIntermediates:
    Y123: float
    gram: float  # 4 Y13 Y23 - Y123^2
    kappa: float
    pseudo_p: Optional[np.ndarray]


@dataclass(frozen=True, eq=False)
class NoExact:
    """Returned when the unique affine decomposition has a negative weight."""

    pseudo_p: np.ndarray


def support_of(weights) -> tuple:
    return tuple(int(i) for i in np.flatnonzero(np.asarray(weights) > SUPPORT_TOL))


def _clean(weights) -> np.ndarray:
    p = np.clip(np.asarray(weights, dtype=float), 0.0, None)
    return p / p.sum()


def make_result(target, states, weights, branch, fidelity_sq=None, cache=None, kkt=True):
    """Package ``weights`` into a :class:`SolveResult`.

    When ``fidelity_sq`` is given (a closed-form optimum) it is used as is;
    otherwise the objective is evaluated at ``weights``.
    """
    p = _clean(weights)
    if cache is None:
        cache = pairwise_cache(target, states)
    if fidelity_sq is None:
        fidelity_sq = fidelity_sq_mixture(target, states, p, cache=cache)
    f2 = min(1.0, max(0.0, float(fidelity_sq)))
    d = distance(f2)
    residual = None
    if kkt:
        try:
            residual = kkt_residual(target, states, p, cache=cache)
        except BoundaryMixture:
            residual = None
    p.setflags(write=False)
    return SolveResult(p, d, 1.0 - d, support_of(p), Branch(branch), residual)


def embed(result: SolveResult, indices, n) -> SolveResult:
    """Re-index a sub-problem result into a problem with ``n`` states."""
    p = np.zeros(n)
    p[list(indices)] = result.weights
    p.setflags(write=False)
    return SolveResult(
        p, result.distance, result.fidelity, support_of(p), result.branch,
        result.kkt_residual, result.evaluations,
    )


def best_of(results):
    return min(results, key=SolveResult.rank_key)


def kkt_residual(target: TargetState, states, weights, cache=None) -> float:
    """First-order optimality violation of ``weights`` for maximizing F^2.

    Returns the spread of the gradient over the supported indices, or the
    largest amount by which an unsupported index's gradient exceeds the
    common supported value (a negative multiplier), whichever is larger.
    A vertex of a mixed target has an infinite one-sided slope towards any
    distinct state, reported as ``inf``.
    """
    if cache is None:
        cache = pairwise_cache(target, states)
    p = np.asarray(weights, dtype=float)
    s = float(p @ cache.Y @ p)
    support = np.asarray(p > SUPPORT_TOL)
    if target.m > 0.0 and s <= S_TOL:
        pull = cache.Y[np.ix_(support, ~support)]
        if pull.size and np.any(pull > S_TOL):
            return math.inf
        raise BoundaryMixture(f"mixture is on the Bloch sphere (s = {s:.3g})")
    grad = 0.5 * cache.dots.copy()
    if target.m > 0.0:
        grad += math.sqrt(target.m / 2.0) * (cache.Y @ p) / math.sqrt(s)
    on = grad[support]
    residual = float(on.max() - on.min())
    if np.any(~support):
        level = float(on.mean())
        residual = max(residual, float(np.max(grad[~support] - level)))
    return max(residual, 0.0)


def solve_single(target: TargetState, state: PureState) -> SolveResult:
    f2 = 0.5 * (1.0 + float(np.dot(target.r_o, state.bloch)))
    return make_result(target, [state], [1.0], Branch.VERTEX, fidelity_sq=f2, kkt=False)


def solve_pair(target: TargetState, s1: PureState, s2: PureState) -> SolveResult:
    """Optimal mixture of two pure states.

    ``F^2 = (2 M_+ + sqrt(4 m Y12 + M12^2)) / 4`` with
    ``M_+ = 1 + r_o . (r1 + r2) / 2``, attained at
    ``p1 = (1 + M12 / sqrt(4 m Y12 + M12^2)) / 2``.
    """
    states = [s1, s2]
    cache = pairwise_cache(target, states)
    y12 = float(cache.Y[0, 1])
    if y12 <= S_TOL:
        # identical states: the mixture set is a single point
        return make_result(target, states, [1.0, 0.0], Branch.VERTEX, kkt=False)
    m12 = float(cache.M[0, 1])
    m_plus = 1.0 + 0.5 * float(cache.dots[0] + cache.dots[1])
    radicand = 4.0 * target.m * y12 + m12 * m12
    root = math.sqrt(radicand)
    p1 = 0.5 if root == 0.0 else 0.5 * (1.0 + m12 / root)
    p1 = min(1.0, max(0.0, p1))
    f2 = (2.0 * m_plus + root) / 4.0
    res = make_result(target, states, [p1, 1.0 - p1], Branch.INTERIOR, fidelity_sq=f2, cache=cache)
    if len(res.support) == 1:
        res = SolveResult(res.weights, res.distance, res.fidelity, res.support,
                          Branch.VERTEX, res.kkt_residual)
    return res


def solve_orthonormal_pair(target: TargetState, s1: PureState, s2: PureState) -> SolveResult:
    """Two orthogonal states: ``D = 1 - sqrt((1 + sqrt(2m + c^2)) / 2)``, ``c = r_o . r1``.

    For an orthonormal basis this is a coherence quantifier of the target.
    """
    overlap = 1.0 + float(np.dot(s1.bloch, s2.bloch))
    if overlap > ORTHO_TOL:
        raise NotOrthonormal(f"states are not orthogonal: 1 + r1.r2 = {overlap:.3g}")
    c = float(np.dot(target.r_o, s1.bloch))
    root = math.sqrt(2.0 * target.m + c * c)
    p1 = 0.5 if root == 0.0 else min(1.0, max(0.0, 0.5 * (1.0 + c / root)))
    f2 = 0.5 * (1.0 + root)
    res = make_result(target, [s1, s2], [p1, 1.0 - p1], Branch.INTERIOR, fidelity_sq=f2)
    if len(res.support) == 1:
        res = SolveResult(res.weights, res.distance, res.fidelity, res.support,
                          Branch.VERTEX, res.kkt_residual)
    return res


def triple_intermediates(target: TargetState, states, cache=None) -> TripleIntermediates:
    """Stationary point of F^2 on the plane of three Bloch vectors.

    ``pseudo_p`` is ``None`` when the triangle is degenerate (collinear
    vectors) or ``kappa`` vanishes.
    """
    if cache is None:
        cache = pairwise_cache(target, states)
    Y, M = cache.Y, cache.M
    y12, y13, y23 = float(Y[0, 1]), float(Y[0, 2]), float(Y[1, 2])
    m31, m32 = float(M[2, 0]), float(M[2, 1])
    y123 = y12 - y13 - y23
    gram = 4.0 * y13 * y23 - y123 * y123
    kappa = (m31 * m31 * y23 + m32 * m32 * y13 + m31 * m32 * y123 + gram * target.m)
    if gram <= DEGEN_TOL or kappa <= DEGEN_TOL:
        return TripleIntermediates(y123, gram, kappa, None)
    root = math.sqrt(y12 * y13 * y23 / kappa)
    p1 = (y23 * (y123 + 2.0 * y13) - (y123 * m32 + 2.0 * y23 * m31) * root) / gram
    p2 = (y13 * (y123 + 2.0 * y23) - (y123 * m31 + 2.0 * y13 * m32) * root) / gram
    return TripleIntermediates(y123, gram, kappa, np.array([p1, p2, 1.0 - p1 - p2]))


def _pairs_of_triple(target, states):
    candidates = []
    for i, j in combinations(range(3), 2):
        candidates.append(embed(solve_pair(target, states[i], states[j]), (i, j), 3))
    best = best_of(candidates)
    branch = Branch.VERTEX if len(best.support) == 1 else Branch.BOUNDARY_PAIR
    # recompute the residual against all three states so unsupported ones count
    return make_result(target, states, best.weights, branch, fidelity_sq=best.fidelity ** 2)


def solve_triple(target: TargetState, s1: PureState, s2: PureState, s3: PureState) -> SolveResult:
    """Optimal mixture of three pure states.

    A pure target makes the objective linear, so the best vertex wins.
    Otherwise the stationary point on the triangle's plane is used when its
    weights are valid (concavity makes it the global optimum), else the
    best edge.
    """
    states = [s1, s2, s3]
    cache = pairwise_cache(target, states)
    if target.m == 0.0:
        singles = [embed(solve_single(target, s), (i,), 3) for i, s in enumerate(states)]
        best = best_of(singles)
        return make_result(target, states, best.weights, Branch.VERTEX,
                           fidelity_sq=best.fidelity ** 2, cache=cache)
    inter = triple_intermediates(target, states, cache)
    p = inter.pseudo_p
    if p is not None and np.all(p >= -PSEUDO_TOL) and np.all(p <= 1.0 + PSEUDO_TOL):
        return make_result(target, states, p, Branch.INTERIOR, cache=cache)
    return _pairs_of_triple(target, states)


def _quad_matrix(states) -> np.ndarray:
    return np.vstack([bloch_matrix(states).T, np.ones(len(states))])


def exact_quad_decomposition(target: TargetState, states: Sequence[PureState]):
    """Write the target as an affine combination of four pure states.

    Solves ``A p = [r_o; 1]`` where column j of ``A`` is ``[r_j; 1]``.
    Returns a zero-distance :class:`SolveResult` when all weights lie in
    [0, 1], a :class:`NoExact` otherwise, and raises ``RankDeficient`` for
    coplanar Bloch vectors.
    """
    if len(states) != 4:
        raise ValueError(f"need exactly 4 states, got {len(states)}")
    A = _quad_matrix(states)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] < RANK_RTOL * sv[0]:
        raise RankDeficient(f"coplanar Bloch vectors: singular values {sv}")
    rhs = np.append(target.r_o, 1.0)
    p = np.linalg.solve(A, rhs)
    if np.all(p >= -PSEUDO_TOL) and np.all(p <= 1.0 + PSEUDO_TOL):
        return make_result(target, states, p, Branch.EXACT)
    return NoExact(p)


def quad_condition_number(states) -> float:
    return float(np.linalg.cond(_quad_matrix(states)))


# ---------------------------------------------------------------------------
# Eigenstates of two Pauli matrices


def pauli_states(axes=("x", "z")):
    """The set ``(+a, -a, +b, -b)`` of eigenstates of sigma_a and sigma_b."""
    a, b = _check_axes(axes)
    return [pauli_eigenstate(a, 1), pauli_eigenstate(a, -1),
            pauli_eigenstate(b, 1), pauli_eigenstate(b, -1)]


def _check_axes(axes):
    a, b = axes
    if a not in AXES or b not in AXES or a == b:
        raise ValueError(f"axes must be two distinct members of {AXES}, got {axes!r}")
    return a, b


def _pauli_components(r_o, axes):
    a, b = _check_axes(axes)
    (third,) = set(AXES) - {a, b}
    idx = {ax: i for i, ax in enumerate(AXES)}
    return float(r_o[idx[a]]), float(r_o[idx[b]]), float(r_o[idx[third]])


def pauli_distance_interior(r_third: float) -> float:
    """Distance when the optimum lies inside the square: depends on the
    out-of-plane component only."""
    return 1.0 - math.sqrt(0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - r_third * r_third))))


def pauli_distance_edge(ra: float, rb: float, m: float) -> float:
    """Distance when the optimum sits on the edge between ``+a`` and ``+b``
    (components taken nonnegative)."""
    inner = 2.0 + ra + rb + math.sqrt(4.0 * m + (ra - rb) ** 2)
    return 1.0 - 0.5 * math.sqrt(max(0.0, inner))


def pauli_t_interval(target: TargetState, axes=("x", "z")):
    ra, rb, rc = _pauli_components(target.r_o, axes)
    ra, rb = abs(ra), abs(rb)
    scale = math.sqrt(max(0.0, 1.0 - rc * rc))
    if scale == 0.0:
        return 0.0, 0.5
    return 0.0, 0.5 - (ra + rb) / (2.0 * scale)


def solve_pauli_quad(target: TargetState, axes=("x", "z"), t: Optional[float] = None) -> SolveResult:
    """Optimal mixture of the four eigenstates of two Pauli matrices.

    Weights are ordered ``(+a, -a, +b, -b)``. ``t`` picks a point on the
    line of optimal weights in the interior branch (default 0, the sparsest).
    """
    states = pauli_states(axes)
    ra, rb, rc = _pauli_components(target.r_o, axes)
    # reflect onto nonnegative components by swapping +/- labels
    flip_a, flip_b = ra < 0.0, rb < 0.0
    ra, rb = abs(ra), abs(rb)
    m = target.m
    if ra * rb <= m:
        scale = math.sqrt(max(0.0, 1.0 - rc * rc))
        lo, hi = pauli_t_interval(target, axes)
        hi = max(hi, 0.0)
        if t is None:
            t = 0.0
        elif not (lo - 1e-12 <= t <= hi + 1e-12):
            raise TOutOfRange(f"t={t!r} outside admissible interval [{lo:g}, {hi:g}]")
        if scale == 0.0:
            wa = wb = 0.0
        else:
            wa, wb = ra / scale, rb / scale
        p = np.array([0.5 * (1.0 + wa - wb) - t, 0.5 * (1.0 - wa - wb) - t, wb + t, t])
        d = pauli_distance_interior(rc)
        branch = Branch.PAULI_INTERIOR
    else:
        if t is not None:
            raise TOutOfRange("t is only meaningful in the interior branch")
        root = math.sqrt(4.0 * m + (ra - rb) ** 2)
        p1 = 0.5 if root == 0.0 else 0.5 * (1.0 + (ra - rb) / root)
        p = np.array([p1, 0.0, 1.0 - p1, 0.0])
        d = pauli_distance_edge(ra, rb, m)
        branch = Branch.PAULI_EDGE
    if flip_a:
        p[[0, 1]] = p[[1, 0]]
    if flip_b:
        p[[2, 3]] = p[[3, 2]]
    return make_result(target, states, p, branch, fidelity_sq=(1.0 - d) ** 2)
