"""Exhaustive simplex-grid search, the brute-force reference for the solvers.

Weights ``p_1..p_{N-1}`` run over multiples of ``step`` with
``p_N = 1 - sum``; every lattice point is scored with
:func:`~qubit_approx.bloch.fidelity_sq_mixture`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional

import numpy as np

from .bloch import fidelity_sq_mixture, pairwise_cache
from .closed_form import Branch, SolveResult, make_result
from .errors import BudgetExceeded

DEFAULT_CAP = 10 ** 8
CAP_ENV = "QUBIT_APPROX_MAX_EVALS"


@dataclass(frozen=True)
class GridSpec:
    step: float = 0.001
    refine_rounds: int = 0
    refine_factor: float = 10.0
    max_evaluations: Optional[int] = None

    def __post_init__(self):
        if not (0.0 < self.step <= 0.5):
            raise ValueError(f"step must be in (0, 0.5], got {self.step!r}")
        if self.refine_rounds < 0:
            raise ValueError("refine_rounds must be >= 0")
        if self.refine_factor <= 1.0:
            raise ValueError("refine_factor must exceed 1")


def default_spec(n_states: int) -> GridSpec:
    if n_states <= 3:
        return GridSpec(step=0.001)
    return GridSpec(step=0.02, refine_rounds=2, refine_factor=10.0)


def evaluation_cap(spec: Optional[GridSpec] = None) -> int:
    if spec is not None and spec.max_evaluations is not None:
        return int(spec.max_evaluations)
    return int(os.environ.get(CAP_ENV, DEFAULT_CAP))


def _divisions(step: float) -> int:
    return int(math.floor(1.0 / step + 1e-9))


def lattice_size(n_states: int, step: float) -> int:
    """Stars-and-bars count of lattice points on the simplex."""
    return math.comb(_divisions(step) + n_states - 1, n_states - 1)


def _refine_span(spec: GridSpec) -> int:
    return int(round(spec.refine_factor))


def required_evaluations(n_states: int, spec: GridSpec) -> int:
    total = lattice_size(n_states, spec.step)
    per_round = (2 * _refine_span(spec) + 1) ** (n_states - 1)
    return total + spec.refine_rounds * per_round


@lru_cache(maxsize=8)
def _triangle(n: int) -> np.ndarray:
    """All (i, j) with i + j <= n, as an int array of shape (K, 2)."""
    i, j = np.triu_indices(n + 1)
    # triu gives j >= i; map to (i, j - i) which covers i + j' <= n
    pts = np.stack([i, j - i], axis=1)
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    pts.setflags(write=False)
    return pts


def lattice_counts(n_states: int, n: int):
    """Yield int arrays of the leading ``n_states - 1`` counts, sum <= n."""
    lead = n_states - 1
    if lead == 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    if lead == 1:
        yield np.arange(n + 1, dtype=np.int64)[:, None]
        return
    outer = lead - 2
    for head in product(range(n + 1), repeat=outer):
        used = sum(head)
        if used > n:
            continue
        tail = _triangle(n - used)
        block = np.empty((len(tail), lead), dtype=np.int64)
        block[:, :outer] = head
        block[:, outer:] = tail
        yield block


def lattice_weights(n_states: int, step: float):
    """Yield blocks of simplex lattice weights, shape (K, n_states)."""
    n = _divisions(step)
    exact = abs(n * step - 1.0) < 1e-9
    for counts in lattice_counts(n_states, n):
        lead = counts / n if exact else counts * step
        last = np.clip(1.0 - lead.sum(axis=1, keepdims=True), 0.0, None)
        yield np.hstack([lead, last])


def _pick(values, weights, best):
    """Merge block maximum into ``best = (f2, weights)`` with the tie-break."""
    top = values.max()
    if best is not None and top < best[0]:
        return best
    rows = np.flatnonzero(values == top)
    cands = [weights[r] for r in rows]
    if best is not None and top == best[0]:
        cands.append(best[1])
    key = lambda p: (len(np.flatnonzero(p > 1e-9)), tuple(np.flatnonzero(p > 1e-9)))
    return top, min(cands, key=key)


def _scan(target, states, blocks, cache, best=None):
    count = 0
    for w in blocks:
        f2 = fidelity_sq_mixture(target, states, w, cache=cache, check=False)
        count += len(w)
        best = _pick(np.atleast_1d(f2), w, best)
    return best, count


def _result(target, states, best, cache, count):
    res = make_result(target, states, best[1], Branch.GRID, fidelity_sq=best[0],
                      cache=cache, kkt=False)
    return SolveResult(res.weights, res.distance, res.fidelity, res.support,
                       res.branch, None, count)


def _box_offsets(n_states, span):
    rng = np.arange(-span, span + 1)
    grids = np.meshgrid(*([rng] * (n_states - 1)), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _box_candidates(incumbent, radius, step):
    p0 = np.asarray(incumbent, dtype=float)
    n = len(p0)
    span = int(math.floor(radius / step + 1e-9)) if radius > 0 else 0
    if n == 1 or span == 0:
        return p0[None, :]
    lead = p0[:-1] + _box_offsets(n, span) * step
    last = 1.0 - lead.sum(axis=1)
    ok = (lead >= -1e-12).all(axis=1) & (last >= -1e-12) & (np.abs(last - p0[-1]) <= radius + 1e-12)
    w = np.hstack([lead[ok], last[ok, None]])
    return np.clip(w, 0.0, None)


def local_refine(target, states, incumbent_weights, radius: float, step: float) -> SolveResult:
    """Grid search on the simplex intersected with a box around the incumbent.

    The incumbent itself is a candidate, so the distance never increases.
    """
    cache = pairwise_cache(target, states)
    p0 = np.asarray(incumbent_weights, dtype=float)
    start = (fidelity_sq_mixture(target, states, p0, cache=cache), p0)
    cands = _box_candidates(p0, radius, step)
    best, count = _scan(target, states, [cands], cache, best=start)
    return _result(target, states, best, cache, count)


def grid_search(target, states, spec: Optional[GridSpec] = None) -> SolveResult:
    """Lattice point with the largest squared fidelity.

    Raises :class:`BudgetExceeded` before doing any work if the lattice
    plus refinement rounds exceed the evaluation cap.
    """
    n_states = len(states)
    spec = spec or default_spec(n_states)
    need = required_evaluations(n_states, spec)
    cap = evaluation_cap(spec)
    if need > cap:
        raise BudgetExceeded(need, cap)
    cache = pairwise_cache(target, states)
    best, count = _scan(target, states, lattice_weights(n_states, spec.step), cache)
    step = spec.step
    for _ in range(spec.refine_rounds):
        fine = step / spec.refine_factor
        cands = _box_candidates(best[1], step, fine)
        best, extra = _scan(target, states, [cands], cache, best=best)
        count += extra
        step = fine
    return _result(target, states, best, cache, count)
