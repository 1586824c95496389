"""Qubit states in the Bloch representation and the mixture fidelity.

A qubit density matrix is ``rho = (I + r . sigma) / 2``. For a target
``rho`` with Bloch vector ``r_o`` and a mixture ``chi = sum_i p_i |phi_i><phi_i|``
of pure states with unit Bloch vectors ``r_i`` the squared Uhlmann fidelity is

    F^2 = 1/2 + sum_i p_i (r_o . r_i) / 2 + sqrt(m / 2) * sqrt(s)

with mixedness ``m = 1 - Tr rho^2 = (1 - |r_o|^2) / 2`` and
``s = p^T Y p``, ``Y_ij = 1 - r_i . r_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadWeights,
    NotHermitian,
    NotNormalized,
    NotPositive,
    NotUnitBloch,
    NotUnitTrace,
    ParamOutOfRange,
    ZeroVector,
)

HERMITIAN_TOL = 1e-9
TRACE_TOL = 1e-9
PSD_TOL = 1e-9
BALL_TOL = 1e-9
WEIGHT_TOL = 1e-9
# Printed 4-decimal amplitudes miss unit norm by ~2e-5, so 1e-6 is too strict.
NORM_TOL = 1e-3
ZERO_NORM = 1e-6

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
IDENTITY = np.eye(2, dtype=complex)


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized qubit ket together with its (unit) Bloch vector."""

    amplitudes: np.ndarray
    bloch: np.ndarray

    def density(self):
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True, eq=False)
class TargetState:
    """Validated density matrix with cached Bloch vector and mixedness."""

    matrix: np.ndarray
    r_o: np.ndarray
    m: float


@dataclass(frozen=True, eq=False)
class PairwiseCache:
    """Pairwise quantities of a pure-state set against a target.

    ``Y[i, j] = 1 - r_i . r_j``, ``M[i, j] = dots[i] - dots[j]`` and
    ``dots[i] = r_o . r_i``.
    """

    Y: np.ndarray
    M: np.ndarray
    dots: np.ndarray


def bloch_of_density(matrix) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    return np.array([
        2.0 * matrix[1, 0].real,
        2.0 * matrix[1, 0].imag,
        (matrix[0, 0] - matrix[1, 1]).real,
    ])


def density_from_bloch(r) -> np.ndarray:
    x, y, z = np.asarray(r, dtype=float)
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]])


def _mixedness(r_o) -> float:
    return max(0.0, 0.5 * (1.0 - float(np.dot(r_o, r_o))))


def _target(matrix) -> TargetState:
    r_o = bloch_of_density(matrix)
    return TargetState(_frozen(matrix), _frozen(r_o), _mixedness(r_o))


def validate_density(matrix, tol: float = HERMITIAN_TOL) -> TargetState:
    """Check that ``matrix`` is a qubit density matrix and wrap it.

    Small violations (up to ``tol``) are repaired: the matrix is
    symmetrized and its trace renormalized. Larger ones raise.
    """
    matrix = np.array(matrix, dtype=complex)
    if matrix.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {matrix.shape}")
    herm_err = float(np.max(np.abs(matrix - matrix.conj().T)))
    if herm_err > tol:
        raise NotHermitian(f"matrix is not Hermitian: max |A - A^H| = {herm_err:.3g}")
    matrix = 0.5 * (matrix + matrix.conj().T)
    trace = float(np.trace(matrix).real)
    if abs(trace - 1.0) > tol:
        raise NotUnitTrace(f"trace is {trace!r}, off by {abs(trace - 1.0):.3g}")
    matrix = matrix / trace
    lowest = float(np.linalg.eigvalsh(matrix)[0])
    if lowest < -tol:
        raise NotPositive(f"matrix has negative eigenvalue {lowest:.3g}")
    return _target(matrix)


def target_from_bloch(r, tol: float = BALL_TOL) -> TargetState:
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError(f"Bloch vector needs 3 components, got shape {r.shape}")
    norm = float(np.linalg.norm(r))
    if norm > 1.0 + tol:
        raise NotPositive(f"Bloch vector norm {norm!r} exceeds 1")
    return _target(density_from_bloch(r))


def target_from_params(a: float, k: float, phi: float) -> TargetState:
    """Target family ``[[1-a, c e^{-i phi}], [c e^{i phi}, a]]``, ``c = k sqrt(a(1-a))``."""
    for name, value, hi in (("a", a, 1.0), ("k", k, 1.0), ("phi", phi, 2 * math.pi)):
        if not (0.0 <= value <= hi + 1e-12) or not math.isfinite(value):
            raise ParamOutOfRange(f"{name}={value!r} outside [0, {hi:g}]")
    c = k * math.sqrt(a * (1.0 - a))
    matrix = np.array([
        [1.0 - a, c * np.exp(-1j * phi)],
        [c * np.exp(1j * phi), a],
    ])
    return _target(matrix)


def bloch_of_pure(amplitudes, tol: float = NORM_TOL) -> PureState:
    """Build a :class:`PureState` from two complex amplitudes.

    The amplitudes are renormalized when their norm is within ``tol`` of 1.
    """
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if psi.shape != (2,):
        raise ValueError(f"qubit ket needs 2 amplitudes, got {psi.shape[0]}")
    norm = float(np.linalg.norm(psi))
    if norm < ZERO_NORM:
        raise ZeroVector(f"amplitude norm {norm:.3g} is too small")
    if abs(norm - 1.0) > tol:
        raise NotNormalized(f"amplitude norm {norm!r} is not 1 within {tol:g}")
    psi = psi / norm
    cross = psi[0].conjugate() * psi[1]
    r = np.array([2 * cross.real, 2 * cross.imag, abs(psi[0]) ** 2 - abs(psi[1]) ** 2])
    r = r / np.linalg.norm(r)
    return PureState(_frozen(psi), _frozen(r))


def pure_from_bloch(r, tol: float = 1e-6) -> PureState:
    r = np.asarray(r, dtype=float)
    norm = float(np.linalg.norm(r))
    if abs(norm - 1.0) > tol:
        raise NotUnitBloch(f"pure-state Bloch vector has norm {norm!r}")
    x, y, z = r / norm
    theta = math.acos(max(-1.0, min(1.0, z)))
    phi = math.atan2(y, x)
    psi = np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
    return bloch_of_pure(psi)


def pauli_eigenstate(axis: str, sign: int) -> PureState:
    """Eigenstate of sigma_axis with eigenvalue ``sign`` (+1 or -1)."""
    s = 1.0 if sign > 0 else -1.0
    h = 1 / math.sqrt(2)
    kets = {
        "x": [h, s * h],
        "y": [h, s * 1j * h],
        "z": [1.0, 0.0] if s > 0 else [0.0, 1.0],
    }
    return bloch_of_pure(kets[axis])


def bloch_matrix(states) -> np.ndarray:
    return np.array([s.bloch for s in states], dtype=float).reshape(-1, 3)


def pairwise_cache(target: TargetState, states) -> PairwiseCache:
    if len(states) == 0:
        raise ValueError("state set is empty")
    R = bloch_matrix(states)
    Y = 1.0 - R @ R.T
    np.fill_diagonal(Y, 0.0)
    dots = R @ target.r_o
    M = dots[:, None] - dots[None, :]
    return PairwiseCache(_frozen(Y), _frozen(M), _frozen(dots))


def check_weights(weights, n, tol: float = WEIGHT_TOL) -> np.ndarray:
    p = np.asarray(weights, dtype=float)
    if p.shape[-1] != n:
        raise BadWeights(f"expected {n} weights, got {p.shape[-1]}")
    if np.any(p < -tol):
        raise BadWeights(f"negative weight {float(p.min())!r}")
    err = np.max(np.abs(p.sum(axis=-1) - 1.0))
    if err > tol:
        raise BadWeights(f"weights sum off by {float(err):.3g}")
    return p


def fidelity_sq_mixture(target: TargetState, states, weights, cache=None, check=True):
    """Squared fidelity between ``target`` and the mixture with ``weights``.

    ``weights`` may be a single vector of length N or a stack of shape
    ``(K, N)``; the result is then a float or a length-K array.
    """
    if cache is None:
        cache = pairwise_cache(target, states)
    n = len(cache.dots)
    p = check_weights(weights, n) if check else np.asarray(weights, dtype=float)
    s = np.einsum("...i,...i->...", p @ cache.Y, p)
    f2 = 0.5 + 0.5 * (p @ cache.dots) + math.sqrt(target.m / 2.0) * np.sqrt(np.maximum(s, 0.0))
    f2 = np.clip(f2, 0.0, 1.0)
    return float(f2) if np.ndim(f2) == 0 else f2


def distance(fidelity_sq) -> float:
    return 1.0 - math.sqrt(min(1.0, max(0.0, float(fidelity_sq))))


def mixture_density(states, weights) -> np.ndarray:
    return sum(w * s.density() for w, s in zip(weights, states))
