"""Random instance generators and an oracle independent of the package."""

import math

import numpy as np

import qubit_approx as qa

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def haar_ket(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def haar_state(rng):
    return qa.bloch_of_pure(haar_ket(rng))


def random_target(rng):
    return qa.target_from_params(rng.uniform(), rng.uniform(), rng.uniform(0, 2 * math.pi))


def random_weights(rng, n):
    return rng.dirichlet(np.ones(n))


def expectation_bloch(psi):
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.array([np.vdot(psi, P @ psi).real for P in (SX, SY, SZ)])


def det_mixture(kets, weights):
    """det(sum p_i |psi_i><psi_i|) by Cauchy-Binet: no cancellation for near-pure mixtures."""
    total = 0.0
    for i in range(len(kets)):
        for j in range(i + 1, len(kets)):
            d = kets[i][0] * kets[j][1] - kets[i][1] * kets[j][0]
            total += weights[i] * weights[j] * abs(d) ** 2
    return total


def direct_fidelity_sq(rho, kets, weights):
    """Qubit fidelity from F^2 = Tr(rho chi) + 2 sqrt(det rho det chi), on matrices."""
    kets = [np.asarray(k, dtype=complex) / np.linalg.norm(k) for k in kets]
    chi = sum(w * np.outer(k, k.conj()) for w, k in zip(weights, kets))
    tr = np.trace(rho @ chi).real
    det_rho = (rho[0, 0] * rho[1, 1]).real - abs(rho[0, 1]) ** 2
    return float(tr + 2.0 * np.sqrt(max(0.0, det_rho) * det_mixture(kets, weights)))


def _psd_sqrt(a):
    w, v = np.linalg.eigh(a)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def uhlmann_fidelity_sq(rho, chi):
    """(Tr sqrt(sqrt(rho) chi sqrt(rho)))^2 by eigendecomposition."""
    q = _psd_sqrt(rho)
    w = np.linalg.eigvalsh(q @ chi @ q)
    return float(np.sum(np.sqrt(np.clip(w, 0, None))) ** 2)


def mixture(states, weights):
    return sum(w * np.outer(s.amplitudes, s.amplitudes.conj()) for w, s in zip(weights, states))


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
