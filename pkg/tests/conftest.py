"""Shared oracle helpers: dense full-space (2^n) XY evolution against which
the subspace implementations are checked."""

import numpy as np
from scipy.linalg import expm


def dense_xy_hamiltonian(n, edges):
    """XY Hamiltonian over all 2^n bitstrings: entry 2 between every pair
    of masks related by moving an excitation across an edge."""
    dim = 1 << n
    h = np.zeros((dim, dim))
    for (i, j) in edges:
        for s in range(dim):
            if (s >> i) & 1 and not (s >> j) & 1:
                t = s ^ ((1 << i) | (1 << j))
                h[s, t] += 2.0
                h[t, s] += 2.0
    return h


def dense_xy_evolution(n, edges, beta):
    """Full-space unitary exp(+i beta H_xy)."""
    return expm(1j * beta * dense_xy_hamiltonian(n, edges))


def embed(basis, amps):
    """Lift subspace amplitudes into the full 2^n vector."""
    vec = np.zeros(1 << basis.n, dtype=np.complex128)
    vec[basis.states] = amps
    return vec


def restrict(basis, vec):
    """Project a full-space vector onto the weight-k coordinates."""
    return np.ascontiguousarray(vec[basis.states])


def random_subspace_state(basis, rng):
    amps = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
    return amps / np.linalg.norm(amps)
