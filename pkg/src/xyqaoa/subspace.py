"""States and weight-preserving gates in the Hamming-weight-k subspace.

Basis states are the C(n,k) integers of popcount k in increasing order,
bit 0 = asset 0 = least significant bit. All gates act directly on the
C(n,k)-dimensional amplitude vector; nothing here touches the 2^n space.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np

MAX_QUBITS = 32
MAX_SUBSPACE_DIM = 2_000_000


def enumerate_states(n, k):
    """All weight-k n-bit integers in increasing order (Gosper's hack)."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if n > MAX_QUBITS:
        raise ValueError(f"n={n} exceeds the {MAX_QUBITS}-qubit cap")
    dim = comb(n, k)
    if dim > MAX_SUBSPACE_DIM:
        raise ValueError(f"subspace dimension {dim} exceeds cap {MAX_SUBSPACE_DIM}")
    if k == 0:
        return np.zeros(1, dtype=np.int64)
    out = np.empty(dim, dtype=np.int64)
    v = (1 << k) - 1
    limit = 1 << n
    i = 0
    while v < limit:
        out[i] = v
        i += 1
        c = v & -v
        r = v + c
        v = r | (((v ^ r) >> 2) // c)
    return out


@dataclass(frozen=True)
class FeasibleBasis:
    n: int
    k: int
    states: np.ndarray
    _index: dict = field(repr=False)

    @property
    def dim(self):
        return self.states.shape[0]

    def index_of(self, state):
        try:
            return self._index[int(state)]
        except KeyError:
            raise ValueError(f"state {state:#x} is not in the weight-{self.k} subspace")


def enumerate_basis(n, k):
    states = enumerate_states(n, k)
    index = {int(s): i for i, s in enumerate(states)}
    return FeasibleBasis(n=n, k=k, states=states, _index=index)


@dataclass
class SubspaceState:
    basis: FeasibleBasis
    amplitudes: np.ndarray

    def copy(self):
        return SubspaceState(self.basis, self.amplitudes.copy())

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


def dicke_state(basis):
    """Uniform superposition over all weight-k basis states."""
    amps = np.full(basis.dim, 1.0 / np.sqrt(basis.dim), dtype=np.complex128)
    return SubspaceState(basis, amps)


def basis_state(basis, state):
    amps = np.zeros(basis.dim, dtype=np.complex128)
    amps[basis.index_of(state)] = 1.0
    return SubspaceState(basis, amps)


def swap_partner_indices(basis, i, j):
    """Index pairs (ia, ib) of basis states mapped to each other by
    swapping bits i and j; states with equal bits at (i, j) have no partner."""
    if i == j:
        raise ValueError("pair indices must differ")
    if not (0 <= i < basis.n and 0 <= j < basis.n):
        raise ValueError(f"pair ({i},{j}) out of range for n={basis.n}")
    s = basis.states
    mask = (((s >> i) & 1) == 1) & (((s >> j) & 1) == 0)
    ia = np.nonzero(mask)[0].astype(np.int64)
    partners = s[ia] ^ ((1 << i) | (1 << j))
    ib = np.searchsorted(s, partners).astype(np.int64)
    return ia, ib


def apply_xy_rotation(state, pair, beta):
    """Rotate by the XX+YY term on one pair: amplitudes of swap-partner
    states (a, b) map to (cos(2b)a + i sin(2b)b, i sin(2b)a + cos(2b)b);
    states with equal bits on the pair are untouched."""
    i, j = pair
    ia, ib = swap_partner_indices(state.basis, i, j)
    amps = state.amplitudes.copy()
    c = np.cos(2.0 * beta)
    s = 1j * np.sin(2.0 * beta)
    a = amps[ia]
    b = amps[ib]
    amps[ia] = c * a + s * b
    amps[ib] = s * a + c * b
    return SubspaceState(state.basis, amps)


def apply_phase(state, diag, gamma):
    """Multiply amplitude_i by exp(-i * gamma * diag_i)."""
    diag = np.asarray(diag, dtype=np.float64)
    if diag.shape != (state.basis.dim,):
        raise ValueError(
            f"diag has shape {diag.shape}, expected ({state.basis.dim},)")
    amps = state.amplitudes * np.exp(-1j * gamma * diag)
    return SubspaceState(state.basis, amps)


def fidelity(a, b):
    """|<a|b>|^2."""
    if a.basis is not b.basis and (a.basis.n != b.basis.n or a.basis.k != b.basis.k):
        raise ValueError("states live on different bases")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def feasible_fraction(n, k):
    """Fraction of the 2^n bitstrings that satisfy the weight constraint."""
    return comb(n, k) / float(2**n)
