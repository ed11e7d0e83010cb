"""Portfolio problem definition, diagonal encodings, and XY graphs.

The objective over selection bitstrings x (bit i = asset i, LSB first) is
f(x) = lambda * (q * x^T W x - mu^T x), restricted to popcount(x) = k.
Two independent routes compute the phase diagonal: `diagonal` evaluates f
directly, `ising_diagonal` goes through the ZZ/Z/constant coefficients of
the spin encoding x_i -> (1 - z_i)/2; they must agree bit-for-bit to
tolerance, which the tests enforce.
"""

from dataclasses import dataclass, replace
from itertools import combinations
from math import comb

import numpy as np

from .linalg import DENSE_CAP, HermitianMatrix
from .subspace import enumerate_basis, swap_partner_indices

W_SYMMETRY_ATOL = 1e-12
BRUTE_FORCE_CAP = 10_000_000
_CHUNK = 65536


@dataclass(frozen=True)
class PortfolioInstance:
    n: int
    k: int
    q: float
    mu: np.ndarray
    w: np.ndarray
    lam: float = 1.0
    seed: int | None = None
    provenance: str = ""

    def __post_init__(self):
        if not 0 < self.k < self.n:
            raise ValueError(f"need 0 < k < n, got n={self.n}, k={self.k}")
        if self.q <= 0:
            raise ValueError("risk factor q must be positive")
        if self.lam <= 0:
            raise ValueError("rescaling factor must be positive")
        mu = np.array(self.mu, dtype=np.float64)
        w = np.array(self.w, dtype=np.float64)
        if mu.shape != (self.n,):
            raise ValueError(f"mu has shape {mu.shape}, expected ({self.n},)")
        if w.shape != (self.n, self.n):
            raise ValueError(f"w has shape {w.shape}, expected square of {self.n}")
        scale = max(1.0, float(np.max(np.abs(w))))
        asym = float(np.max(np.abs(w - w.T)))
        if asym > W_SYMMETRY_ATOL * scale:
            raise ValueError(f"covariance is not symmetric (asymmetry {asym:.3e})")
        w = (w + w.T) / 2.0
        mu.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "w", w)

    def with_lambda(self, lam):
        return replace(self, lam=float(lam))


def instance_to_dict(inst):
    return {
        "n": inst.n,
        "k": inst.k,
        "q": inst.q,
        "lambda": inst.lam,
        "mu": inst.mu.tolist(),
        "w": inst.w.tolist(),
        "seed": inst.seed,
        "provenance": inst.provenance,
    }


def instance_from_dict(d):
    if "lambda" not in d:
        import warnings
        warnings.warn("instance record lacks 'lambda'; defaulting to 1")
    return PortfolioInstance(
        n=int(d["n"]),
        k=int(d["k"]),
        q=float(d["q"]),
        mu=np.array(d["mu"], dtype=np.float64),
        w=np.array(d["w"], dtype=np.float64),
        lam=float(d.get("lambda", 1.0)),
        seed=d.get("seed"),
        provenance=d.get("provenance", ""),
    )


def _bits_matrix(states, n):
    """(len(states), n) float array of bit values, bit i in column i."""
    s = np.asarray(states, dtype=np.int64)
    return ((s[:, None] >> np.arange(n)) & 1).astype(np.float64)


def objective(inst, x):
    """lambda * (q x^T W x - mu^T x) for an n-bit selection integer x."""
    bits = ((int(x) >> np.arange(inst.n)) & 1).astype(np.float64)
    return float(inst.lam * (inst.q * bits @ inst.w @ bits - inst.mu @ bits))


def diagonal(inst, basis):
    """Direct evaluation of the objective over the basis, in basis order."""
    if basis.n != inst.n:
        raise ValueError("basis and instance disagree on n")
    out = np.empty(basis.dim)
    for lo in range(0, basis.dim, _CHUNK):
        bits = _bits_matrix(basis.states[lo:lo + _CHUNK], inst.n)
        quad = np.einsum("ai,ij,aj->a", bits, inst.w, bits)
        out[lo:lo + bits.shape[0]] = inst.q * quad - bits @ inst.mu
    return inst.lam * out


def ising_coefficients(inst):
    """ZZ couplings (upper triangle), Z fields, and the constant of the
    spin encoding, such that the spin expansion reproduces the objective
    at z = 1 - 2x. Excludes the overall lambda factor."""
    jzz = (inst.q / 2.0) * inst.w.copy()
    jzz[np.diag_indices(inst.n)] = 0.0
    jzz = np.triu(jzz)
    hz = -0.5 * (inst.q * inst.w.sum(axis=1) - inst.mu)
    upper_row_sums = np.array(
        [inst.w[i, i:].sum() for i in range(inst.n)])
    const = 0.5 * float(np.sum(inst.q * upper_row_sums - inst.mu))
    return jzz, hz, const


def ising_diagonal(inst, basis):
    """Phase diagonal reconstructed from the spin-encoding coefficients."""
    if basis.n != inst.n:
        raise ValueError("basis and instance disagree on n")
    jzz, hz, const = ising_coefficients(inst)
    coupling = jzz + jzz.T
    out = np.empty(basis.dim)
    for lo in range(0, basis.dim, _CHUNK):
        z = 1.0 - 2.0 * _bits_matrix(basis.states[lo:lo + _CHUNK], inst.n)
        quad = 0.5 * np.einsum("ai,ij,aj->a", z, coupling, z)
        out[lo:lo + z.shape[0]] = quad + z @ hz + const
    return inst.lam * out


def brute_force_extrema(inst):
    """Exact (f_min, f_max, minimizers) over all weight-k bitstrings."""
    if comb(inst.n, inst.k) > BRUTE_FORCE_CAP:
        raise ValueError("subspace too large for brute force")
    basis = enumerate_basis(inst.n, inst.k)
    values = diagonal(inst, basis)
    f_min = float(values.min())
    f_max = float(values.max())
    minimizers = [int(s) for s in basis.states[values == values.min()]]
    return f_min, f_max, minimizers


def approximation_ratio(inst, x, extrema=None):
    """(f(x) - f_max)/(f_min - f_max) for feasible x, 0 otherwise;
    1 for feasible x when the instance is degenerate (f_min == f_max)."""
    if int(x).bit_count() != inst.k:
        return 0.0
    if extrema is None:
        extrema = brute_force_extrema(inst)
    f_min, f_max = extrema[0], extrema[1]
    if f_min == f_max:
        return 1.0
    return (objective(inst, x) - f_max) / (f_min - f_max)


@dataclass(frozen=True)
class XYGraph:
    n: int
    edges: tuple

    def __post_init__(self):
        norm = []
        for (i, j) in self.edges:
            if i == j:
                raise ValueError(f"self-loop ({i},{j})")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) out of range for n={self.n}")
            norm.append((min(i, j), max(i, j)))
        norm = tuple(sorted(norm))
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate edges")
        object.__setattr__(self, "edges", norm)


def ring_graph(n):
    if n < 3:
        raise ValueError("ring needs n >= 3")
    return XYGraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete_graph(n):
    if n < 3:
        raise ValueError("complete graph needs n >= 3")
    return XYGraph(n, tuple(combinations(range(n), 2)))


@dataclass(frozen=True)
class ChainDecomposition:
    """n/2 edge-disjoint Hamiltonian paths covering the complete graph;
    each chain keeps its edges in path order (needed downstream for the
    parity partition)."""
    n: int
    chains: tuple


def chain_decomposition(n):
    """Zigzag decomposition: chain v walks v, v+1, v-1, v+2, v-2, ... mod n."""
    if n % 2 != 0 or n < 4:
        raise ValueError("chain decomposition needs even n >= 4")
    chains = []
    for v in range(n // 2):
        verts = [v]
        for step in range(1, n):
            if step % 2 == 1:
                verts.append((v + (step + 1) // 2) % n)
            else:
                verts.append((v - step // 2) % n)
        chains.append(tuple(zip(verts[:-1], verts[1:])))
    dec = ChainDecomposition(n=n, chains=tuple(chains))

    seen = set()
    for chain in dec.chains:
        visited = [chain[0][0]] + [e[1] for e in chain]
        if sorted(visited) != list(range(n)):
            raise AssertionError("chain is not a Hamiltonian path")
        for (i, j) in chain:
            key = (min(i, j), max(i, j))
            if key in seen:
                raise AssertionError("chains are not edge-disjoint")
            seen.add(key)
    if len(seen) != n * (n - 1) // 2:
        raise AssertionError("chains do not cover the complete graph")
    return dec


def graph_from_chains(dec, subset):
    """Union of the selected chains' edges as an XYGraph."""
    subset = list(subset)
    if len(set(subset)) != len(subset):
        raise ValueError("duplicate chain indices")
    edges = []
    for idx in subset:
        if not 0 <= idx < len(dec.chains):
            raise ValueError(f"chain index {idx} out of range")
        edges.extend(dec.chains[idx])
    return XYGraph(dec.n, tuple(edges))


def mixing_hamiltonian(graph, basis):
    """Subspace matrix of the XY mixer sum: entry (a,b) counts 2 per edge
    whose bit swap maps basis state a to b; diagonal zero."""
    if graph.n != basis.n:
        raise ValueError("graph and basis disagree on n")
    if basis.dim > DENSE_CAP:
        raise ValueError(f"subspace dimension {basis.dim} exceeds dense cap {DENSE_CAP}")
    h = np.zeros((basis.dim, basis.dim))
    for (i, j) in graph.edges:
        ia, ib = swap_partner_indices(basis, i, j)
        h[ia, ib] += 2.0
        h[ib, ia] += 2.0
    return HermitianMatrix(h)
