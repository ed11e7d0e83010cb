"""Exact and Trotterized XY mixers, plus their error/spectral analysis.

A mixer application advances the state by e^{+i beta H_M} (see the kernel
docstring for why the maximal-eigenvector branch is the useful one).
Trotterized mixers decompose the edge set into ordered rotation "ops":

  single chain or ring   t2 parity-partitioned steps of angle beta/t2,
                         even-position edges first, then odd; an even-n
                         ring's closing edge joins the even group, an
                         odd-n ring's forms a third group applied last;
  union of chains        t1 repetitions of (chain 1, ..., chain m), each
                         advanced by beta/t1 and internally partitioned
                         into t2 steps of angle beta/(t1*t2).
"""

import warnings
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .linalg import (BRANCH_CUT_TOL, DEGENERACY_GAP, BranchCutWarning,
                     UnitaryMatrix, eigh, expm_i, spectral_norm,
                     unitary_eigensystem)
from .model import XYGraph, mixing_hamiltonian
from .subspace import SubspaceState, swap_partner_indices


@dataclass(frozen=True)
class MixerSpec:
    kind: str
    t1: int = 1
    t2: int = 1

    def __post_init__(self):
        if self.kind not in ("exact", "trotter"):
            raise ValueError(f"unknown mixer kind {self.kind!r}")
        if self.t1 < 1 or self.t2 < 1:
            raise ValueError("Trotter numbers must be >= 1")


def exact_mixer():
    return MixerSpec("exact")


def trotter_mixer(t1=1, t2=1):
    return MixerSpec("trotter", t1, t2)


@dataclass(frozen=True)
class MixerAnalysis:
    beta: float
    relative_unitary_error: float
    gs_fidelity: float


def _normalize(edge):
    i, j = edge
    return (min(i, j), max(i, j))


def _walk_from(adj, start, second=None):
    """Vertex sequence following degree-<=2 adjacency from start."""
    order = [start]
    prev = None
    cur = start
    if second is not None:
        order.append(second)
        prev, cur = start, second
    while True:
        nxt = [v for v in adj[cur] if v != prev]
        if not nxt:
            break
        if len(nxt) > 1:
            return None
        prev, cur = cur, nxt[0]
        if cur == start:
            break
        order.append(cur)
    return order


def _as_single_unit(graph):
    """(path_edges, closing_edge) if the edges form one path or cycle."""
    if not graph.edges:
        return None
    adj = defaultdict(list)
    for (i, j) in graph.edges:
        adj[i].append(j)
        adj[j].append(i)
    if any(len(nb) > 2 for nb in adj.values()):
        return None
    ends = sorted(v for v, nb in adj.items() if len(nb) == 1)
    if len(ends) == 2:
        order = _walk_from(adj, ends[0])
        if order is None or len(order) != len(adj):
            return None
        return [tuple(zip(order[:-1], order[1:])), None]
    if not ends:
        start = min(adj)
        order = _walk_from(adj, start, second=min(adj[start]))
        if order is None or len(order) != len(adj):
            return None
        path_edges = tuple(zip(order[:-1], order[1:]))
        return [path_edges, (order[-1], start)]
    return None


def _trotter_units(graph, chains):
    single = _as_single_unit(graph)
    if single is not None:
        return [single]
    if chains is None:
        raise ValueError(
            "Trotterizing a multi-chain graph requires a ChainDecomposition")
    gset = set(graph.edges)
    chosen = []
    cover = set()
    for chain in chains.chains:
        eset = {_normalize(e) for e in chain}
        if eset <= gset:
            chosen.append(chain)
            cover |= eset
    if cover != gset or sum(len(c) for c in chosen) != len(gset):
        raise ValueError("graph is not an exact union of decomposition chains")
    return [[tuple(chain), None] for chain in chosen]


def _unit_groups(path_edges, closing):
    """Ordered edge groups for one parity-partitioned step: even-position
    edges (1-based along the path) first, then odd; a cycle's closing edge
    joins the even group when the cycle is even, else trails as a third."""
    even = list(path_edges[1::2])
    odd = list(path_edges[0::2])
    groups = [even, odd]
    if closing is not None:
        n_cycle = len(path_edges) + 1
        if n_cycle % 2 == 0:
            even.append(closing)
        else:
            groups.append([closing])
    return groups


def trotter_op_stream(graph, chains, spec):
    """Flatten one mixer application into (edge_index, fraction) ops over
    graph.edges; rotating edge e by beta*fraction for each op, in order,
    realizes the Trotterized mixer."""
    units = _trotter_units(graph, chains)
    edge_index = {e: i for i, e in enumerate(graph.edges)}
    frac = 1.0 / (spec.t1 * spec.t2)
    op_edge = []
    for _ in range(spec.t1):
        for path_edges, closing in units:
            groups = _unit_groups(path_edges, closing)
            for _ in range(spec.t2):
                for group in groups:
                    op_edge.extend(edge_index[_normalize(e)] for e in group)
    op_frac = [frac] * len(op_edge)
    return list(graph.edges), op_edge, op_frac


def _pair_table(basis, edges):
    return [swap_partner_indices(basis, i, j) for (i, j) in edges]


def _apply_ops(amps, pairs, op_edge, op_frac, beta):
    """In-place rotation op stream on an amplitude vector or matrix of
    column states."""
    for e, frac in zip(op_edge, op_frac):
        ia, ib = pairs[e]
        theta = beta * frac
        c = np.cos(2.0 * theta)
        s = 1j * np.sin(2.0 * theta)
        a = amps[ia]
        b = amps[ib]
        amps[ia] = c * a + s * b
        amps[ib] = s * a + c * b


def apply_mixer(state, graph, beta, spec, chains=None):
    """Advance the state by one mixer application e^{+i beta H_M} (exact)
    or its Trotterization per the MixerSpec."""
    basis = state.basis
    if graph.n != basis.n:
        raise ValueError("graph and state disagree on n")
    amps = state.amplitudes.copy()
    if spec.kind == "exact":
        w, v = eigh(mixing_hamiltonian(graph, basis))
        amps = v @ (np.exp(1j * beta * w) * (v.conj().T @ amps))
    else:
        edges, op_edge, op_frac = trotter_op_stream(graph, chains, spec)
        pairs = _pair_table(basis, edges)
        _apply_ops(amps, pairs, op_edge, op_frac, beta)
    return SubspaceState(basis, amps)


def mixer_unitary(graph, beta, spec, basis, chains=None):
    """Dense subspace matrix of one mixer application."""
    if spec.kind == "exact":
        return expm_i(mixing_hamiltonian(graph, basis), -beta)
    edges, op_edge, op_frac = trotter_op_stream(graph, chains, spec)
    pairs = _pair_table(basis, edges)
    mat = np.eye(basis.dim, dtype=np.complex128)
    _apply_ops(mat, pairs, op_edge, op_frac, beta)
    return UnitaryMatrix(mat)


def trotter_error(graph, beta, spec, basis, chains=None):
    """Spectral-norm distance between the Trotterized and exact mixer
    unitaries (both unitary, so this is also the relative error)."""
    u_exact = mixer_unitary(graph, beta, exact_mixer(), basis)
    u_trot = mixer_unitary(graph, beta, spec, basis, chains=chains)
    return spectral_norm(u_exact.entries - u_trot.entries)


def commutator_bound(graph, beta, spec, basis, chains=None):
    """First-order bound (beta_step^2/2)*||[H_even, H_odd]|| telescoped
    over the steps, for genuine two-way splits (a single path, or an
    even cycle); None otherwise."""
    if spec.kind != "trotter":
        return None
    units = _trotter_units(graph, chains)
    if len(units) != 1:
        return None
    groups = _unit_groups(*units[0])
    if len(groups) != 2:
        return None
    h_even = mixing_hamiltonian(
        XYGraph(graph.n, tuple(groups[0])), basis).entries
    h_odd = mixing_hamiltonian(
        XYGraph(graph.n, tuple(groups[1])), basis).entries
    steps = spec.t1 * spec.t2
    comm = h_even @ h_odd - h_odd @ h_even
    return beta**2 / (2.0 * steps) * spectral_norm(comm)


def _phase_clusters(theta):
    """Clusters of near-degenerate eigenphases, circular at the cut."""
    order = np.argsort(theta, kind="stable")
    th = theta[order]
    clusters = []
    current = [order[0]]
    for i in range(1, th.shape[0]):
        if th[i] - th[i - 1] < DEGENERACY_GAP:
            current.append(order[i])
        else:
            clusters.append(current)
            current = [order[i]]
    clusters.append(current)
    if len(clusters) > 1 and (th[0] + 2.0 * np.pi) - th[-1] < DEGENERACY_GAP:
        clusters[0] = clusters.pop() + clusters[0]
    return clusters


def effective_ground_state(graph, beta, spec, basis, reference, chains=None):
    """Eigenstate of i*log(U_mixer) with maximal overlap against the
    reference, projecting the reference inside degenerate eigenphase
    clusters; returns (state, gs_fidelity)."""
    u = mixer_unitary(graph, beta, spec, basis, chains=chains)
    theta, z = unitary_eigensystem(u.entries)
    if np.any(np.pi - np.abs(theta) < BRANCH_CUT_TOL):
        warnings.warn(
            "eigenphase within tolerance of the -pi/pi branch cut; "
            "cluster assignment may wrap", BranchCutWarning, stacklevel=2)
    ref = reference.amplitudes
    comps = z.conj().T @ ref
    weights = np.abs(comps) ** 2
    best_overlap = -1.0
    best_cluster = None
    for cluster in _phase_clusters(theta):
        overlap = float(weights[cluster].sum())
        if overlap > best_overlap + 1e-15:
            best_overlap = overlap
            best_cluster = cluster
    proj = z[:, best_cluster] @ comps[best_cluster]
    proj = proj / np.linalg.norm(proj)
    return SubspaceState(basis, proj), best_overlap


def analyze_mixer(graph, beta, spec, basis, reference, chains=None):
    """Trotter error and GS fidelity of one mixer setting."""
    err = trotter_error(graph, beta, spec, basis, chains=chains)
    _, fid = effective_ground_state(graph, beta, spec, basis, reference,
                                    chains=chains)
    return MixerAnalysis(beta=beta, relative_unitary_error=err,
                         gs_fidelity=fid)
