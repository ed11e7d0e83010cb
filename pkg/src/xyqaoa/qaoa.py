"""Initial states, depth-p circuit evaluation, and measurement sampling.

A depth-p circuit alternates the phase layer exp(-i gamma_l diag) with one
mixer application for l = 1..p. CircuitEvaluator compiles one (instance,
init, graph, mixer) setting into flat arrays and dispatches the hot loops
(energies, gradients, depth-1 grids) to the selected kernel backend.
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .linalg import DEGENERACY_GAP, eigh
from .mixers import MixerSpec, trotter_op_stream
from .model import diagonal, mixing_hamiltonian
from .subspace import SubspaceState, dicke_state, enumerate_basis


@dataclass(frozen=True)
class InitialStateSpec:
    kind: str
    graph: object = None
    amplitudes: tuple = None
    extremal: str = "max"

    def __post_init__(self):
        if self.kind not in ("aligned", "dicke", "explicit"):
            raise ValueError(f"unknown initial-state kind {self.kind!r}")
        if self.kind == "aligned" and self.graph is None:
            raise ValueError("aligned initial state needs a graph")
        if self.extremal not in ("max", "min"):
            raise ValueError("extremal must be 'max' or 'min'")


def aligned_to(graph, extremal="max"):
    return InitialStateSpec("aligned", graph=graph, extremal=extremal)


def dicke_init():
    return InitialStateSpec("dicke")


def explicit_init(amplitudes):
    amps = np.asarray(amplitudes, dtype=np.complex128)
    norm = np.linalg.norm(amps)
    if norm < 1e-15:
        raise ValueError("explicit initial state must be nonzero")
    return InitialStateSpec("explicit", amplitudes=tuple(amps / norm))


def initial_state(spec, basis):
    """Build the initial state: the extremal eigenstate of the graph's
    mixing Hamiltonian (Dicke-projected tie-break inside a degenerate
    extremal cluster), the Dicke state, or explicit amplitudes."""
    if spec.kind == "dicke":
        return dicke_state(basis)
    if spec.kind == "explicit":
        return SubspaceState(basis, np.array(spec.amplitudes,
                                             dtype=np.complex128))
    w, v = eigh(mixing_hamiltonian(spec.graph, basis))
    target = w[-1] if spec.extremal == "max" else w[0]
    cluster = np.nonzero(np.abs(w - target) < DEGENERACY_GAP)[0]
    ref = dicke_state(basis).amplitudes
    comps = v[:, cluster].conj().T @ ref
    norm = np.linalg.norm(comps)
    if norm < 1e-12:
        # reference orthogonal to the cluster: fall back to the extremal
        # eigenvector with a canonical sign
        vec = v[:, cluster[-1]].astype(np.complex128)
        pivot = np.argmax(np.abs(vec))
        vec = vec * (np.conj(vec[pivot]) / abs(vec[pivot]))
        return SubspaceState(basis, vec)
    amps = (v[:, cluster] @ comps) / norm
    return SubspaceState(basis, amps.astype(np.complex128))


@dataclass(frozen=True)
class QaoaParams:
    gammas: tuple
    betas: tuple

    def __post_init__(self):
        if len(self.gammas) != len(self.betas) or len(self.gammas) < 1:
            raise ValueError("gammas and betas must have equal positive length")
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))

    @property
    def p(self):
        return len(self.gammas)

    def as_theta(self):
        return np.array(self.gammas + self.betas)


@dataclass
class CircuitResult:
    final_state: SubspaceState
    energy: float
    expected_ar: float


class CircuitEvaluator:
    """One compiled circuit setting; all evaluation entry points are pure
    functions of the parameters, so an evaluator can be shared."""

    def __init__(self, inst, graph, mixer_spec, init, chains=None, basis=None):
        if basis is None:
            basis = enumerate_basis(inst.n, inst.k)
        self.basis = basis
        self.diag = np.ascontiguousarray(diagonal(inst, basis))
        self.dmin = float(self.diag.min())
        self.dmax = float(self.diag.max())
        self.init_amps = np.ascontiguousarray(
            initial_state(init, basis).amplitudes, dtype=np.complex128)
        self.mixer_spec = mixer_spec
        self._kern = backend.kernels()
        if mixer_spec.kind == "exact":
            w, v = eigh(mixing_hamiltonian(graph, basis))
            # kernel convention: mixer phases exp(+i beta eig)
            self.eigs = np.ascontiguousarray(w)
            self.evecs = np.ascontiguousarray(v, dtype=np.complex128)
            self.evecs_h = np.ascontiguousarray(v.conj().T)
        else:
            edges, op_edge, op_frac = trotter_op_stream(graph, chains,
                                                        mixer_spec)
            from .subspace import swap_partner_indices
            pa, pb, eoff = [], [], [0]
            for (i, j) in edges:
                ia, ib = swap_partner_indices(basis, i, j)
                pa.append(ia)
                pb.append(ib)
                eoff.append(eoff[-1] + ia.shape[0])
            self.pa = np.concatenate(pa) if pa else np.zeros(0, np.int64)
            self.pb = np.concatenate(pb) if pb else np.zeros(0, np.int64)
            self.eoff = np.array(eoff, dtype=np.int64)
            self.op_edge = np.array(op_edge, dtype=np.int64)
            self.op_frac = np.array(op_frac, dtype=np.float64)

    def ar_from_energy(self, energy):
        if self.dmin == self.dmax:
            return 1.0
        return (energy - self.dmax) / (self.dmin - self.dmax)

    def _advance(self, amps, gammas, betas):
        if self.mixer_spec.kind == "exact":
            self._kern.run_exact(amps, self.diag, gammas, betas, self.evecs,
                                 self.evecs_h, self.eigs)
        else:
            self._kern.run_trotter(amps, self.diag, gammas, betas, self.pa,
                                   self.pb, self.eoff, self.op_edge,
                                   self.op_frac)

    def evolve(self, params):
        gammas = np.asarray(params.gammas, dtype=np.float64)
        betas = np.asarray(params.betas, dtype=np.float64)
        amps = self.init_amps.copy()
        self._advance(amps, gammas, betas)
        return amps

    def energy(self, params):
        gammas = np.asarray(params.gammas, dtype=np.float64)
        betas = np.asarray(params.betas, dtype=np.float64)
        if self.mixer_spec.kind == "exact":
            return self._kern.energy_exact(self.init_amps, self.diag, gammas,
                                           betas, self.evecs, self.evecs_h,
                                           self.eigs)
        return self._kern.energy_trotter(self.init_amps, self.diag, gammas,
                                         betas, self.pa, self.pb, self.eoff,
                                         self.op_edge, self.op_frac)

    def value_and_grad(self, theta, rel_step):
        theta = np.ascontiguousarray(theta, dtype=np.float64)
        if self.mixer_spec.kind == "exact":
            return self._kern.fg_exact(self.init_amps, self.diag, theta,
                                       rel_step, self.evecs, self.evecs_h,
                                       self.eigs)
        return self._kern.fg_trotter(self.init_amps, self.diag, theta,
                                     rel_step, self.pa, self.pb, self.eoff,
                                     self.op_edge, self.op_frac)

    def grid_energies(self, gamma_grid, beta_grid):
        """Depth-1 energies over a parameter grid, shape (len(gamma_grid),
        len(beta_grid))."""
        gg = np.ascontiguousarray(gamma_grid, dtype=np.float64)
        bg = np.ascontiguousarray(beta_grid, dtype=np.float64)
        if self.mixer_spec.kind == "exact":
            return self._kern.grid_exact(self.init_amps, self.diag, gg, bg,
                                         self.evecs, self.evecs_h, self.eigs)
        return self._kern.grid_trotter(self.init_amps, self.diag, gg, bg,
                                       self.pa, self.pb, self.eoff,
                                       self.op_edge, self.op_frac)

    def run(self, params):
        amps = self.evolve(params)
        energy = self._kern.state_energy(amps, self.diag)
        return CircuitResult(
            final_state=SubspaceState(self.basis, amps),
            energy=energy,
            expected_ar=self.ar_from_energy(energy),
        )


def run_circuit(inst, graph, mixer_spec, init, params, chains=None,
                basis=None):
    """Evaluate one depth-p circuit; returns final state, energy, and the
    energy-derived expected approximation ratio."""
    ev = CircuitEvaluator(inst, graph, mixer_spec, init, chains=chains,
                          basis=basis)
    return ev.run(params)


@dataclass
class SampleResult:
    counts: dict
    shots: int
    mean_ar: float
    std_ar: float
    min_ar: float
    max_ar: float


def sample_measurements(state, inst, shots, seed):
    """Sample computational-basis outcomes from the state and summarize
    the per-sample approximation ratios (all outcomes are feasible by
    construction)."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    basis = state.basis
    probs = np.abs(state.amplitudes) ** 2
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts_vec = rng.multinomial(shots, probs)
    diag = diagonal(inst, basis)
    dmin, dmax = float(diag.min()), float(diag.max())
    if dmin == dmax:
        ar = np.ones(basis.dim)
    else:
        ar = (diag - dmax) / (dmin - dmax)
    hit = counts_vec > 0
    counts = {format(int(s), f"0{basis.n}b"): int(c)
              for s, c in zip(basis.states[hit], counts_vec[hit])}
    weights = counts_vec[hit] / shots
    mean = float(np.sum(weights * ar[hit]))
    var = float(np.sum(weights * (ar[hit] - mean) ** 2))
    return SampleResult(counts=counts, shots=shots, mean_ar=mean,
                        std_ar=float(np.sqrt(var)),
                        min_ar=float(ar[hit].min()),
                        max_ar=float(ar[hit].max()))
