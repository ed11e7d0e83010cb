"""Desk-scale simulation of Hamming-weight-constrained QAOA with XY mixers.

Everything runs in the C(n, k) feasible subspace: basis enumeration,
portfolio phase diagonals, exact and Trotterized XY mixer evolution,
multi-start and linear-schedule training, and a hardness-filtered
benchmark pool with a CLI on top.
"""

from .backend import backend_name, kernels
from .instances import (InstancePool, build_benchmark_pool, generate_instance,
                        hardness_filter, load_instances, save_instances)
from .linalg import (BranchCutWarning, HermitianMatrix, UnitaryMatrix, eigh,
                     expm_i, logm_unitary, spectral_norm, unitary_eigensystem)
from .mixers import (MixerAnalysis, MixerSpec, analyze_mixer, apply_mixer,
                     commutator_bound, effective_ground_state, exact_mixer,
                     mixer_unitary, trotter_error, trotter_mixer,
                     trotter_op_stream)
from .model import (ChainDecomposition, PortfolioInstance, XYGraph,
                    approximation_ratio, brute_force_extrema,
                    chain_decomposition, complete_graph, diagonal,
                    graph_from_chains, instance_from_dict, instance_to_dict,
                    ising_coefficients, ising_diagonal, mixing_hamiltonian,
                    objective, ring_graph)
from .qaoa import (CircuitEvaluator, CircuitResult, InitialStateSpec,
                   QaoaParams, SampleResult, aligned_to, dicke_init,
                   explicit_init, initial_state, run_circuit,
                   sample_measurements)
from .subspace import (FeasibleBasis, SubspaceState, apply_phase,
                       apply_xy_rotation, basis_state, dicke_state,
                       enumerate_basis, enumerate_states, feasible_fraction,
                       fidelity, swap_partner_indices)
from .training import (OptimizerConfig, RescaleScan, TrainResult,
                       default_starts, linear_schedule, optimize_ols,
                       optimize_unrestricted, select_rescaling_factor,
                       warm_start_across_trotter)

__version__ = "0.1.0"

__all__ = [
    "BranchCutWarning", "ChainDecomposition", "CircuitEvaluator",
    "CircuitResult", "FeasibleBasis", "HermitianMatrix", "InitialStateSpec",
    "InstancePool", "MixerAnalysis", "MixerSpec", "OptimizerConfig",
    "PortfolioInstance", "QaoaParams", "RescaleScan", "SampleResult",
    "SubspaceState", "TrainResult", "UnitaryMatrix", "XYGraph",
    "aligned_to", "analyze_mixer", "apply_mixer", "apply_phase",
    "apply_xy_rotation", "approximation_ratio", "backend_name",
    "basis_state", "brute_force_extrema", "build_benchmark_pool",
    "chain_decomposition", "commutator_bound", "complete_graph",
    "default_starts", "diagonal", "dicke_init", "dicke_state",
    "effective_ground_state", "eigh", "enumerate_basis", "enumerate_states",
    "exact_mixer", "explicit_init", "expm_i", "feasible_fraction",
    "fidelity", "generate_instance", "graph_from_chains", "hardness_filter",
    "initial_state", "instance_from_dict", "instance_to_dict",
    "ising_coefficients", "ising_diagonal", "kernels", "linear_schedule",
    "load_instances", "logm_unitary", "mixer_unitary", "mixing_hamiltonian",
    "objective", "optimize_ols", "optimize_unrestricted", "ring_graph",
    "run_circuit", "sample_measurements", "save_instances",
    "select_rescaling_factor", "spectral_norm", "swap_partner_indices",
    "trotter_error", "trotter_mixer", "trotter_op_stream",
    "unitary_eigensystem", "warm_start_across_trotter",
]
