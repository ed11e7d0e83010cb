import numpy as np
import pytest
from conftest import dense_xy_evolution, embed, restrict

from xyqaoa.instances import generate_instance
from xyqaoa.linalg import eigh
from xyqaoa.mixers import exact_mixer, trotter_mixer
from xyqaoa.model import (complete_graph, diagonal, mixing_hamiltonian,
                          ring_graph)
from xyqaoa.qaoa import (CircuitEvaluator, QaoaParams, aligned_to, dicke_init,
                         explicit_init, initial_state, run_circuit,
                         sample_measurements)
from xyqaoa.subspace import dicke_state, enumerate_basis, fidelity


@pytest.fixture(scope="module")
def inst():
    return generate_instance(6, 3, q=0.5, seed=12, lam=1000.0)


def test_initial_state_specs_validate():
    with pytest.raises(ValueError):
        aligned_to(None)
    with pytest.raises(ValueError):
        aligned_to(ring_graph(6), extremal="median")
    with pytest.raises(ValueError):
        explicit_init(np.zeros(4))


def test_dicke_init(inst):
    basis = enumerate_basis(6, 3)
    st = initial_state(dicke_init(), basis)
    assert np.allclose(st.amplitudes, dicke_state(basis).amplitudes)


def test_aligned_init_is_extremal_eigenvector():
    basis = enumerate_basis(6, 3)
    graph = ring_graph(6)
    h = mixing_hamiltonian(graph, basis)
    w, v = eigh(h)
    st = initial_state(aligned_to(graph), basis)
    assert st.norm() == pytest.approx(1.0)
    hv = h.entries @ st.amplitudes
    assert np.max(np.abs(hv - w[-1] * st.amplitudes)) < 1e-9
    lo = initial_state(aligned_to(graph, extremal="min"), basis)
    assert np.max(np.abs(h.entries @ lo.amplitudes
                         - w[0] * lo.amplitudes)) < 1e-9


def test_aligned_init_complete_graph_is_dicke():
    basis = enumerate_basis(6, 3)
    st = initial_state(aligned_to(complete_graph(6)), basis)
    assert fidelity(st, dicke_state(basis)) == pytest.approx(1.0, abs=1e-12)


def test_qaoa_params():
    params = QaoaParams(gammas=(0.1, 0.2), betas=(0.3, 0.4))
    assert params.p == 2
    assert np.array_equal(params.as_theta(), [0.1, 0.2, 0.3, 0.4])
    with pytest.raises(ValueError):
        QaoaParams(gammas=(0.1,), betas=(0.2, 0.3))
    with pytest.raises(ValueError):
        QaoaParams(gammas=(), betas=())


def test_circuit_matches_dense_evolution(inst):
    """Layer oracle: the depth-2 exact-mixer circuit equals phase and
    full-space mixer exponentials composed in the 2^n space."""
    basis = enumerate_basis(6, 3)
    graph = ring_graph(6)
    params = QaoaParams(gammas=(0.21, 0.55), betas=(0.43, 0.17))
    res = run_circuit(inst, graph, exact_mixer(), dicke_init(), params)

    diag = diagonal(inst, basis)
    vec = embed(basis, dicke_state(basis).amplitudes)
    full_diag = np.zeros(1 << 6)
    full_diag[basis.states] = diag
    for gamma, beta in zip(params.gammas, params.betas):
        vec = np.exp(-1j * gamma * full_diag) * vec
        vec = dense_xy_evolution(6, graph.edges, beta) @ vec
    want = restrict(basis, vec)
    assert np.max(np.abs(res.final_state.amplitudes - want)) < 1e-10
    assert res.energy == pytest.approx(
        float(np.real(np.vdot(want, diag * want))), abs=1e-12)


def test_trotter_circuit_matches_dense_evolution(inst):
    basis = enumerate_basis(6, 3)
    graph = ring_graph(6)
    params = QaoaParams(gammas=(0.8,), betas=(0.31,))
    res = run_circuit(inst, graph, trotter_mixer(1, 1), dicke_init(), params)

    diag = diagonal(inst, basis)
    full_diag = np.zeros(1 << 6)
    full_diag[basis.states] = diag
    vec = embed(basis, dicke_state(basis).amplitudes)
    vec = np.exp(-1j * params.gammas[0] * full_diag) * vec
    for edge in ((1, 2), (3, 4), (0, 5), (0, 1), (2, 3), (4, 5)):
        vec = dense_xy_evolution(6, [edge], params.betas[0]) @ vec
    want = restrict(basis, vec)
    assert np.max(np.abs(res.final_state.amplitudes - want)) < 1e-10


def test_expected_ar_bounds_and_norm(inst):
    rng = np.random.default_rng(2)
    graph = ring_graph(6)
    for _ in range(5):
        p = rng.integers(1, 4)
        params = QaoaParams(gammas=tuple(rng.uniform(0, 2 * np.pi, p)),
                            betas=tuple(rng.uniform(0, np.pi, p)))
        res = run_circuit(inst, graph, trotter_mixer(2, 1), dicke_init(),
                          params)
        assert 0.0 <= res.expected_ar <= 1.0
        assert res.final_state.norm() == pytest.approx(1.0)


def test_evaluator_energy_consistency(inst):
    ev = CircuitEvaluator(inst, ring_graph(6), trotter_mixer(1, 2),
                          dicke_init())
    params = QaoaParams(gammas=(0.4, 1.2), betas=(0.6, 0.2))
    assert ev.energy(params) == pytest.approx(ev.run(params).energy,
                                              abs=1e-12)


def test_evaluator_gradient_matches_energy_differences(inst):
    ev = CircuitEvaluator(inst, ring_graph(6), exact_mixer(), dicke_init())
    theta = np.array([0.7, 0.3])
    f, g = ev.value_and_grad(theta, 1e-6)
    assert f == pytest.approx(
        ev.energy(QaoaParams(gammas=(0.7,), betas=(0.3,))), abs=1e-12)
    for i in range(2):
        h = 1e-6 * max(1.0, abs(theta[i]))
        up, dn = theta.copy(), theta.copy()
        up[i] += h
        dn[i] -= h
        fd = (ev.energy(QaoaParams((up[0],), (up[1],)))
              - ev.energy(QaoaParams((dn[0],), (dn[1],)))) / (2 * h)
        assert g[i] == pytest.approx(fd, rel=1e-9, abs=1e-12)


def test_grid_energies_match_pointwise(inst):
    ev = CircuitEvaluator(inst, ring_graph(6), trotter_mixer(1, 1),
                          dicke_init())
    gammas = np.linspace(0.0, 2 * np.pi, 4)
    betas = np.linspace(0.0, np.pi, 3)
    grid = ev.grid_energies(gammas, betas)
    for a, g in enumerate(gammas):
        for b, bb in enumerate(betas):
            want = ev.energy(QaoaParams(gammas=(g,), betas=(bb,)))
            assert grid[a, b] == pytest.approx(want, abs=1e-12)


def test_rescale_identity(inst):
    """Scaling the objective by c and dividing gamma by c leaves the
    circuit invariant."""
    graph = ring_graph(6)
    base = inst.with_lambda(1.0)
    params = QaoaParams(gammas=(1.3,), betas=(0.5,))
    for c in (10.0, 50.0, 1000.0):
        scaled_params = QaoaParams(gammas=(1.3 / c,), betas=(0.5,))
        a = run_circuit(base, graph, trotter_mixer(1, 1), dicke_init(),
                        params)
        b = run_circuit(base.with_lambda(c), graph, trotter_mixer(1, 1),
                        dicke_init(), scaled_params)
        assert fidelity(a.final_state, b.final_state) >= 1.0 - 1e-12


def test_sampling_is_seed_deterministic(inst):
    graph = ring_graph(6)
    res = run_circuit(inst, graph, trotter_mixer(1, 1), dicke_init(),
                      QaoaParams(gammas=(0.9,), betas=(0.8,)))
    s1 = sample_measurements(res.final_state, inst, shots=5000, seed=77)
    s2 = sample_measurements(res.final_state, inst, shots=5000, seed=77)
    assert s1.counts == s2.counts
    assert s1.mean_ar == s2.mean_ar
    s3 = sample_measurements(res.final_state, inst, shots=5000, seed=78)
    assert s3.counts != s1.counts


def test_sampling_statistics(inst):
    graph = ring_graph(6)
    res = run_circuit(inst, graph, trotter_mixer(1, 1), dicke_init(),
                      QaoaParams(gammas=(0.9,), betas=(0.8,)))
    samp = sample_measurements(res.final_state, inst, shots=20000, seed=5)
    assert sum(samp.counts.values()) == 20000
    assert all(bits.count("1") == 3 for bits in samp.counts)
    assert samp.min_ar <= samp.mean_ar <= samp.max_ar
    # sampled mean AR converges on the state's expected AR
    assert samp.mean_ar == pytest.approx(res.expected_ar, abs=0.02)
    with pytest.raises(ValueError):
        sample_measurements(res.final_state, inst, shots=0, seed=1)
