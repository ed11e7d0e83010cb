import numpy as np
import pytest
from scipy.linalg import expm
from scipy.stats import unitary_group

from xyqaoa.linalg import (BranchCutWarning, HermitianMatrix, UnitaryMatrix,
                           eigh, expm_i, logm_unitary, spectral_norm,
                           unitary_eigensystem)


def random_hermitian(dim, rng):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def test_hermitian_wrapper_symmetrizes():
    rng = np.random.default_rng(0)
    h = random_hermitian(5, rng)
    wrapped = HermitianMatrix(h + 1e-14 * rng.standard_normal((5, 5)))
    assert np.allclose(wrapped.entries, wrapped.entries.conj().T)


def test_hermitian_wrapper_rejects_asymmetric():
    with pytest.raises(ValueError):
        HermitianMatrix(np.array([[0.0, 1.0], [0.5, 0.0]]))


def test_unitary_wrapper_rejects_nonunitary():
    UnitaryMatrix(np.eye(3) * 1j)
    with pytest.raises(ValueError):
        UnitaryMatrix(np.eye(3) * 1.001)


def test_eigh_reconstructs():
    rng = np.random.default_rng(1)
    h = random_hermitian(8, rng)
    w, v = eigh(HermitianMatrix(h))
    assert np.all(np.diff(w) >= 0)
    assert np.allclose((v * w) @ v.conj().T, h, atol=1e-12)


def test_expm_i_matches_scipy():
    rng = np.random.default_rng(2)
    h = random_hermitian(6, rng)
    for t in (0.3, -1.7):
        got = expm_i(HermitianMatrix(h), t).entries
        assert np.allclose(got, expm(-1j * t * h), atol=1e-11)
    u = expm_i(HermitianMatrix(h), 0.9).entries
    assert np.allclose(u @ u.conj().T, np.eye(6), atol=1e-12)


def test_spectral_norm():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((7, 7))
    assert spectral_norm(a) == pytest.approx(np.linalg.norm(a, 2))


def test_unitary_eigensystem_phases_in_halfopen_interval():
    """Eigenphase convention: U = sum_j e^{-i theta_j} |z_j><z_j| with
    theta in (-pi, pi]; an eigenvalue of exactly -1 reports +pi."""
    u = np.diag([1.0, 1j, -1.0]).astype(np.complex128)
    theta, z = unitary_eigensystem(u)
    rebuilt = (z * np.exp(-1j * theta)) @ z.conj().T
    assert np.allclose(rebuilt, u, atol=1e-12)
    assert np.all(theta > -np.pi) and np.all(theta <= np.pi)
    assert np.pi in theta


def test_unitary_eigensystem_rejects_nonnormal():
    with pytest.raises(ValueError):
        unitary_eigensystem(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_logm_unitary_round_trip():
    rng = np.random.default_rng(4)
    u = unitary_group.rvs(6, random_state=rng)
    h = logm_unitary(u)
    assert np.allclose(h.entries, h.entries.conj().T)
    assert np.max(np.abs(expm_i(h, 1.0).entries - u)) < 1e-10


def test_logm_unitary_warns_at_branch_cut():
    u = np.diag([-1.0, 1.0]).astype(np.complex128)
    with pytest.warns(BranchCutWarning):
        h = logm_unitary(u)
    assert np.allclose(np.sort(np.linalg.eigvalsh(h.entries)),
                       [0.0, np.pi], atol=1e-12)


def test_logm_unitary_quiet_away_from_cut():
    import warnings
    u = np.diag(np.exp(-1j * np.array([0.4, -2.0, 1.1])))
    with warnings.catch_warnings():
        warnings.simplefilter("error", BranchCutWarning)
        logm_unitary(u)
