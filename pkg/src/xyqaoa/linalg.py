"""Dense complex linear algebra for exact mixers and spectral analysis.

Thin typed wrappers around numpy/scipy: Hermitian eigendecomposition,
e^{-itH}, principal-branch unitary logarithm, spectral norm. Matrices are
treated as immutable after construction.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

HERMITIAN_ATOL = 1e-12
UNITARY_TOL = 1e-10
DEGENERACY_GAP = 1e-9
BRANCH_CUT_TOL = 1e-12
DENSE_CAP = 2048


class BranchCutWarning(UserWarning):
    """An eigenphase lies within tolerance of the -pi/pi branch cut."""


@dataclass(frozen=True)
class HermitianMatrix:
    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
        asym = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
        if asym > HERMITIAN_ATOL * scale:
            raise ValueError(f"matrix is not Hermitian (asymmetry {asym:.3e})")
        object.__setattr__(self, "entries", (a + a.conj().T) / 2.0)

    @property
    def dim(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class UnitaryMatrix:
    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        dev = a.conj().T @ a
        dev[np.diag_indices_from(dev)] -= 1.0
        err = spectral_norm(dev)
        if err > UNITARY_TOL:
            raise ValueError(f"matrix is not unitary (||U^H U - I|| = {err:.3e})")
        object.__setattr__(self, "entries", a)

    @property
    def dim(self):
        return self.entries.shape[0]


def _entries(m):
    if isinstance(m, (HermitianMatrix, UnitaryMatrix)):
        return m.entries
    return np.asarray(m, dtype=np.complex128)


def eigh(h):
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""
    w, v = np.linalg.eigh(_entries(h))
    return w, v


def expm_i(h, t):
    """e^{-i t H} via the eigendecomposition of H."""
    w, v = eigh(h)
    u = (v * np.exp(-1j * t * w)) @ v.conj().T
    return UnitaryMatrix(u)


def spectral_norm(a):
    """Largest singular value."""
    a = _entries(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def unitary_eigensystem(u):
    """Eigenphases theta in (-pi, pi] with U v = e^{-i theta} v, plus the
    orthonormal eigenvector columns (complex Schur; U normal makes the
    Schur form diagonal)."""
    a = _entries(u)
    t, z = scipy.linalg.schur(a, output="complex")
    offdiag = t - np.diag(np.diag(t))
    resid = float(np.max(np.abs(offdiag))) if offdiag.size else 0.0
    if resid > 1e-8:
        raise ValueError(f"matrix is not normal (Schur residual {resid:.3e})")
    theta = -np.angle(np.diag(t))
    theta[theta == -np.pi] = np.pi
    return theta, z


def logm_unitary(u):
    """i log U on the principal branch: H with eigenphases in (-pi, pi]
    such that expm_i(H, 1) == U. Warns on eigenphases at the branch cut."""
    theta, z = unitary_eigensystem(u)
    if np.any(np.pi - np.abs(theta) < BRANCH_CUT_TOL):
        warnings.warn(
            "eigenphase within tolerance of the -pi/pi branch cut; "
            "principal value returned", BranchCutWarning, stacklevel=2)
    h = (z * theta) @ z.conj().T
    return HermitianMatrix(h)
