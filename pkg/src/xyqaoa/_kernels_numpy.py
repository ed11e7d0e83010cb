"""Pure-numpy circuit kernels (reference implementation).

Conventions shared with the numba backend:
  phase layer   amps[i] *= exp(-1j * gamma * diag[i])
  pair rotation (a, b) -> (cos(2t)*a + 1j*sin(2t)*b, 1j*sin(2t)*a + cos(2t)*b)
  exact mixer   amps -> V @ (exp(+1j * beta * eigs) * (V^dag @ amps))

The pair-rotation / exact-mixer sign is chosen so that the maximal
eigenvector of the (entrywise non-negative) subspace mixing matrix is the
branch adiabatically connected to the objective minimum under an
increasing-gamma, decreasing-beta ramp.

Trotterized mixers arrive as a flat op stream: ops[t] rotates the swap
pairs of edge op_edge[t] by angle beta * op_frac[t]; the pair index
arrays of edge e are pa[eoff[e]:eoff[e+1]], pb[eoff[e]:eoff[e+1]].
"""

import numpy as np

BACKEND_NAME = "numpy"


def apply_phase(amps, diag, gamma):
    amps *= np.exp(-1j * gamma * diag)


def apply_pairs(amps, ia, ib, theta):
    c = np.cos(2.0 * theta)
    s = 1j * np.sin(2.0 * theta)
    a = amps[ia]
    b = amps[ib]
    amps[ia] = c * a + s * b
    amps[ib] = s * a + c * b


def state_energy(amps, diag):
    return float(np.dot(diag, amps.real**2 + amps.imag**2))


def run_trotter(amps, diag, gammas, betas, pa, pb, eoff, op_edge, op_frac):
    for l in range(gammas.shape[0]):
        apply_phase(amps, diag, gammas[l])
        for t in range(op_edge.shape[0]):
            e = op_edge[t]
            lo, hi = eoff[e], eoff[e + 1]
            apply_pairs(amps, pa[lo:hi], pb[lo:hi], betas[l] * op_frac[t])


def run_exact(amps, diag, gammas, betas, evecs, evecs_h, eigs):
    for l in range(gammas.shape[0]):
        apply_phase(amps, diag, gammas[l])
        w = evecs_h @ amps
        w *= np.exp(1j * betas[l] * eigs)
        amps[:] = evecs @ w


def energy_trotter(amps0, diag, gammas, betas, pa, pb, eoff, op_edge, op_frac):
    amps = amps0.copy()
    run_trotter(amps, diag, gammas, betas, pa, pb, eoff, op_edge, op_frac)
    return state_energy(amps, diag)


def energy_exact(amps0, diag, gammas, betas, evecs, evecs_h, eigs):
    amps = amps0.copy()
    run_exact(amps, diag, gammas, betas, evecs, evecs_h, eigs)
    return state_energy(amps, diag)


def fg_trotter(amps0, diag, theta, rel_step, pa, pb, eoff, op_edge, op_frac):
    p = theta.shape[0] // 2

    def energy_at(th):
        return energy_trotter(amps0, diag, th[:p], th[p:], pa, pb, eoff,
                              op_edge, op_frac)

    return _central_diff(energy_at, theta, rel_step)


def fg_exact(amps0, diag, theta, rel_step, evecs, evecs_h, eigs):
    p = theta.shape[0] // 2

    def energy_at(th):
        return energy_exact(amps0, diag, th[:p], th[p:], evecs, evecs_h, eigs)

    return _central_diff(energy_at, theta, rel_step)


def _central_diff(energy_at, theta, rel_step):
    f = energy_at(theta)
    grad = np.empty_like(theta)
    for i in range(theta.shape[0]):
        h = rel_step * max(1.0, abs(theta[i]))
        shifted = theta.copy()
        shifted[i] = theta[i] + h
        e_plus = energy_at(shifted)
        shifted[i] = theta[i] - h
        e_minus = energy_at(shifted)
        grad[i] = (e_plus - e_minus) / (2.0 * h)
    return f, grad


def grid_trotter(amps0, diag, ggrid, bgrid, pa, pb, eoff, op_edge, op_frac):
    out = np.empty((ggrid.shape[0], bgrid.shape[0]))
    g1 = np.empty(1)
    b1 = np.empty(1)
    for i in range(ggrid.shape[0]):
        g1[0] = ggrid[i]
        for j in range(bgrid.shape[0]):
            b1[0] = bgrid[j]
            out[i, j] = energy_trotter(amps0, diag, g1, b1, pa, pb, eoff,
                                       op_edge, op_frac)
    return out


def grid_exact(amps0, diag, ggrid, bgrid, evecs, evecs_h, eigs):
    out = np.empty((ggrid.shape[0], bgrid.shape[0]))
    g1 = np.empty(1)
    b1 = np.empty(1)
    for i in range(ggrid.shape[0]):
        g1[0] = ggrid[i]
        for j in range(bgrid.shape[0]):
            b1[0] = bgrid[j]
            out[i, j] = energy_exact(amps0, diag, g1, b1, evecs, evecs_h, eigs)
    return out
