"""Numba-jitted circuit kernels.

Same call signatures and arithmetic conventions as _kernels_numpy (see its
docstring); bodies are explicit loops so the whole circuit evaluation,
including central-difference gradients and depth-1 grids, runs inside one
jitted call.
"""

import numpy as np
from numba import njit

BACKEND_NAME = "numba"


@njit(cache=True)
def apply_phase(amps, diag, gamma):
    for i in range(amps.shape[0]):
        amps[i] *= np.exp(-1j * gamma * diag[i])


@njit(cache=True)
def apply_pairs(amps, ia, ib, theta):
    c = np.cos(2.0 * theta)
    js = 1j * np.sin(2.0 * theta)
    for t in range(ia.shape[0]):
        a = amps[ia[t]]
        b = amps[ib[t]]
        amps[ia[t]] = c * a + js * b
        amps[ib[t]] = js * a + c * b


@njit(cache=True)
def state_energy(amps, diag):
    acc = 0.0
    for i in range(amps.shape[0]):
        a = amps[i]
        acc += diag[i] * (a.real * a.real + a.imag * a.imag)
    return acc


@njit(cache=True)
def run_trotter(amps, diag, gammas, betas, pa, pb, eoff, op_edge, op_frac):
    for l in range(gammas.shape[0]):
        g = gammas[l]
        for i in range(amps.shape[0]):
            amps[i] *= np.exp(-1j * g * diag[i])
        for t in range(op_edge.shape[0]):
            e = op_edge[t]
            th = betas[l] * op_frac[t]
            c = np.cos(2.0 * th)
            js = 1j * np.sin(2.0 * th)
            for u in range(eoff[e], eoff[e + 1]):
                a = amps[pa[u]]
                b = amps[pb[u]]
                amps[pa[u]] = c * a + js * b
                amps[pb[u]] = js * a + c * b


@njit(cache=True)
def run_exact(amps, diag, gammas, betas, evecs, evecs_h, eigs):
    for l in range(gammas.shape[0]):
        g = gammas[l]
        for i in range(amps.shape[0]):
            amps[i] *= np.exp(-1j * g * diag[i])
        w = np.dot(evecs_h, amps)
        b = betas[l]
        for i in range(w.shape[0]):
            w[i] *= np.exp(1j * b * eigs[i])
        res = np.dot(evecs, w)
        for i in range(amps.shape[0]):
            amps[i] = res[i]


@njit(cache=True)
def energy_trotter(amps0, diag, gammas, betas, pa, pb, eoff, op_edge, op_frac):
    amps = amps0.copy()
    run_trotter(amps, diag, gammas, betas, pa, pb, eoff, op_edge, op_frac)
    return state_energy(amps, diag)


@njit(cache=True)
def energy_exact(amps0, diag, gammas, betas, evecs, evecs_h, eigs):
    amps = amps0.copy()
    run_exact(amps, diag, gammas, betas, evecs, evecs_h, eigs)
    return state_energy(amps, diag)


@njit(cache=True)
def fg_trotter(amps0, diag, theta, rel_step, pa, pb, eoff, op_edge, op_frac):
    n = theta.shape[0]
    p = n // 2
    f = energy_trotter(amps0, diag, theta[:p], theta[p:], pa, pb, eoff,
                       op_edge, op_frac)
    grad = np.empty(n)
    shifted = theta.copy()
    for i in range(n):
        h = rel_step * max(1.0, abs(theta[i]))
        shifted[i] = theta[i] + h
        e_plus = energy_trotter(amps0, diag, shifted[:p], shifted[p:], pa, pb,
                                eoff, op_edge, op_frac)
        shifted[i] = theta[i] - h
        e_minus = energy_trotter(amps0, diag, shifted[:p], shifted[p:], pa, pb,
                                 eoff, op_edge, op_frac)
        shifted[i] = theta[i]
        grad[i] = (e_plus - e_minus) / (2.0 * h)
    return f, grad


@njit(cache=True)
def fg_exact(amps0, diag, theta, rel_step, evecs, evecs_h, eigs):
    n = theta.shape[0]
    p = n // 2
    f = energy_exact(amps0, diag, theta[:p], theta[p:], evecs, evecs_h, eigs)
    grad = np.empty(n)
    shifted = theta.copy()
    for i in range(n):
        h = rel_step * max(1.0, abs(theta[i]))
        shifted[i] = theta[i] + h
        e_plus = energy_exact(amps0, diag, shifted[:p], shifted[p:], evecs,
                              evecs_h, eigs)
        shifted[i] = theta[i] - h
        e_minus = energy_exact(amps0, diag, shifted[:p], shifted[p:], evecs,
                               evecs_h, eigs)
        shifted[i] = theta[i]
        grad[i] = (e_plus - e_minus) / (2.0 * h)
    return f, grad


@njit(cache=True)
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


@njit(cache=True)
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
