"""Parameter optimization: multi-start L-BFGS-B over the full 2p-dimensional
box, the one-parameter linear-schedule family, rescaling-factor selection,
and warm starting across Trotter numbers."""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .qaoa import CircuitEvaluator, QaoaParams

GAMMA_BOUNDS = (0.0, 2.0 * np.pi)
BETA_BOUNDS = (0.0, np.pi)


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = None  # None: pick from depth via default_starts
    gamma_bounds: tuple = GAMMA_BOUNDS
    beta_bounds: tuple = BETA_BOUNDS
    gradient_step: float = 1e-6
    tol: float = 1e-9
    max_iters: int = 500
    master_seed: int = 0


def default_starts(p):
    if p == 1:
        return 50
    if p == 2:
        return 150
    return 250


@dataclass
class StartRecord:
    index: int
    x0: np.ndarray
    x: np.ndarray
    energy: float
    success: bool
    message: str


@dataclass
class TrainResult:
    params: QaoaParams
    energy: float
    ar: float
    records: list = field(default_factory=list)
    delta: float = None


def linear_schedule(p, delta):
    """Linear ramp: gamma_i = delta*i/(p+1) rising, beta_i falling, for
    i = 1..p."""
    i = np.arange(1, p + 1) / (p + 1)
    return QaoaParams(gammas=tuple(delta * i), betas=tuple(delta * (1.0 - i)))


def _theta_to_params(theta):
    p = theta.shape[0] // 2
    return QaoaParams(gammas=tuple(theta[:p]), betas=tuple(theta[p:]))


def optimize_unrestricted(inst, graph, mixer_spec, init, p, config=None,
                          chains=None, evaluator=None, extra_starts=()):
    """Multi-start gradient descent over all 2p angles.

    Start s draws its point from default_rng([master_seed, s]) so results
    do not depend on evaluation order. extra_starts (pre-chosen theta
    vectors, e.g. padded lower-depth optima or warm starts) are appended
    after the random ones. A start that fails is recorded and skipped;
    only all starts failing is an error. Ties in energy resolve to the
    lowest start index.
    """
    config = config or OptimizerConfig()
    if evaluator is None:
        evaluator = CircuitEvaluator(inst, graph, mixer_spec, init,
                                     chains=chains)
    n_starts = config.starts if config.starts is not None else default_starts(p)
    lo = np.array([config.gamma_bounds[0]] * p + [config.beta_bounds[0]] * p)
    hi = np.array([config.gamma_bounds[1]] * p + [config.beta_bounds[1]] * p)
    bounds = list(zip(lo, hi))

    def fun(theta):
        return evaluator.value_and_grad(theta, config.gradient_step)

    points = []
    for s in range(n_starts):
        rng = np.random.default_rng([config.master_seed, s])
        points.append(lo + rng.random(2 * p) * (hi - lo))
    for extra in extra_starts:
        points.append(np.clip(np.asarray(extra, dtype=np.float64), lo, hi))

    records = []
    for s, x0 in enumerate(points):
        try:
            res = minimize(fun, x0, jac=True, method="L-BFGS-B",
                           bounds=bounds,
                           options={"maxiter": config.max_iters,
                                    "ftol": config.tol, "gtol": 1e-8})
            rec = StartRecord(index=s, x0=x0, x=res.x, energy=float(res.fun),
                              success=bool(np.isfinite(res.fun)),
                              message=str(res.message))
        except Exception as exc:  # divergence on one start is not fatal
            rec = StartRecord(index=s, x0=x0, x=x0, energy=np.inf,
                              success=False, message=repr(exc))
        records.append(rec)

    ok = [r for r in records if r.success]
    if not ok:
        raise RuntimeError("all optimizer starts failed: "
                           + "; ".join(r.message for r in records[:3]))
    best = min(ok, key=lambda r: (r.energy, r.index))
    params = _theta_to_params(best.x)
    return TrainResult(params=params, energy=best.energy,
                       ar=evaluator.ar_from_energy(best.energy),
                       records=records)


def optimize_ols(inst, graph, mixer_spec, init, p, config=None, chains=None,
                 evaluator=None, delta_max=2.0, grid_points=21):
    """Optimize the single slope of the linear schedule: a coarse grid on
    (0, delta_max] followed by bounded scalar refinement around the grid
    minimum. The refined value never loses to the grid value."""
    config = config or OptimizerConfig()
    if evaluator is None:
        evaluator = CircuitEvaluator(inst, graph, mixer_spec, init,
                                     chains=chains)

    def energy_of(delta):
        return evaluator.energy(linear_schedule(p, delta))

    deltas = np.linspace(0.0, delta_max, grid_points + 1)[1:]
    energies = np.array([energy_of(d) for d in deltas])
    i0 = int(np.argmin(energies))
    lo = deltas[max(i0 - 1, 0)]
    hi = deltas[min(i0 + 1, deltas.shape[0] - 1)]
    best_d, best_e = float(deltas[i0]), float(energies[i0])
    if hi > lo:
        res = minimize_scalar(energy_of, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-7})
        if res.fun <= best_e:
            best_d, best_e = float(res.x), float(res.fun)
    records = [StartRecord(index=i, x0=np.array([d]), x=np.array([d]),
                           energy=float(e), success=True, message="grid")
               for i, (d, e) in enumerate(zip(deltas, energies))]
    return TrainResult(params=linear_schedule(p, best_d), energy=best_e,
                       ar=evaluator.ar_from_energy(best_e), records=records,
                       delta=best_d)


@dataclass
class RescaleScan:
    candidates: tuple
    gamma_fractions: np.ndarray
    betas: np.ndarray
    ar_maps: dict
    best_ar: dict
    selected: float


def select_rescaling_factor(inst, candidates=(1.0, 50.0, 1000.0), graph=None,
                            mixer_spec=None, init=None, chains=None,
                            grid_shape=(51, 51), basis=None):
    """Pick the objective prefactor by scanning depth-1 AR over
    gamma in [0, 2*pi*Lambda] for each candidate Lambda, i.e. asking how
    much phase range the instance needs. Returns the smallest factor that
    comes within 0.02 of the best AR over all candidates, plus the scan."""
    from .mixers import MixerSpec
    from .model import ring_graph
    from .qaoa import dicke_init

    if graph is None:
        graph = ring_graph(inst.n)
    if mixer_spec is None:
        mixer_spec = MixerSpec("trotter", 1, 1)
    if init is None:
        init = dicke_init()
    cands = tuple(sorted(float(c) for c in candidates))
    if not cands or min(cands) <= 0:
        raise ValueError("candidates must be positive")
    fractions = np.linspace(0.0, 2.0 * np.pi, grid_shape[0])
    betas = np.linspace(BETA_BOUNDS[0], BETA_BOUNDS[1], grid_shape[1])
    ev = CircuitEvaluator(inst, graph, mixer_spec, init, chains=chains,
                          basis=basis)
    ar_maps, best = {}, {}
    for lam in cands:
        # widening gamma to [0, 2*pi*lam] here is equivalent to scaling
        # the objective by lam and keeping the standard box
        energies = ev.grid_energies(fractions * lam, betas)
        ar = (energies - ev.dmax) / (ev.dmin - ev.dmax)
        ar_maps[lam] = ar
        best[lam] = float(ar.max())
    top = max(best.values())
    selected = next(lam for lam in cands if best[lam] >= top - 0.02)
    return selected, RescaleScan(candidates=cands, gamma_fractions=fractions,
                                 betas=betas, ar_maps=ar_maps, best_ar=best,
                                 selected=selected)


def warm_start_across_trotter(inst, graph, init, p, specs, config=None,
                              chains=None):
    """Optimize a sequence of mixer specs in order, seeding each run with
    the previous optimum as an extra start. Returns one TrainResult per
    spec."""
    results = []
    extra = ()
    for spec in specs:
        r = optimize_unrestricted(inst, graph, spec, init, p, config=config,
                                  chains=chains, extra_starts=extra)
        results.append(r)
        extra = (r.params.as_theta(),)
    return results
