"""Random portfolio instances, the hardness filter, and pool persistence.

Instances come from seeded Gaussian random-walk price series; the filter
keeps only instances whose depth-1 grid-optimized AR under fixed screening
circuits falls below target thresholds, so the retained pool is hard
enough that circuit-design differences show up at small depth.
"""

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .mixers import MixerSpec
from .model import (PortfolioInstance, chain_decomposition, complete_graph,
                    instance_from_dict, instance_to_dict, ring_graph)
from .qaoa import CircuitEvaluator, dicke_init
from .subspace import enumerate_basis
from .training import BETA_BOUNDS, GAMMA_BOUNDS, select_rescaling_factor

PRICE_START = 100.0
PRICE_STEP = 0.01
SERIES_LENGTH = 252


def generate_instance(n, k, q, seed, lam=1.0, length=SERIES_LENGTH,
                      step=PRICE_STEP):
    """Build an instance from synthetic price histories: each asset follows
    a Gaussian random walk in relative increments, returns are successive
    price ratios minus one, mu is their mean and W their sample covariance."""
    rng = np.random.default_rng(seed)
    increments = 1.0 + step * rng.standard_normal((n, length - 1))
    prices = PRICE_START * np.cumprod(
        np.concatenate([np.ones((n, 1)), increments], axis=1), axis=1)
    returns = prices[:, 1:] / prices[:, :-1] - 1.0
    mu = returns.mean(axis=1)
    w = np.cov(returns)
    return PortfolioInstance(
        n=n, k=k, q=q, mu=mu, w=w, lam=lam, seed=int(seed),
        provenance=f"random-walk(seed={seed}, length={length}, step={step})")


@dataclass
class InstancePool:
    instances: list
    filter_report: list = field(default_factory=list)


def _screen_ar(inst, basis, graph, chains, grid_shape):
    ev = CircuitEvaluator(inst, graph, MixerSpec("trotter", 1, 1),
                          dicke_init(), chains=chains, basis=basis)
    gammas = np.linspace(GAMMA_BOUNDS[0], GAMMA_BOUNDS[1], grid_shape[0])
    betas = np.linspace(BETA_BOUNDS[0], BETA_BOUNDS[1], grid_shape[1])
    energies = ev.grid_energies(gammas, betas)
    return ev.ar_from_energy(float(energies.min()))


def hardness_filter(candidates, ring_quota=5, complete_quota=5,
                    ring_threshold=0.8, complete_threshold=0.85,
                    grid_shape=(101, 101)):
    """Screen candidates in order and admit instances that are hard at
    depth 1: grid-optimized AR below the ring threshold (counted against
    the ring quota first) or, failing that, below the complete-graph
    threshold. Stops as soon as both quotas are filled; warns if the
    candidate stream runs out first."""
    instances, report = [], []
    need_ring, need_complete = ring_quota, complete_quota
    basis, chains = None, None
    for inst in candidates:
        if need_ring <= 0 and need_complete <= 0:
            break
        if basis is None or basis.n != inst.n or basis.k != inst.k:
            basis = enumerate_basis(inst.n, inst.k)
            chains = chain_decomposition(inst.n)
        ar_ring = _screen_ar(inst, basis, ring_graph(inst.n), None,
                             grid_shape)
        ar_complete = _screen_ar(inst, basis, complete_graph(inst.n), chains,
                                 grid_shape)
        if need_ring > 0 and ar_ring < ring_threshold:
            admitted = "ring"
            need_ring -= 1
        elif need_complete > 0 and ar_complete < complete_threshold:
            admitted = "complete"
            need_complete -= 1
        else:
            continue
        instances.append(inst)
        report.append({"seed": inst.seed, "lambda": inst.lam,
                       "ar_ring": ar_ring, "ar_complete": ar_complete,
                       "admitted_by": admitted})
    if need_ring > 0 or need_complete > 0:
        warnings.warn(
            f"hardness filter exhausted candidates with quotas unmet "
            f"(ring short {need_ring}, complete short {need_complete})")
    return InstancePool(instances=instances, filter_report=report)


def build_benchmark_pool(n=6, k=3, q=0.5, master_seed=0, max_candidates=200,
                         lambda_candidates=(1.0, 50.0, 1000.0), ring_quota=5,
                         complete_quota=5, ring_threshold=0.8,
                         complete_threshold=0.85, screen_grid=(101, 101),
                         select_grid=(51, 51)):
    """Generate candidates from consecutive seeds, pick each one's
    rescaling factor, then run the hardness filter over the stream."""
    basis = enumerate_basis(n, k)

    def stream():
        for i in range(max_candidates):
            inst = generate_instance(n, k, q, seed=master_seed + i)
            lam, _ = select_rescaling_factor(inst, lambda_candidates,
                                             grid_shape=select_grid,
                                             basis=basis)
            yield inst.with_lambda(lam)

    return hardness_filter(stream(), ring_quota=ring_quota,
                           complete_quota=complete_quota,
                           ring_threshold=ring_threshold,
                           complete_threshold=complete_threshold,
                           grid_shape=screen_grid)


def save_instances(pool, path):
    payload = {
        "instances": [instance_to_dict(inst) for inst in pool.instances],
        "filter_report": pool.filter_report,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_instances(path):
    with open(path) as fh:
        text = fh.read()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"cannot parse instance pool {path}: {exc}") from exc
    return InstancePool(
        instances=[instance_from_dict(d) for d in payload["instances"]],
        filter_report=payload.get("filter_report", []),
    )
