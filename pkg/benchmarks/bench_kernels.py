"""Time the numba kernels against the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]

Compares the three hot entry points (single energy evaluation, energy and
gradient, landscape grid) on a depth-2 ring circuit over the n=6, k=3
subspace, for both exact and Trotterized mixers.
"""

import argparse
import importlib
import time

import numpy as np

from xyqaoa.instances import generate_instance
from xyqaoa.mixers import exact_mixer, trotter_mixer
from xyqaoa.model import ring_graph
from xyqaoa.qaoa import CircuitEvaluator, QaoaParams, dicke_init


def load_kernels(name):
    return importlib.import_module(f"xyqaoa._kernels_{name}")


def time_call(fn, repeats):
    fn()  # warm up (jit compile, cache fill)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()

    inst = generate_instance(6, 3, q=0.5, seed=0, lam=1000.0)
    graph = ring_graph(6)
    params = QaoaParams((0.8, 1.6), (0.3, 0.2))
    theta = np.array([0.8, 1.6, 0.3, 0.2])
    gammas = np.linspace(0.0, 2.0 * np.pi, 51)
    betas = np.linspace(0.0, np.pi, 51)

    rows = []
    for mixer_name, spec in (("exact", exact_mixer()),
                             ("trotter(2,1)", trotter_mixer(2, 1))):
        ev = CircuitEvaluator(inst, graph, spec, dicke_init())
        calls = [
            ("energy", lambda: ev.energy(params)),
            ("value_and_grad", lambda: ev.value_and_grad(theta, 1e-6)),
            ("grid 51x51", lambda: ev.grid_energies(gammas, betas)),
        ]
        for call_name, fn in calls:
            times = {}
            for backend in ("numba", "numpy"):
                ev._kern = load_kernels(backend)
                reps = args.repeats if call_name != "grid 51x51" else \
                    max(1, args.repeats // 50)
                times[backend] = time_call(fn, reps)
            rows.append((mixer_name, call_name, times["numba"],
                         times["numpy"]))

    print(f"{'mixer':<14} {'call':<16} {'numba':>12} {'numpy':>12} "
          f"{'speedup':>8}")
    for mixer_name, call_name, tb, tp in rows:
        print(f"{mixer_name:<14} {call_name:<16} {tb * 1e6:>10.1f}us "
              f"{tp * 1e6:>10.1f}us {tp / tb:>7.1f}x")


if __name__ == "__main__":
    main()
