"""Experiment runner CLI.

Subcommands: gen-instances (build the filtered benchmark pool), run
(optimize circuits over the pool, one CSV row per instance and
configuration), analyze (mixer error/fidelity tables and rescaling
heatmaps), report (aggregate a results CSV).

A run or analyze invocation takes either --preset <name> or --config
<json>. Every invocation writes a manifest.json that re-runs the exact
same experiment; all CSV numerics except wall_time_s are bit-identical
under re-run with any --threads value. Exit codes: 0 all rows fine, 2
some rows failed, 1 everything failed or bad invocation.
"""

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .instances import build_benchmark_pool, load_instances, save_instances
from .mixers import MixerSpec, analyze_mixer
from .model import (chain_decomposition, complete_graph, graph_from_chains,
                    instance_from_dict, instance_to_dict, ring_graph)
from .qaoa import aligned_to, dicke_init, initial_state
from .subspace import enumerate_basis
from .training import (OptimizerConfig, optimize_ols, optimize_unrestricted,
                       select_rescaling_factor)

RUN_COLUMNS = ["instance_id", "s_label", "h_label", "mixer", "schedule", "p",
               "best_ar", "best_energy", "best_params", "wall_time_s",
               "seed", "status"]


def _fmt(x):
    return "%.17g" % float(x)


def _graph_for(suffix, n, dec):
    if suffix == "ring":
        return ring_graph(n)
    if suffix == "complete":
        return complete_graph(n)
    if suffix.startswith("chains_"):
        digits = suffix[len("chains_"):]
        if not digits or len(set(digits)) != len(digits):
            raise ValueError(f"bad chain subset {suffix!r}")
        subset = tuple(sorted(int(c) - 1 for c in digits))
        if subset[0] < 0 or subset[-1] >= len(dec.chains):
            raise ValueError(f"chain index out of range in {suffix!r}")
        return graph_from_chains(dec, subset)
    raise ValueError(f"unknown graph label suffix {suffix!r}")


def _parse_s_label(label, n, dec):
    if label.lower() in ("dicke", "s_dicke"):
        return dicke_init()
    if not label.startswith("S_"):
        raise ValueError(f"initial-state label {label!r} must be Dicke or S_*")
    return aligned_to(_graph_for(label[2:], n, dec))


def _parse_h_label(label, n, dec):
    if not label.startswith("H_"):
        raise ValueError(f"mixer label {label!r} must start with H_")
    return _graph_for(label[2:], n, dec)


def _parse_mixer(d):
    kind = d.get("kind", "exact")
    if kind == "exact":
        return MixerSpec("exact")
    return MixerSpec("trotter", int(d.get("t1", 1)), int(d.get("t2", 1)))


def _mixer_str(spec):
    if spec.kind == "exact":
        return "exact"
    return f"trotter({spec.t1},{spec.t2})"


def run_task(task):
    """Compute one results row. Takes and returns plain dicts so the work
    queue can cross process boundaries."""
    row = {c: "" for c in RUN_COLUMNS}
    row.update(instance_id=task["instance_id"], s_label=task["s_label"],
               h_label=task["h_label"], p=str(task["p"]),
               schedule=task["schedule"], seed=str(task["seed"]))
    try:
        inst = instance_from_dict(task["instance"])
        dec = chain_decomposition(inst.n)
        init = _parse_s_label(task["s_label"], inst.n, dec)
        graph = _parse_h_label(task["h_label"], inst.n, dec)
        mixer = _parse_mixer(task["mixer"])
        row["mixer"] = _mixer_str(mixer)
        cfg = OptimizerConfig(master_seed=task["seed"],
                              **task.get("optimizer", {}))
        t0 = time.perf_counter()
        if task["schedule"] == "ols":
            res = optimize_ols(inst, graph, mixer, init, task["p"],
                               config=cfg, chains=dec)
            row["best_params"] = _fmt(res.delta)
        else:
            res = optimize_unrestricted(inst, graph, mixer, init, task["p"],
                                        config=cfg, chains=dec)
            theta = res.params.as_theta()
            row["best_params"] = ";".join(_fmt(v) for v in theta)
        row["wall_time_s"] = "%.6f" % (time.perf_counter() - t0)
        row["best_ar"] = _fmt(res.ar)
        row["best_energy"] = _fmt(res.energy)
        row["status"] = "ok"
    except Exception as exc:
        row["status"] = f"error: {exc}"
    return row


def _preset_runs(name, seed):
    pairs_exact = [("S_complete", "H_complete"), ("S_ring", "H_complete"),
                   ("S_ring", "H_ring"), ("S_complete", "H_ring")]
    runs = []
    if name == "alignment-exact":
        for p in (1, 2, 3):
            for s, h in pairs_exact:
                runs.append({"s_label": s, "h_label": h,
                             "mixer": {"kind": "exact"},
                             "schedule": "unrestricted", "p": p})
    elif name == "alignment-matrix":
        labels = ["chains_1", "chains_2", "chains_3", "chains_12",
                  "chains_13", "chains_23"]
        for li in labels:
            for lj in labels:
                runs.append({"s_label": f"S_{li}", "h_label": f"H_{lj}",
                             "mixer": {"kind": "exact"},
                             "schedule": "unrestricted", "p": 2})
    elif name == "trotter-sweep":
        for s, h in (("S_complete", "H_complete"), ("S_ring", "H_ring")):
            for p in (1, 2, 3):
                for t in (1, 2, 3, 4, 5, 6):
                    runs.append({"s_label": s, "h_label": h,
                                 "mixer": {"kind": "trotter", "t1": t,
                                           "t2": 1},
                                 "schedule": "unrestricted", "p": p})
    elif name == "ols-converge":
        for p in (100, 200, 300, 400):
            runs.append({"s_label": "S_ring", "h_label": "H_ring",
                         "mixer": {"kind": "exact"}, "schedule": "ols",
                         "p": p})
    else:
        raise ValueError(f"unknown run preset {name!r}")
    return {"command": "run", "preset": name, "master_seed": seed,
            "runs": runs}


def _preset_analysis(name, seed):
    if name == "trotter-analysis":
        return {"command": "analyze", "preset": name, "mode": "trotter",
                "n": 6, "k": 3, "graphs": ["ring", "complete"],
                "betas": [0.5], "t_values": [1, 2, 3, 4, 5, 6],
                "include_exact": True, "master_seed": seed}
    if name == "rescale-heatmap":
        return {"command": "analyze", "preset": name, "mode": "rescale",
                "candidates": [1.0, 50.0, 1000.0], "grid": [101, 101],
                "master_seed": seed}
    raise ValueError(f"unknown analyze preset {name!r}")


def _load_config(args, expected, preset_fn):
    if bool(args.preset) == bool(args.config):
        raise ValueError("give exactly one of --preset or --config")
    if args.preset:
        config = preset_fn(args.preset, args.seed or 0)
    else:
        with open(args.config) as fh:
            config = json.load(fh)
        if config.get("command", expected) != expected:
            raise ValueError(f"config is for {config['command']!r}, "
                             f"not {expected!r}")
    if args.seed is not None:
        config["master_seed"] = args.seed
    if args.pool:
        config["pool"] = args.pool
    if "pool" in config:
        config["pool"] = os.path.abspath(config["pool"])
    config["out"] = os.path.abspath(args.out or config.get("out", "results"))
    return config


def _write_manifest(config, out):
    with open(os.path.join(out, "manifest.json"), "w") as fh:
        json.dump(config, fh, indent=2)
        fh.write("\n")


def cmd_gen_instances(args):
    seed = args.seed or 0
    out = os.path.abspath(args.out or "results")
    pool = build_benchmark_pool(master_seed=seed)
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, "pool.json")
    save_instances(pool, path)
    _write_manifest({"command": "gen-instances", "master_seed": seed,
                     "out": out}, out)
    print(f"wrote {len(pool.instances)} instances to {path}")
    for rec in pool.filter_report:
        print(f"  seed={rec['seed']} lambda={rec['lambda']:g} "
              f"ar_ring={rec['ar_ring']:.4f} "
              f"ar_complete={rec['ar_complete']:.4f} "
              f"admitted_by={rec['admitted_by']}")
    return 0


def cmd_run(args):
    config = _load_config(args, "run", _preset_runs)
    if "pool" not in config:
        raise ValueError("run needs an instance pool (--pool or config)")
    pool = load_instances(config["pool"])
    if not pool.instances:
        raise ValueError(f"instance pool {config['pool']} is empty")
    seed = config.get("master_seed", 0)
    tasks = []
    for spec in config["runs"]:
        for idx, inst in enumerate(pool.instances):
            tasks.append({
                "instance_id": f"i{idx:02d}-s{inst.seed}",
                "instance": instance_to_dict(inst),
                "s_label": spec["s_label"],
                "h_label": spec["h_label"],
                "mixer": spec.get("mixer", {"kind": "exact"}),
                "schedule": spec.get("schedule", "unrestricted"),
                "p": int(spec["p"]),
                "optimizer": spec.get("optimizer", {}),
                "seed": int(spec.get("seed", seed)),
            })
    if args.threads and args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool_exec:
            rows = list(pool_exec.map(run_task, tasks))
    else:
        rows = [run_task(t) for t in tasks]

    out = config["out"]
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, "results.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RUN_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    _write_manifest(config, out)
    n_bad = sum(1 for r in rows if r["status"] != "ok")
    print(f"wrote {len(rows)} rows to {path} ({n_bad} failed)")
    for r in rows:
        if r["status"] != "ok":
            print(f"  {r['instance_id']} {r['s_label']}-{r['h_label']}: "
                  f"{r['status']}", file=sys.stderr)
    if n_bad == len(rows):
        return 1
    return 2 if n_bad else 0


def _analyze_trotter(config, out):
    n, k = config.get("n", 6), config.get("k", 3)
    basis = enumerate_basis(n, k)
    dec = chain_decomposition(n)
    rows = []
    for gname in config.get("graphs", ["ring", "complete"]):
        graph = _graph_for(gname, n, dec)
        ref = initial_state(aligned_to(graph), basis)
        for beta in config.get("betas", [0.5]):
            specs = [MixerSpec("trotter", int(t), 1)
                     for t in config.get("t_values", [1, 2, 3, 4, 5, 6])]
            if config.get("include_exact", True):
                specs.append(MixerSpec("exact"))
            for spec in specs:
                try:
                    res = analyze_mixer(graph, beta, spec, basis,
                                        reference=ref, chains=dec)
                    rows.append({
                        "graph": gname, "beta": _fmt(beta),
                        "mixer": spec.kind,
                        "t1": "" if spec.kind == "exact" else str(spec.t1),
                        "t2": "" if spec.kind == "exact" else str(spec.t2),
                        "relative_unitary_error":
                            _fmt(res.relative_unitary_error),
                        "gs_fidelity": _fmt(res.gs_fidelity),
                        "status": "ok"})
                except Exception as exc:
                    rows.append({"graph": gname, "beta": _fmt(beta),
                                 "mixer": spec.kind, "t1": "", "t2": "",
                                 "relative_unitary_error": "",
                                 "gs_fidelity": "",
                                 "status": f"error: {exc}"})
    path = os.path.join(out, "trotter_analysis.csv")
    cols = ["graph", "beta", "mixer", "t1", "t2", "relative_unitary_error",
            "gs_fidelity", "status"]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=cols)
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {path}")
    return all(r["status"] == "ok" for r in rows)


def _analyze_rescale(config, out):
    pool = load_instances(config["pool"])
    if not pool.instances:
        raise ValueError(f"instance pool {config['pool']} is empty")
    cands = tuple(config.get("candidates", [1.0, 50.0, 1000.0]))
    grid = tuple(config.get("grid", [101, 101]))
    path = os.path.join(out, "rescale_heatmap.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["instance_id", "lambda", "gamma", "beta", "ar"])
        for idx, inst in enumerate(pool.instances):
            iid = f"i{idx:02d}-s{inst.seed}"
            selected, scan = select_rescaling_factor(
                inst.with_lambda(1.0), candidates=cands, grid_shape=grid)
            for lam in scan.candidates:
                gammas = scan.gamma_fractions * lam
                ar = scan.ar_maps[lam]
                for a, g in enumerate(gammas):
                    for b, bb in enumerate(scan.betas):
                        writer.writerow([iid, _fmt(lam), _fmt(g), _fmt(bb),
                                         _fmt(ar[a, b])])
            print(f"{iid}: selected lambda {selected:g}")
    return True


def cmd_analyze(args):
    config = _load_config(args, "analyze", _preset_analysis)
    out = config["out"]
    if config.get("mode") == "rescale" and "pool" not in config:
        raise ValueError("rescale analysis needs an instance pool")
    os.makedirs(out, exist_ok=True)
    if config.get("mode", "trotter") == "rescale":
        ok = _analyze_rescale(config, out)
    else:
        ok = _analyze_trotter(config, out)
    _write_manifest(config, out)
    return 0 if ok else 2


def cmd_report(args):
    path = args.results
    if os.path.isdir(path):
        path = os.path.join(path, "results.csv")
    groups = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["status"] != "ok":
                continue
            key = (row["s_label"], row["h_label"], row["mixer"],
                   row["schedule"], row["p"])
            groups.setdefault(key, []).append(float(row["best_ar"]))
    if not groups:
        print("no successful rows found", file=sys.stderr)
        return 1
    lines = []
    for key in sorted(groups):
        ars = np.array(groups[key])
        sem = ars.std(ddof=1) / np.sqrt(len(ars)) if len(ars) > 1 else 0.0
        lines.append((*key, len(ars), ars.mean(), sem))
    header = ["s_label", "h_label", "mixer", "schedule", "p", "count",
              "mean_ar", "sem_ar"]
    if args.out:
        os.makedirs(os.path.abspath(args.out), exist_ok=True)
        rpath = os.path.join(os.path.abspath(args.out), "report.csv")
        with open(rpath, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for line in lines:
                writer.writerow(list(line[:6]) + [_fmt(line[6]),
                                                  _fmt(line[7])])
        print(f"wrote {rpath}")
    print(" ".join(f"{h:>12}" for h in header))
    for line in lines:
        print(" ".join(f"{str(v):>12}" for v in line[:6])
              + f" {line[6]:12.6f} {line[7]:12.6f}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="xyqaoa",
        description="constrained-QAOA experiment runner")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen-instances",
                           help="build the filtered benchmark pool")
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=cmd_gen_instances)

    for name, func, extra in (("run", cmd_run, True),
                              ("analyze", cmd_analyze, True)):
        p = sub.add_parser(name)
        p.add_argument("--preset", default=None)
        p.add_argument("--config", default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--pool", default=None)
        p.add_argument("--threads", type=int, default=1)
        p.set_defaults(func=func)

    p_rep = sub.add_parser("report", help="aggregate a results CSV")
    p_rep.add_argument("results")
    p_rep.add_argument("--out", default=None)
    p_rep.set_defaults(func=cmd_report)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
