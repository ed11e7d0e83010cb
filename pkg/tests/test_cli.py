import csv
import json

import pytest

from xyqaoa.cli import main
from xyqaoa.instances import InstancePool, generate_instance, save_instances


@pytest.fixture(scope="module")
def pool_path(tmp_path_factory):
    """A tiny unfiltered pool; CLI behavior does not depend on hardness."""
    path = tmp_path_factory.mktemp("pool") / "pool.json"
    pool = InstancePool(instances=[
        generate_instance(6, 3, q=0.5, seed=s, lam=1000.0) for s in (0, 2)])
    save_instances(pool, path)
    return str(path)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def small_config(pool_path, runs):
    return {"command": "run", "pool": pool_path, "master_seed": 5,
            "runs": runs}


def write_config(tmp_path, config):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return str(path)


def test_run_writes_rows_and_manifest(tmp_path, pool_path):
    cfg = small_config(pool_path, [
        {"s_label": "S_ring", "h_label": "H_ring",
         "mixer": {"kind": "trotter", "t1": 1, "t2": 1},
         "schedule": "unrestricted", "p": 1, "optimizer": {"starts": 3}},
        {"s_label": "Dicke", "h_label": "H_complete",
         "mixer": {"kind": "exact"}, "schedule": "ols", "p": 10},
    ])
    out = tmp_path / "out"
    rc = main(["run", "--config", write_config(tmp_path, cfg),
               "--out", str(out)])
    assert rc == 0
    rows = read_rows(out / "results.csv")
    assert len(rows) == 4
    assert all(r["status"] == "ok" for r in rows)
    assert all(0.0 <= float(r["best_ar"]) <= 1.0 for r in rows)
    ols_rows = [r for r in rows if r["schedule"] == "ols"]
    assert all(";" not in r["best_params"] for r in ols_rows)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "run"
    assert len(manifest["runs"]) == 2


def test_rerun_manifest_is_bit_identical_across_threads(tmp_path, pool_path):
    cfg = small_config(pool_path, [
        {"s_label": "S_complete", "h_label": "H_complete",
         "mixer": {"kind": "trotter", "t1": 2, "t2": 1},
         "schedule": "unrestricted", "p": 2, "optimizer": {"starts": 4}},
        {"s_label": "S_ring", "h_label": "H_ring",
         "mixer": {"kind": "exact"}, "schedule": "ols", "p": 40},
    ])
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", write_config(tmp_path, cfg),
                 "--out", str(out1)]) == 0
    assert main(["run", "--config", str(out1 / "manifest.json"),
                 "--out", str(out2), "--threads", "2"]) == 0

    def numerics(path):
        return [{k: v for k, v in row.items() if k != "wall_time_s"}
                for row in read_rows(path)]

    assert numerics(out1 / "results.csv") == numerics(out2 / "results.csv")


def test_run_chain_labels(tmp_path, pool_path):
    cfg = small_config(pool_path, [
        {"s_label": "S_chains_12", "h_label": "H_chains_12",
         "mixer": {"kind": "exact"}, "schedule": "unrestricted", "p": 1,
         "optimizer": {"starts": 2}},
        {"s_label": "S_chains_3", "h_label": "H_chains_3",
         "mixer": {"kind": "trotter", "t1": 1, "t2": 1},
         "schedule": "unrestricted", "p": 1, "optimizer": {"starts": 2}},
    ])
    out = tmp_path / "out"
    assert main(["run", "--config", write_config(tmp_path, cfg),
                 "--out", str(out)]) == 0
    rows = read_rows(out / "results.csv")
    assert {r["s_label"] for r in rows} == {"S_chains_12", "S_chains_3"}


def test_run_partial_failure_exit_code(tmp_path, pool_path):
    cfg = small_config(pool_path, [
        {"s_label": "S_ring", "h_label": "H_ring",
         "mixer": {"kind": "trotter", "t1": 1, "t2": 1},
         "schedule": "unrestricted", "p": 1, "optimizer": {"starts": 2}},
        {"s_label": "S_chains_9", "h_label": "H_ring",
         "mixer": {"kind": "exact"}, "schedule": "unrestricted", "p": 1},
    ])
    out = tmp_path / "out"
    rc = main(["run", "--config", write_config(tmp_path, cfg),
               "--out", str(out)])
    assert rc == 2
    rows = read_rows(out / "results.csv")
    statuses = {r["s_label"]: r["status"] for r in rows}
    assert statuses["S_ring"] == "ok"
    assert statuses["S_chains_9"].startswith("error:")


def test_run_total_failure_exit_code(tmp_path, pool_path):
    cfg = small_config(pool_path, [
        {"s_label": "S_chains_9", "h_label": "H_ring",
         "mixer": {"kind": "exact"}, "schedule": "unrestricted", "p": 1}])
    rc = main(["run", "--config", write_config(tmp_path, cfg),
               "--out", str(tmp_path / "out")])
    assert rc == 1


def test_run_empty_pool_no_files(tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text('{"instances": [], "filter_report": []}')
    cfg = small_config(str(empty), [
        {"s_label": "S_ring", "h_label": "H_ring",
         "mixer": {"kind": "exact"}, "schedule": "unrestricted", "p": 1}])
    out = tmp_path / "out"
    rc = main(["run", "--config", write_config(tmp_path, cfg),
               "--out", str(out)])
    assert rc == 1
    assert not out.exists()


def test_run_requires_exactly_one_source(tmp_path, pool_path):
    assert main(["run", "--out", str(tmp_path / "o")]) == 1
    assert main(["run", "--preset", "no-such-preset",
                 "--out", str(tmp_path / "o2")]) == 1


def test_analyze_trotter_csv(tmp_path):
    out = tmp_path / "an"
    cfg = {"command": "analyze", "mode": "trotter", "n": 6, "k": 3,
           "graphs": ["ring"], "betas": [0.5], "t_values": [1, 2],
           "include_exact": True}
    rc = main(["analyze", "--config", write_config(tmp_path, cfg),
               "--out", str(out)])
    assert rc == 0
    rows = read_rows(out / "trotter_analysis.csv")
    assert len(rows) == 3
    t1 = next(r for r in rows if r["t1"] == "1")
    t2 = next(r for r in rows if r["t1"] == "2")
    exact = next(r for r in rows if r["mixer"] == "exact")
    assert float(t1["relative_unitary_error"]) > 0.0
    assert float(t2["relative_unitary_error"]) < \
        float(t1["relative_unitary_error"])
    assert float(t2["gs_fidelity"]) >= float(t1["gs_fidelity"])
    assert float(exact["relative_unitary_error"]) < 1e-10
    assert float(exact["gs_fidelity"]) == pytest.approx(1.0, abs=1e-9)


def test_analyze_rescale_heatmap_row_count(tmp_path, pool_path):
    out = tmp_path / "an"
    cfg = {"command": "analyze", "mode": "rescale", "pool": pool_path,
           "candidates": [1.0, 1000.0], "grid": [11, 9]}
    rc = main(["analyze", "--config", write_config(tmp_path, cfg),
               "--out", str(out)])
    assert rc == 0
    rows = read_rows(out / "rescale_heatmap.csv")
    assert len(rows) == 2 * 2 * 11 * 9
    assert all(0.0 <= float(r["ar"]) <= 1.0 for r in rows)


def test_report_aggregates(tmp_path, pool_path, capsys):
    cfg = small_config(pool_path, [
        {"s_label": "S_ring", "h_label": "H_ring",
         "mixer": {"kind": "trotter", "t1": 1, "t2": 1},
         "schedule": "unrestricted", "p": 1, "optimizer": {"starts": 3}}])
    out = tmp_path / "out"
    assert main(["run", "--config", write_config(tmp_path, cfg),
                 "--out", str(out)]) == 0
    rep = tmp_path / "rep"
    assert main(["report", str(out), "--out", str(rep)]) == 0
    report_rows = read_rows(rep / "report.csv")
    assert len(report_rows) == 1
    assert report_rows[0]["count"] == "2"
    captured = capsys.readouterr()
    assert "mean_ar" in captured.out


def test_gen_instances_writes_pool(tmp_path, monkeypatch):
    import xyqaoa.cli as cli

    def tiny_pool(master_seed=0, **kwargs):
        return InstancePool(
            instances=[generate_instance(6, 3, q=0.5, seed=master_seed)],
            filter_report=[{"seed": master_seed, "lambda": 1.0,
                            "ar_ring": 0.5, "ar_complete": 0.5,
                            "admitted_by": "ring"}])

    monkeypatch.setattr(cli, "build_benchmark_pool", tiny_pool)
    out = tmp_path / "g"
    assert main(["gen-instances", "--seed", "9", "--out", str(out)]) == 0
    pool = json.loads((out / "pool.json").read_text())
    assert len(pool["instances"]) == 1
    assert pool["instances"][0]["seed"] == 9
