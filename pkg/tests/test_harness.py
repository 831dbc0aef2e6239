import json

import pytest

from sublintest.core import SeededRng
from sublintest.cli import main as cli_main
from sublintest.harness import (CSV_COLUMNS, RunConfig, budget_for, build_instance,
                                load_bundle, oracle_check, report_csv, run_trials,
                                save_bundle, scaling_experiment, wilson_interval)
from sublintest.instances import gen_groups4, gen_mdl_yes, gen_pentagon, gen_total_yes


def test_wilson_interval_known_values():
    lo, hi = wilson_interval(0, 50, z=1.959964)
    assert lo == pytest.approx(0.0, abs=1e-9)
    assert 0.05 < hi < 0.09
    lo, hi = wilson_interval(50, 100, z=1.959964)
    assert 0.39 < lo < 0.42
    assert 0.58 < hi < 0.61


def test_run_trials_single_deterministic():
    cfg = RunConfig(tester="total", family="pentagon", n=50, eps=0.1, trials=1, seed=3)
    r1 = run_trials(cfg)
    r2 = run_trials(cfg)
    strip = lambda rows: [{k: v for k, v in row.items() if k != "runtime_ms"}
                          for row in rows]
    assert strip(r1.rows) == strip(r2.rows)
    assert r1.rows[0]["verdict"] in ("accept", "reject")


def test_csv_round_trip():
    import csv as csvmod
    import io
    cfg = RunConfig(tester="total", family="total-yes", n=64, eps=0.2, trials=4, seed=5)
    report = run_trials(cfg)
    text = report_csv(report)
    rows = list(csvmod.DictReader(io.StringIO(text)))
    assert len(rows) == 4
    assert list(rows[0]) == CSV_COLUMNS
    assert sum(int(r["queries"]) for r in rows) == report.total_queries()


def test_budget_flagging_and_exit_path():
    cfg = RunConfig(tester="total", family="total-yes", n=128, eps=0.2, trials=2,
                    seed=7, budget=10)
    report = run_trials(cfg)
    assert report.overbudget == 2
    assert all(r["queries"] <= 10 for r in report.rows)


def test_trial_ledgers_within_declared_budget():
    cfg = RunConfig(tester="mdl", family="mdl-yes", n=128, eps=0.2, trials=3, seed=11,
                    support_size=48)
    bq, bs = budget_for(cfg)
    report = run_trials(cfg)
    for row in report.rows:
        assert row["queries"] <= bq
        assert row["samples"] <= bs


def test_scaling_rows_and_summary():
    cfg = RunConfig(tester="total", family="total-yes", n=64, eps=0.2, trials=2, seed=9)
    csv_text, summaries = scaling_experiment(cfg, [64, 256])
    assert [s["n"] for s in summaries] == [64, 256]
    assert summaries[1]["mean_queries"] > summaries[0]["mean_queries"]
    assert csv_text.count("\n") == 1 + 4  # header + 2 trials per n


def test_oracle_check_strata():
    bundles = [gen_mdl_yes(4, 3, SeededRng(13, i)) for i in range(6)]
    out = oracle_check(bundles, 0.2, 60, seed=17)
    assert out["strata"]["zero"]["bundles"] == 6
    assert out["strata"]["zero"]["rate"] >= 2 / 3 - 0.05
    assert not out["violations"]


def test_bundle_json_round_trip_boolean():
    bundle = gen_mdl_yes(24, 10, SeededRng(15))
    doc = save_bundle(bundle)
    again = load_bundle(json.loads(json.dumps(doc)))
    assert again.n == bundle.n
    for x, w in zip(bundle.dist.atoms, bundle.dist.weights):
        assert again.dist.mass(x) == pytest.approx(float(w))
        assert again.target(x.v) == bundle.target(x.v)


def test_bundle_json_round_trip_groups4():
    bundle = gen_groups4(32, SeededRng(16), "no")
    again = load_bundle(json.loads(json.dumps(save_bundle(bundle))))
    for x in bundle.dist.atoms:
        assert again.target(x.v) == bundle.target(x.v)


def test_bundle_json_round_trip_comparison():
    bundle = gen_pentagon(20, SeededRng(17))
    again = load_bundle(json.loads(json.dumps(save_bundle(bundle))))
    for (u, v), w in zip(bundle.dist.pairs, bundle.dist.weights):
        assert again.dist.mass(u, v) == pytest.approx(float(w))
        assert again.less(u, v) == bundle.less(u, v)


def test_hex_packing_little_endian_bit_one_first():
    bundle = gen_mdl_yes(16, 4, SeededRng(18))
    doc = save_bundle(bundle)
    for entry, atom in zip(doc["distribution"], bundle.dist.atoms):
        raw = bytes.fromhex(entry["x"])
        assert (raw[0] & 1) == atom.bit(1)


def test_cli_test_total_writes_csv(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code = cli_main(["test-total", "--n", "64", "--eps", "0.2", "--trials", "2",
                     "--seed", "4", "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)


def test_cli_usage_error_unknown_family():
    code = cli_main(["test-total", "--family", "nope", "--n", "64"])
    assert code == 2


def test_cli_budget_exit_code(tmp_path):
    out = tmp_path / "r.csv"
    code = cli_main(["test-total", "--n", "64", "--eps", "0.2", "--trials", "1",
                     "--seed", "4", "--budget", "5", "--out", str(out)])
    assert code == 3


def test_cli_gen_instance_round_trip(tmp_path):
    path = tmp_path / "inst.json"
    code = cli_main(["gen-instance", "--family", "mdl-yes", "--n", "32",
                     "--support", "8", "--seed", "21", "--out", str(path)])
    assert code == 0
    bundle = load_bundle(json.loads(path.read_text()))
    assert bundle.n == 32
    # and the harness can run from the file
    cfg = RunConfig(tester="mdl", family="mdl-yes", n=32, eps=0.25, trials=1, seed=22,
                    instance_path=str(path))
    report = run_trials(cfg)
    assert report.rows[0]["verdict"] == "accept"


def test_env_seed_respected(monkeypatch, tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    monkeypatch.setenv("SUBLINTEST_SEED", "909")
    cli_main(["test-total", "--n", "64", "--trials", "1", "--out", str(out1)])
    cli_main(["test-total", "--n", "64", "--trials", "1", "--out", str(out2)])
    strip = lambda p: [line.rsplit(",", 1)[0] for line in p.read_text().splitlines()]
    assert strip(out1) == strip(out2)
    assert "909" in out1.read_text()


def test_parallel_jobs_match_sequential():
    cfg1 = RunConfig(tester="total", family="total-yes", n=128, eps=0.2, trials=4,
                     seed=23, jobs=1)
    cfg2 = RunConfig(tester="total", family="total-yes", n=128, eps=0.2, trials=4,
                     seed=23, jobs=2)
    strip = lambda rows: [(r["trial"], r["verdict"], r["queries"], r["samples"])
                          for r in rows]
    assert strip(run_trials(cfg1).rows) == strip(run_trials(cfg2).rows)
