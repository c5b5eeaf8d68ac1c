"""Experiment harness: configs, determinism, persistence, verification."""

import json
import math

import pytest

import sortlab.experiments as exp
from sortlab.experiments import (ExperimentConfig, default_p_grid,
                                 emit_bound_table, records_to_jsonl, run_experiment,
                                 summary_rows_csv, verify_suite, write_jsonl)
from sortlab.increments import IncrementSequence
from sortlab.perms import (lis_length, permutation_from_stream,
                           random_permutation, unrank_permutation)
from sortlab.rng import Seed, SplitMix64, derive_seed
from sortlab.shellsort import shellsort_traced


def stripped_lines(text):
    out = []
    for line in text.strip().splitlines():
        d = json.loads(line)
        d.pop("wall_time", None)
        out.append(json.dumps(d, sort_keys=True))
    return out


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="nope", n_grid=(4,))
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="seqsearch", n_grid=())
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="shellsort", n_grid=(4,), trials=0)
    # experiments with a sensible default size grid fall back to it
    assert ExperimentConfig(experiment="shellsort").n_grid == \
        (2 ** 8, 2 ** 10, 2 ** 12, 2 ** 14)
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="shellsort", n_grid=(4,), p_grid=(4,))
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="pstacks", n_grid=(9,), exhaustive=True)
    cfg = ExperimentConfig.from_dict({"experiment": "pstacks", "n_grid": [8],
                                      "trials": 2})
    assert cfg.n_grid == (8,)


def test_default_p_grid():
    assert default_p_grid(256) == (1, 2, 3, 8)
    assert default_p_grid(2 ** 14) == (1, 2, 3, 4, 14)
    assert default_p_grid(3) == (1, 2)


def test_exhaustive_s3_single_pass():
    cfg = ExperimentConfig(experiment="shellsort", n_grid=(3,), p_grid=(1,),
                           exhaustive=True, master_seed=5)
    res = run_experiment(cfg)
    assert sorted(r.metrics["total_M"] for r in res.records) == [0, 1, 1, 2, 2, 3]
    assert [r.trial_index for r in res.records] == list(range(6))


def test_exhaustive_pstacks_matches_lis():
    cfg = ExperimentConfig(experiment="pstacks", n_grid=(4,), exhaustive=True)
    res = run_experiment(cfg)
    assert len(res.records) == 24
    for r in res.records:
        pi = unrank_permutation(4, r.trial_index)
        assert r.metrics["containers_used"] == lis_length(pi) == r.metrics["lis"]


def test_determinism_and_ordering():
    cfg = ExperimentConfig(experiment="pqueues", n_grid=(16, 8), trials=12,
                           master_seed=300)
    a = records_to_jsonl(run_experiment(cfg))
    b = records_to_jsonl(run_experiment(cfg))
    assert stripped_lines(a) == stripped_lines(b)
    keys = [r.sort_key() for r in run_experiment(cfg).records]
    assert keys == sorted(keys)


def test_worker_count_does_not_change_results():
    base = dict(experiment="shellsort", n_grid=(24, 48), p_grid=(1, 2),
                families=("shell", "target"), trials=6, master_seed=9)
    r1 = run_experiment(ExperimentConfig(**base, threads=1))
    r2 = run_experiment(ExperimentConfig(**base, threads=3))
    assert stripped_lines(records_to_jsonl(r1)) == stripped_lines(records_to_jsonl(r2))


def test_records_rerun_from_derived_seed():
    cfg = ExperimentConfig(experiment="shellsort", n_grid=(32,), p_grid=(2,),
                           trials=5, master_seed=41)
    res = run_experiment(cfg)
    inc = IncrementSequence(tuple(res.summary["rows"][0]["increments"]))
    for r in res.records:
        assert r.derived_seed == derive_seed(cfg.master_seed, r.trial_index)
        # the stored derived_seed alone re-runs the trial
        pi = permutation_from_stream(r.n, SplitMix64(r.derived_seed))
        assert pi == random_permutation(r.n, Seed(cfg.master_seed, r.trial_index))
        _, tr = shellsort_traced(pi, inc)
        assert tr.total_M == r.metrics["total_M"]


def test_jsonl_schema():
    cfg = ExperimentConfig(experiment="pstacks", n_grid=(8,), trials=3,
                           master_seed=2)
    res = run_experiment(cfg)
    lines = records_to_jsonl(res).strip().splitlines()
    assert len(lines) == 4  # 3 trials + summary
    for line in lines[:-1]:
        d = json.loads(line)
        assert d["schema_version"] == 1 and d["type"] == "trial"
        assert set(d) == {"schema_version", "type", "experiment", "n", "p",
                          "family", "trial_index", "derived_seed", "metrics",
                          "wall_time"}
        assert all(v >= 0 for v in d["metrics"].values())
    summary = json.loads(lines[-1])
    assert summary["type"] == "summary"
    assert summary["rows"][0]["mean_over_sqrt_n"] > 0


def test_write_jsonl(tmp_path):
    cfg = ExperimentConfig(experiment="pqueues", n_grid=(6,), trials=2)
    res = run_experiment(cfg)
    path = tmp_path / "records.jsonl"
    write_jsonl(res, path)
    assert path.read_text().endswith("\n")
    assert stripped_lines(path.read_text()) == stripped_lines(records_to_jsonl(res))


def test_shellsort_families_and_fit():
    cfg = ExperimentConfig(experiment="shellsort", n_grid=(32, 64, 128),
                           p_grid=(1,), families=("shell", "pratt", "chazelle",
                                                  "geometric", "target"),
                           trials=8, master_seed=1234, fit=True)
    res = run_experiment(cfg)
    fams = {r.family for r in res.records}
    assert fams == {"shell", "pratt", "chazelle", "geometric", "target"}
    for row in res.summary["rows"]:
        assert row["m_star"] >= 0
    fits = {(f["family"], f["p"]): f["exponent"] for f in res.summary["fits"]}
    assert abs(fits[("target", 1)] - 2.0) < 0.25  # insertion sort is quadratic


def test_pstacks_summary_ratio():
    cfg = ExperimentConfig(experiment="pstacks", n_grid=(10_000,), trials=100,
                           master_seed=88)
    res = run_experiment(cfg)
    row = res.summary["rows"][0]
    assert row["mean"] == pytest.approx(
        sum(r.metrics["containers_used"] for r in res.records) / 100)
    assert 1.0 < row["mean_over_sqrt_n"] < math.e


def test_seqsearch_experiment():
    cfg = ExperimentConfig(experiment="seqsearch", n_grid=(4,), exhaustive=True)
    res = run_experiment(cfg)
    assert len(res.records) == 24
    assert max(r.metrics["min_k"] for r in res.records) == 2
    assert min(r.metrics["min_k"] for r in res.records) == 1


def test_bounds_experiment_and_table():
    csv_text, rows, skipped = emit_bound_table((64, 256), (1, 2, 300))
    lines = csv_text.strip().splitlines()
    assert lines[0] == "n,p,M_star,p_n_ratio"
    assert len(lines) == 1 + len(rows)
    assert len(rows) == 4  # (64,300) and (256,300) skipped
    assert len(skipped) == 2
    csv1, rows1, _ = emit_bound_table((128,), (2,))
    assert len(rows1) == 1 and csv1.count("\n") == 2
    # ratio roughly constant down a p column
    _, big, _ = emit_bound_table((2 ** 8, 2 ** 10, 2 ** 12), (2,))
    ratios = [r["p_n_ratio"] for r in big]
    assert max(ratios) / min(ratios) < 3.0

    res = run_experiment(ExperimentConfig(experiment="bounds", n_grid=(64,),
                                          p_grid=(1, 2)))
    assert res.records == []
    assert res.summary["csv"].startswith("n,p,M_star,p_n_ratio")


def test_summary_rows_csv():
    cfg = ExperimentConfig(experiment="pstacks", n_grid=(8,), trials=3)
    res = run_experiment(cfg)
    text = summary_rows_csv(res.summary)
    header = text.splitlines()[0].split(",")
    assert header[:4] == ["n", "p", "family", "metric"]
    assert "mean_over_sqrt_n" in header


def test_verify_suite_quick_passes():
    report = verify_suite(deep=False)
    assert report.all_passed
    names = [c.name for c in report.checks]
    assert names == ["trace-roundtrip", "lis-oracle", "composition-counts",
                     "pushpop-injectivity"]
    assert report.total_checked > 6000
    d = report.to_json_dict()
    assert d["all_passed"] is True


def test_verify_suite_detects_corruption(monkeypatch):
    """Tampering with the counter stream must surface a counterexample."""
    real_encode = exp.trace_encode

    def corrupted(trace):
        flat = list(real_encode(trace))
        if len(flat) >= 2 and flat != [0] * len(flat):
            flat[0], flat[-1] = flat[-1], flat[0]
        return tuple(flat)

    monkeypatch.setattr(exp, "trace_encode", corrupted)
    report = verify_suite(deep=False)
    trace_check = report.checks[0]
    assert not trace_check.passed
    assert trace_check.counterexample is not None
    assert "pi=" in trace_check.counterexample


def test_verify_experiment_wrapper():
    res = run_experiment(ExperimentConfig(experiment="verify", verify_deep=False))
    assert res.summary["verify"]["all_passed"] is True
