import json

import numpy as np
import pytest

from emdcast import harness
from emdcast.forecast import FitConfig

FAST = FitConfig(pso_swarm=4, pso_iterations=2, cv_folds=3,
                 pmi_permutations=15)


# ---------------------------------------------------------------------------
# data ingestion
# ---------------------------------------------------------------------------

def test_load_series_ragged_and_trailing_blanks(tmp_path):
    p = tmp_path / "d.csv"
    long1 = ",".join(str(100 + i % 7) for i in range(70))
    long2 = ",".join(str(50 + i % 5) for i in range(65))
    p.write_text("id,t0,t1\n"
                 f"a,{long1},,\n"
                 f"b,{long2}\n")
    data = harness.load_series(p)
    assert [sid for sid, _ in data] == ["a", "b"]
    assert len(data[0][1]) == 70
    assert len(data[1][1]) == 65


def test_load_series_short_series_skipped(tmp_path, caplog):
    p = tmp_path / "d.csv"
    p.write_text("id,t0\nshort," + ",".join(["1"] * 10) + "\n")
    assert harness.load_series(p) == []


def test_load_series_non_numeric_cell(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("id,t0\nx,1,2,oops,4\n")
    with pytest.raises(ValueError, match="row 2"):
        harness.load_series(p)


def test_write_then_load_roundtrip(tmp_path):
    data = harness.synth_series(3, 80, seed=1)
    p = tmp_path / "s.csv"
    harness.write_series_csv(data, p)
    back = harness.load_series(p)
    assert len(back) == 3
    for (sid0, s0), (sid1, s1) in zip(data, back):
        assert sid0 == sid1
        assert np.allclose(s0.values, s1.values)


def test_synth_series_positive_and_deterministic():
    a = harness.synth_series(4, 126, seed=9)
    b = harness.synth_series(4, 126, seed=9)
    for (sa, xa), (sb, xb) in zip(a, b):
        assert np.array_equal(xa.values, xb.values)
        assert np.all(xa.values > 0)
        assert len(xa) == 126


# ---------------------------------------------------------------------------
# experiment configuration
# ---------------------------------------------------------------------------

def test_config_validation(tmp_path):
    kw = dict(input_path="x", output_path="y")
    with pytest.raises(ValueError):
        harness.ExperimentConfig(holdout=5, horizons=(1, 18), **kw)
    with pytest.raises(ValueError):
        harness.ExperimentConfig(models=("bogus",), **kw)
    with pytest.raises(ValueError):
        harness.ExperimentConfig(replications=0, **kw)
    with pytest.raises(ValueError):
        harness.ExperimentConfig(format="xml", **kw)


# ---------------------------------------------------------------------------
# end-to-end experiment
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def small_run(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("exp")
    data = harness.synth_series(2, 90, seed=0, noise_scale=1.0)
    inp = tmp / "series.csv"
    harness.write_series_csv(data, inp)
    cfg = harness.ExperimentConfig(
        input_path=str(inp), output_path=str(tmp / "out"), holdout=12,
        horizons=(1, 12), replications=2, models=("rato", "svr"), seed=0,
        fit=FAST)
    result = harness.run_experiment(cfg)
    return cfg, result, tmp


def test_run_produces_complete_grid(small_run):
    cfg, (records, reports, stats, origin_rows), _ = small_run
    ok = [r for r in records if not r.failed]
    # 2 series x 2 models x 2 replications x 2 horizons
    assert len(ok) == 16
    assert all(np.isfinite(r.smape) and np.isfinite(r.mase) for r in ok)
    assert all(r.wall_time > 0 for r in records)


def test_aggregates_match_records(small_run):
    cfg, (records, reports, stats, _), _ = small_run
    rp = next(r for r in reports if r.model == "rato" and r.horizon == 12)
    per_rep = {}
    for r in records:
        if r.model == "rato" and r.horizon == 12 and not r.failed:
            per_rep.setdefault(r.replication, []).append(r.smape)
    pooled = [np.mean(v) for _, v in sorted(per_rep.items())]
    assert rp.smape_mean == pytest.approx(np.mean(pooled))
    assert rp.n_runs == 4
    assert set(rp.per_series) == {"s1", "s2"}


def test_stats_entries_cover_grid(small_run):
    cfg, (_, _, stats, _), _ = small_run
    keys = {(e["horizon"], e["metric"]) for e in stats}
    assert keys == {(1, "smape"), (1, "mase"), (12, "smape"), (12, "mase")}
    for e in stats:
        assert "rank_chain" in e or "note" in e


def test_emit_report_files(small_run):
    cfg, (records, reports, stats, origin_rows), tmp = small_run
    paths = harness.emit_report(records, reports, stats, origin_rows,
                                cfg.output_path, "csv")
    for name in ("records", "summary", "ranks", "forecasts"):
        assert paths[name].exists()
    head = paths["records"].read_text().splitlines()[0]
    assert "wall" not in head  # timing is not part of the report contract
    n_lines = len(paths["forecasts"].read_text().splitlines())
    assert n_lines == 1 + len(origin_rows)


def test_emit_report_json_summary(small_run):
    cfg, (records, reports, stats, origin_rows), tmp = small_run
    paths = harness.emit_report(records, reports, stats, origin_rows,
                                str(tmp / "json_out"), "json")
    summary = json.loads(paths["summary"].read_text())
    assert {e["model"] for e in summary} == {"rato", "svr"}


def test_reports_byte_identical_across_reruns(small_run):
    cfg, first, tmp = small_run
    second = harness.run_experiment(cfg)
    p1 = harness.emit_report(*first, str(tmp / "rerun_a"), "csv")
    p2 = harness.emit_report(*second, str(tmp / "rerun_b"), "csv")
    for name in p1:
        assert p1[name].read_bytes() == p2[name].read_bytes()


def test_failed_runs_recorded_not_fatal(tmp_path):
    # constant series: multiplicative preprocessing fit fails inside the
    # run cell and must surface as a failed record
    inp = tmp_path / "s.csv"
    inp.write_text("id,t0\nflat," + ",".join(["5"] * 80) + "\n")
    cfg = harness.ExperimentConfig(
        input_path=str(inp), output_path=str(tmp_path / "o"), holdout=12,
        horizons=(1,), replications=1, models=("rato",), fit=FAST)
    records, reports, stats, origin_rows = harness.run_experiment(cfg)
    assert len(records) == 1 and records[0].failed
    assert records[0].error
    assert reports[0].n_runs == 0
