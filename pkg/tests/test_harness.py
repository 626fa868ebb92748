from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from treecorr.graphs import ParameterError
from treecorr.harness import (
    CSV_HEADER,
    ExperimentConfig,
    TestRun,
    error_rates,
    format_csv,
    mann_whitney_auc,
    read_csv,
    roc_auc,
    run_experiment,
    sweep,
    worker_count,
)

SMALL = ExperimentConfig(n=30, q=0.2, rho=0.9, k=2, t=10, pairs=4, seed=3)


def test_roc_examples():
    assert roc_auc([0, 1], [2, 3]).auc == 1.0
    assert roc_auc([1, 2], [1, 2]).auc == 0.5
    assert roc_auc([0, 2], [1, 3]).auc == 0.75
    curve = roc_auc([0, 2], [1, 3])
    assert curve.points[0] == (0.0, 0.0) and curve.points[-1] == (1.0, 1.0)


scores = st.lists(st.integers(-5, 5).map(float), min_size=1, max_size=30)


@given(scores, scores)
def test_trapezoid_equals_mann_whitney(null, alt):
    assert roc_auc(null, alt).auc == pytest.approx(mann_whitney_auc(null, alt), abs=1e-12)


def test_roc_needs_both_sides():
    with pytest.raises(ParameterError):
        roc_auc([], [1.0])


def test_csv_format_and_roundtrip(tmp_path):
    runs = [TestRun(0, "null", 0.1, 1 / 3, "independent", 2.5), TestRun(0, "alt", 12.0, 1 / 3, "correlated", 3.0)]
    text = format_csv(runs)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER) == "pair_id,hypothesis,statistic,threshold,decision,wall_ms"
    assert lines[1] == "0,null,0.10000000000000001,0.33333333333333331,independent,2.5"
    assert format_csv(runs, timing=False).splitlines()[2].endswith(",0")
    path = tmp_path / "r.csv"
    path.write_text(text)
    assert read_csv(path) == runs


def test_error_rates():
    runs = [
        TestRun(0, "null", 0, 1, "independent", 0),
        TestRun(1, "null", 2, 1, "correlated", 0),
        TestRun(0, "alt", 0, 1, "independent", 0),
        TestRun(1, "alt", 2, 1, "correlated", 0),
    ]
    assert error_rates(runs) == (0.5, 0.5)


def test_run_order_and_determinism():
    r1 = run_experiment(SMALL, threads=1)
    r3 = run_experiment(SMALL, threads=3)
    assert [(r.hypothesis, r.pair_id) for r in r1] == [(h, i) for h in ("null", "alt") for i in range(4)]
    assert format_csv(r1, timing=False) == format_csv(r3, timing=False)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("TREECORR_THREADS", "2")
    assert worker_count() == 2
    monkeypatch.delenv("TREECORR_THREADS")
    assert worker_count() >= 1


def test_config_validation():
    with pytest.raises(ParameterError):
        ExperimentConfig(n=3, q=0.2, rho=0.9, k=4)
    with pytest.raises(ParameterError):
        ExperimentConfig(n=30, q=0.2, rho=0.9, k=2, pairs=0)


def test_sweep_writes_directory(tmp_path):
    out = sweep("rho", [0.5, 0.9], SMALL, tmp_path, threads=1, timing=False)
    assert set(out) == {0.5, 0.9}
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["rho=0.5.csv", "rho=0.9.csv", "summary.csv"]
    assert (tmp_path / "summary.csv").read_text().startswith("param,value,auc")


def test_single_pair_runs_repeat():
    cfg = ExperimentConfig(n=30, q=0.2, rho=0.9, k=2, t=5, pairs=1, seed=8)
    assert format_csv(run_experiment(cfg, threads=1), timing=False) == format_csv(
        run_experiment(cfg, threads=1), timing=False
    )


def test_one_cell_sweep_reproduces_run():
    out = sweep("rho", [SMALL.rho], SMALL, threads=1)
    assert format_csv(out[SMALL.rho][1], timing=False) == format_csv(run_experiment(SMALL, threads=1), timing=False)


def test_perfect_correlation_mean_and_power():
    # rho=1: E_P f = |T| = 2 and tau = 1; single-tree-size chi-square spread
    # leaves a sizeable type-II error at K=3, so check the mean and the power
    cfg = ExperimentConfig(n=200, q=0.5, rho=1.0, k=3, t=300, pairs=100, seed=1)
    runs = run_experiment(cfg, threads=1)
    alt = np.array([r.statistic for r in runs if r.hypothesis == "alt"])
    assert abs(alt.mean() - 2.0) <= 3 * alt.std(ddof=1) / np.sqrt(len(alt))
    t1, t2 = error_rates(runs)
    assert 1 - t2 > t1


def test_auc_increases_with_rho():
    base = ExperimentConfig(n=120, q=0.2, rho=0.5, k=4, t=40, pairs=40, seed=2)
    out = sweep("rho", [0.3, 0.7, 0.99], base, threads=1)
    aucs = [out[v][0].auc for v in (0.3, 0.7, 0.99)]
    assert aucs[0] < aucs[1] < aucs[2]


def test_type1_batches_are_binomial():
    # 10 disjoint batches of 100 null pairs; dispersion test on the batch rates
    base = ExperimentConfig(n=60, q=0.2, rho=0.9, k=2, t=10, pairs=100, seed=0)
    rates = []
    for b in range(10):
        runs = run_experiment(replace(base, seed=100 + b), threads=1)
        rates.append(error_rates(runs)[0])
    p = np.mean(rates)
    assert 0 < p < 1
    chi2 = sum((r - p) ** 2 for r in rates) / (p * (1 - p) / 100)
    # 9 degrees of freedom; 99.9% quantile is 27.9
    assert chi2 < 27.9
