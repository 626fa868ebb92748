"""Monte-Carlo experiments: error rates, ROC curves and AUC.

Every pair draws its graphs from the stream ``(seed, hypothesis, pair_id, 0)``
and its colorings from ``(seed, hypothesis, pair_id, 1)``, so results do not
depend on how pairs are scheduled across worker threads.
"""

from __future__ import annotations

import csv
import io
import math
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .graphs import ParameterError, sample_correlated_pair, sample_independent_pair
from .statistic import StatConfig, evaluate

HYPOTHESES = ("null", "alt")
CSV_HEADER = ("pair_id", "hypothesis", "statistic", "threshold", "decision", "wall_ms")


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    q: float
    rho: float
    k: int
    t: int | None = None
    pairs: int = 100
    seed: int = 0
    mode: str = "signed"
    c: float = 0.5
    output: str | None = None

    def __post_init__(self):
        if self.pairs < 1:
            raise ParameterError("pairs per hypothesis must be at least 1")
        if self.n < self.k + 1:
            raise ParameterError("n must be at least k + 1")
        self.stat_config()  # validates the remaining ranges

    def stat_config(self) -> StatConfig:
        return StatConfig(k=self.k, rho=self.rho, q=self.q, t=self.t, c=self.c, mode=self.mode)


@dataclass(frozen=True)
class TestRun:
    __test__ = False  # not a pytest class

    pair_id: int
    hypothesis: str
    statistic: float
    threshold: float
    decision: str
    wall_ms: float


@dataclass(frozen=True)
class RocCurve:
    points: tuple[tuple[float, float], ...]
    thresholds: tuple[float, ...]
    auc: float


def worker_count() -> int:
    env = os.environ.get("TREECORR_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def draw_pair(cfg: ExperimentConfig, hypothesis: str, pair_id: int):
    h = HYPOTHESES.index(hypothesis)
    key = (cfg.seed, h, pair_id, 0)
    if hypothesis == "null":
        return sample_independent_pair(cfg.n, cfg.q, key)
    p = sample_correlated_pair(cfg.n, cfg.q, cfg.rho, key)
    return p.a, p.b


def run_pair(cfg: ExperimentConfig, hypothesis: str, pair_id: int, stat: StatConfig | None = None) -> TestRun:
    stat = stat or cfg.stat_config()
    a, b = draw_pair(cfg, hypothesis, pair_id)
    res = evaluate(a, b, stat, (cfg.seed, HYPOTHESES.index(hypothesis), pair_id, 1))
    return TestRun(pair_id, hypothesis, res.value, res.threshold, res.decision, res.wall_ms)


def run_experiment(cfg: ExperimentConfig, threads: int | None = None) -> list[TestRun]:
    """All null pairs then all alternative pairs, each in pair order."""
    jobs = [(h, i) for h in HYPOTHESES for i in range(cfg.pairs)]
    stat = cfg.stat_config()
    threads = threads or worker_count()
    if threads == 1:
        runs = [run_pair(cfg, h, i, stat) for h, i in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(lambda job: run_pair(cfg, *job, stat), jobs))
    if cfg.output:
        write_csv(runs, cfg.output)
    return runs


def _fmt(x: float) -> str:
    return format(x, ".17g")


def format_csv(runs: Iterable[TestRun], timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in runs:
        w.writerow([r.pair_id, r.hypothesis, _fmt(r.statistic), _fmt(r.threshold), r.decision,
                    _fmt(r.wall_ms if timing else 0.0)])
    return buf.getvalue()


def write_csv(runs: Iterable[TestRun], path: str | os.PathLike, timing: bool = True) -> None:
    Path(path).write_text(format_csv(runs, timing))


def read_csv(path: str | os.PathLike) -> list[TestRun]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if rows and tuple(rows[0].keys()) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {tuple(rows[0].keys())}")
    return [
        TestRun(int(r["pair_id"]), r["hypothesis"], float(r["statistic"]), float(r["threshold"]),
                r["decision"], float(r["wall_ms"]))
        for r in rows
    ]


def split_scores(runs: Sequence[TestRun]) -> tuple[list[float], list[float]]:
    null = [r.statistic for r in runs if r.hypothesis == "null"]
    alt = [r.statistic for r in runs if r.hypothesis == "alt"]
    return null, alt


def error_rates(runs: Sequence[TestRun]) -> tuple[float, float]:
    """Type-I (null declared correlated) and type-II (alt declared independent)."""
    null = [r for r in runs if r.hypothesis == "null"]
    alt = [r for r in runs if r.hypothesis == "alt"]
    t1 = sum(r.decision == "correlated" for r in null) / len(null) if null else math.nan
    t2 = sum(r.decision == "independent" for r in alt) / len(alt) if alt else math.nan
    return t1, t2


def roc_auc(null_scores: Sequence[float], alt_scores: Sequence[float]) -> RocCurve:
    """ROC over every observed threshold plus the two infinite endpoints.

    A pair is called correlated when its score is ``>=`` the threshold.  Tied
    null/alt scores move both rates in one step, so the trapezoid area
    credits ties with one half.
    """
    if len(null_scores) == 0 or len(alt_scores) == 0:
        raise ParameterError("ROC needs at least one null and one alternative score")
    null = np.sort(np.asarray(null_scores, dtype=float))
    alt = np.sort(np.asarray(alt_scores, dtype=float))
    cuts = np.unique(np.concatenate([null, alt]))[::-1]
    thresholds = [math.inf] + cuts.tolist() + [-math.inf]
    pts = []
    for thr in thresholds:
        fpr = (len(null) - np.searchsorted(null, thr, side="left")) / len(null)
        tpr = (len(alt) - np.searchsorted(alt, thr, side="left")) / len(alt)
        pts.append((float(fpr), float(tpr)))
    area = math.fsum((x1 - x0) * (y0 + y1) / 2.0 for (x0, y0), (x1, y1) in zip(pts, pts[1:]))
    return RocCurve(tuple(pts), tuple(thresholds), area)


def mann_whitney_auc(null_scores: Sequence[float], alt_scores: Sequence[float]) -> float:
    """``P(alt > null) + P(alt == null) / 2`` over all cross pairs."""
    null = np.asarray(null_scores, dtype=float)[None, :]
    alt = np.asarray(alt_scores, dtype=float)[:, None]
    wins = np.count_nonzero(alt > null) + 0.5 * np.count_nonzero(alt == null)
    return float(wins / (null.size * alt.size))


def format_roc(curve: RocCurve) -> str:
    lines = ["threshold,fpr,tpr"]
    lines += [f"{_fmt(t)},{_fmt(x)},{_fmt(y)}" for t, (x, y) in zip(curve.thresholds, curve.points)]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CellSummary:
    param: str
    value: float
    auc: float
    type1: float
    type2: float
    median_wall_ms: float


def summarize(runs: Sequence[TestRun], param: str = "", value: float = math.nan) -> CellSummary:
    curve = roc_auc(*split_scores(runs))
    t1, t2 = error_rates(runs)
    return CellSummary(param, value, curve.auc, t1, t2, statistics.median(r.wall_ms for r in runs))


SWEEPABLE = ("rho", "q", "k", "n", "t")


def sweep(
    param: str,
    values: Sequence[float],
    base: ExperimentConfig,
    outdir: str | os.PathLike | None = None,
    threads: int | None = None,
    timing: bool = True,
) -> dict[float, tuple[RocCurve, list[TestRun]]]:
    """Run ``base`` once per value of ``param``; one CSV per cell in ``outdir``."""
    if param not in SWEEPABLE:
        raise ParameterError(f"cannot sweep {param!r}; choose from {SWEEPABLE}")
    out = {}
    summaries = []
    for v in values:
        v = int(v) if param in ("k", "n", "t") else float(v)
        cfg = replace(base, **{param: v}, output=None)
        runs = run_experiment(cfg, threads)
        out[v] = (roc_auc(*split_scores(runs)), runs)
        summaries.append(summarize(runs, param, v))
        if outdir is not None:
            Path(outdir).mkdir(parents=True, exist_ok=True)
            write_csv(runs, Path(outdir) / f"{param}={v}.csv", timing)
    if outdir is not None:
        Path(outdir, "summary.csv").write_text(format_summary(summaries, timing))
    return out


def format_summary(rows: Sequence[CellSummary], timing: bool = True) -> str:
    lines = ["param,value,auc,type1,type2,median_wall_ms"]
    for r in rows:
        wall = r.median_wall_ms if timing else 0.0
        lines.append(f"{r.param},{_fmt(r.value)},{_fmt(r.auc)},{_fmt(r.type1)},{_fmt(r.type2)},{_fmt(wall)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Comparison:
    signed: CellSummary
    unsigned: CellSummary
    signed_runs: list[TestRun]
    unsigned_runs: list[TestRun]

    @property
    def speedup(self) -> float:
        return self.signed.median_wall_ms / self.unsigned.median_wall_ms


def compare_signed_unsigned(
    base: ExperimentConfig, k_unsigned: int | None = None, threads: int | None = None
) -> Comparison:
    """Signed (centered) and unsigned (raw count) statistics on the same pairs.

    Both runs share ``seed``, hence the same graphs and the same colorings.
    """
    signed_cfg = replace(base, mode="signed", output=None)
    unsigned_cfg = replace(base, mode="unsigned", k=k_unsigned or base.k, output=None)
    rs = run_experiment(signed_cfg, threads)
    ru = run_experiment(unsigned_cfg, threads)
    return Comparison(summarize(rs, "signed", base.k), summarize(ru, "unsigned", unsigned_cfg.k), rs, ru)


def format_comparison(cmp: Comparison, timing: bool = True) -> str:
    return format_summary([cmp.signed, cmp.unsigned], timing)
