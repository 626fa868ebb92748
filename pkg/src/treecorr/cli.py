"""Command line: ``treecorr {trees,generate,stat,simulate,roc,sweep,compare}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness
from .graphs import (
    density_estimate,
    read_edgelist,
    sample_correlated_pair,
    sample_independent_pair,
    write_edgelist,
)
from .statistic import StatConfig, evaluate
from .trees import K_MAX, enumerate_free_trees

MODES = ("exact", "signed", "unsigned", "unsigned-exact", "signed-cc", "unsigned-cc")


def _fmt(x: float) -> str:
    return format(x, ".17g")


def cmd_trees(args) -> int:
    fam = enumerate_free_trees(args.k, k_max=max(K_MAX, args.k) if args.force else K_MAX)
    print(f"k\t{fam.k}")
    print(f"count\t{len(fam)}")
    print("canon\taut")
    for h in fam:
        print(f"{h.canon.decode()}\t{h.aut}")
    return 0


def cmd_generate(args) -> int:
    if args.rho is None:
        a, b = sample_independent_pair(args.n, args.q, args.seed)
        note = f"independent G({args.n}, {args.q}) seed={args.seed}"
    else:
        p = sample_correlated_pair(args.n, args.q, args.rho, args.seed)
        a, b = p.a, p.b
        note = f"correlated G({args.n}, {args.q}, rho={args.rho}) seed={args.seed}"
    write_edgelist(a, args.out_a, note + " graph A")
    write_edgelist(b, args.out_b, note + " graph B")
    return 0


def cmd_stat(args) -> int:
    a = read_edgelist(args.graph_a)
    b = read_edgelist(args.graph_b)
    q = args.q
    if q is None:
        # pooled density of both graphs over 2 C(n, 2) slots
        q = density_estimate(a.n, (a.m + b.m) / 2)
        print(f"warning: --q not given, centering with the pooled edge density q={q:.6g}",
              file=sys.stderr)
    cfg = StatConfig(k=args.k, rho=args.rho, q=q, t=args.t, c=args.c, mode=args.mode)
    res = evaluate(a, b, cfg, args.seed)
    wall = res.wall_ms if not args.no_timing else 0.0
    print("statistic\tthreshold\tdecision\twall_ms")
    print(f"{_fmt(res.value)}\t{_fmt(res.threshold)}\t{res.decision}\t{_fmt(wall)}")
    return 0


def _experiment(args, **over) -> harness.ExperimentConfig:
    kw = dict(n=args.n, q=args.q, rho=args.rho, k=args.k, t=args.t, pairs=args.pairs,
              seed=args.seed, mode=args.mode, c=args.c)
    kw.update(over)
    return harness.ExperimentConfig(**kw)


def cmd_simulate(args) -> int:
    cfg = _experiment(args)
    runs = harness.run_experiment(cfg)
    text = harness.format_csv(runs, timing=not args.no_timing)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    t1, t2 = harness.error_rates(runs)
    print(f"type1\t{_fmt(t1)}\ntype2\t{_fmt(t2)}", file=sys.stderr)
    return 0


def cmd_roc(args) -> int:
    runs = harness.read_csv(args.csv)
    curve = harness.roc_auc(*harness.split_scores(runs))
    out = Path(args.out) if args.out else Path(args.csv).with_suffix(".roc.csv")
    out.write_text(harness.format_roc(curve))
    print(f"auc\t{_fmt(curve.auc)}")
    return 0


def _values(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def cmd_sweep(args) -> int:
    base = _experiment(args)
    res = harness.sweep(args.param, _values(args.values), base, args.outdir, timing=not args.no_timing)
    for v, (curve, _) in res.items():
        print(f"{args.param}={v}\tauc\t{_fmt(curve.auc)}")
    return 0


def cmd_compare(args) -> int:
    base = _experiment(args)
    cmp = harness.compare_signed_unsigned(base, args.k_unsigned)
    text = harness.format_comparison(cmp, timing=not args.no_timing)
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    if not args.no_timing:
        print(f"speedup\t{_fmt(cmp.speedup)}")
    return 0


def _add_model(p, need_rho=True):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--rho", type=float, required=need_rho)


def _add_stat(p, mode="signed"):
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, default=None, help="colorings per side (default ceil(1/r))")
    p.add_argument("--c", type=float, default=0.5, help="threshold constant in (0, 1)")
    p.add_argument("--mode", choices=MODES, default=mode)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-timing", action="store_true", help="write wall_ms as 0 for byte-stable output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="treecorr", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("trees", help="list unlabeled trees with k edges")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--force", action="store_true", help="allow k above the default cap")
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("generate", help="write a sampled graph pair as edge lists")
    _add_model(p, need_rho=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-a", required=True)
    p.add_argument("--out-b", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("stat", help="evaluate the statistic on two edge-list files")
    p.add_argument("--graph-a", required=True)
    p.add_argument("--graph-b", required=True)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--rho", type=float, required=True)
    _add_stat(p)
    p.set_defaults(func=cmd_stat)

    p = sub.add_parser("simulate", help="Monte-Carlo run under both hypotheses, CSV out")
    _add_model(p)
    _add_stat(p)
    p.add_argument("--pairs", type=int, default=100, help="pairs per hypothesis")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("roc", help="ROC curve and AUC from a simulate CSV")
    p.add_argument("csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("sweep", help="simulate over a grid of one parameter")
    _add_model(p)
    _add_stat(p)
    p.add_argument("--pairs", type=int, default=100)
    p.add_argument("--param", choices=harness.SWEEPABLE, required=True)
    p.add_argument("--values", required=True, help="comma-separated grid")
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="signed vs unsigned statistic on the same pairs")
    _add_model(p)
    _add_stat(p)
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--k-unsigned", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
