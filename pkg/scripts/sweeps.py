"""Parameter sweeps: AUC and error rates against rho, q or K.

Writes one CSV per grid value plus ``summary.csv`` into ``--outdir``.

    python3 scripts/sweeps.py rho --outdir results/sweep_rho
    python3 scripts/sweeps.py k --values 3,4,5,6 --outdir results/sweep_k
"""

from __future__ import annotations

import argparse
import sys

from treecorr import harness

DEFAULT_GRIDS = {
    "rho": "0.7,0.8,0.9,0.95,0.99",
    "q": "0.02,0.05,0.1,0.2,0.4",
    "k": "3,4,5,6",
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("param", choices=sorted(DEFAULT_GRIDS))
    ap.add_argument("--values", default=None, help="comma-separated grid (default depends on param)")
    ap.add_argument("--n", type=int, default=300)
    ap.add_argument("--q", type=float, default=0.1)
    ap.add_argument("--rho", type=float, default=0.99)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--t", type=int, default=200)
    ap.add_argument("--pairs", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", required=True)
    args = ap.parse_args(argv)

    base = harness.ExperimentConfig(n=args.n, q=args.q, rho=args.rho, k=args.k, t=args.t,
                                    pairs=args.pairs, seed=args.seed)
    grid = [float(v) for v in (args.values or DEFAULT_GRIDS[args.param]).split(",")]
    res = harness.sweep(args.param, grid, base, args.outdir)
    for v, (curve, runs) in res.items():
        t1, t2 = harness.error_rates(runs)
        print(f"{args.param}={v}\tauc={curve.auc:.3f}\ttype1={t1:.3f}\ttype2={t2:.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
