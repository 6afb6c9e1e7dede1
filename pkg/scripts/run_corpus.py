"""Curvature identities and Bianchi residuals over a seeded random-metric corpus."""
import argparse
import json
import time

import numpy as np

from nullgs import fixtures as fx
from nullgs.bianchi import bianchi_residuals_at
from nullgs.chart import curvature_at, curvature_residuals, jet_at
from nullgs.config import CorpusConfig
from nullgs.frame import frame_point
from nullgs.verdict import cotton_york_agreement


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=100)
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None, help="write per-metric rows as JSON")
    args = ap.parse_args()

    cfg = CorpusConfig(size=args.size, degree=args.degree, seed=args.seed)
    t0 = time.perf_counter()
    rows = []
    for i, f in enumerate(fx.corpus(cfg)):
        x = f.points[0]
        jet = jet_at(f.chart, x)
        curv = max(curvature_residuals(curvature_at(jet), jet.ginv).values())
        fp = frame_point(f.chart, f.frame, x)
        bian = bianchi_residuals_at(fp)
        rows.append({"i": i, "n": f.chart.n, "curvature": curv, "bianchi": bian.max_relative,
                     "worst_family": max(bian.residuals, key=bian.residuals.get),
                     "cy_routes": cotton_york_agreement(fp)})
    dt = time.perf_counter() - t0

    print(f"{'n':>2} {'count':>5} {'curvature':>10} {'bianchi':>10} {'cy routes':>10}")
    for n in sorted({r["n"] for r in rows}):
        sel = [r for r in rows if r["n"] == n]
        print(f"{n:>2} {len(sel):>5} {max(r['curvature'] for r in sel):10.2e} "
              f"{max(r['bianchi'] for r in sel):10.2e} {max(r['cy_routes'] for r in sel):10.2e}")
    print(f"{len(rows)} metrics in {dt:.1f}s")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    np.set_printoptions(precision=3)
    main()
