"""Flip the sign of every connection term in every Bianchi family and report detection.

The acceptance suite flips one term per family; this scan covers all of them.
"""
import argparse

import numpy as np

from nullgs import fixtures as fx
from nullgs.bianchi import families_for, family, gamma_terms, mutant_residual
from nullgs.frame import frame_point


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=7)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--threshold", type=float, default=1e-3)
    args = ap.parse_args()

    f = fx.random_fixture(args.n, 3, np.random.default_rng(args.seed))
    fp = frame_point(f.chart, f.frame, f.points[0])
    eps = args.n % 2
    total = caught = 0
    print(f"{'family':>6} {'terms':>5} {'caught':>6} {'weakest':>10}")
    for name in families_for(eps):
        fam = family(name)
        vals = [mutant_residual(fp, name, i) for i in gamma_terms(fam, eps)]
        hit = sum(v > args.threshold for v in vals)
        total += len(vals)
        caught += hit
        print(f"{name:>6} {len(vals):>5} {hit:>6} {min(vals, default=float('nan')):10.2e}")
    print(f"{caught}/{total} single-term sign flips exceed {args.threshold:g}")


if __name__ == "__main__":
    main()
