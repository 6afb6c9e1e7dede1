"""Per-case summary of the linear systems on random class-constrained Weyl tensors.

For every case: builder agreement, match of the diagonal blocks with their
closed-form entries, the determinant split, and the singular-value spread.
"""
import argparse

import numpy as np

from nullgs.classify import synthetic_weyl
from nullgs.systems import (CASES, assemble_system, det_split_check, display_blocks, extract_rows,
                            layout, solve_trivial, symbolic_system)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--case", default=None, help="restrict to one case key, e.g. odd-k2-L")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    print(f"{'case':>11} {'m':>2} {'size':>4} {'builders':>9} {'blocks':>9} {'split':>5} "
          f"{'min s/s':>9} {'median':>9}")
    for key, c in CASES.items():
        if args.case and key != args.case:
            continue
        for m in ((2, 3) if c.epsilon else (3, 4)):
            sym, lay = symbolic_system(key, m), layout(key, m)
            gap = blk = 0.0
            ratios = []
            for _ in range(args.draws):
                W = synthetic_weyl(c.k, m, c.epsilon, rng)
                Mi = sym.matrix(W.entries)
                gap = max(gap, np.abs(Mi - extract_rows(key, m, W.entries)).max() / W.norm())
                for b, d in zip(lay.blocks, display_blocks(lay, W.entries)):
                    blk = max(blk, np.abs(Mi[np.ix_(b.rows, b.rows)] - d).max() / W.norm())
                ratios.append(solve_trivial(assemble_system(W, key, assume_cy=True).matrix).ratio)
            split = det_split_check(key, m, trials=2, rng=rng).passed
            print(f"{key:>11} {m:>2} {lay.size:>4} {gap:9.1e} {blk:9.1e} {str(split):>5} "
                  f"{min(ratios):9.1e} {np.median(ratios):9.1e}")


if __name__ == "__main__":
    main()
