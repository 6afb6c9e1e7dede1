"""Filtration levels and involutivity of the pp-wave before and after conformal rescaling."""
import argparse

from nullgs import fixtures as fx
from nullgs.verdict import ConformalData, cy_conformal_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[5, 6, 7])
    ap.add_argument("--points", type=int, default=2)
    args = ap.parse_args()
    for n in args.dims:
        f = fx.pp_wave(n, count=args.points)
        for name, om in fx.conformal_factors(n).items():
            r = cy_conformal_check(f.chart, ConformalData(om), f.points, f.frame)
            print(f"n={n} omega={name:<7} weyl {r.levels_before[0]}->{r.levels_after[0]}  "
                  f"cy {r.cy_levels_before[0]}->{r.cy_levels_after[0]}  "
                  f"involutive {r.involutive_before[0]}->{r.involutive_after[0]}  "
                  f"residuals {r.cy_residual:.1e}/{r.weyl_residual:.1e}  invariant {r.invariant}")


if __name__ == "__main__":
    main()
