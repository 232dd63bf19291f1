"""Exploratory scan beyond a = 9.508.

For each a the script reports, with n = 1:

* the closed-form J majorant maximised over r,
* the sampled maximum of J itself (largest over r),
* the largest f'(r) over the r grid.

The region bound only concerns the first column; the other two show where
the underlying claims actually stop holding.

    python3 scripts/extended_a_scan.py [--a-max 20] [--step 0.5] [--csv out.csv]
"""

import argparse
import csv
import sys

import numpy as np

from xistrip.kernels import OscParams
from xistrip.verifier import j_cell, majorant_max_over_r
from xistrip.xi_eval import f_prime

R_GRID = np.round(np.arange(0.05, 0.951, 0.05), 12)
XS = np.arange(0.0, 6.0 + 1e-9, 1e-3)


def row(a: float) -> dict:
    maj, maj_r = majorant_max_over_r(a, 1e-3)
    cells = [(j_cell(OscParams(a, r), XS)["j_max"], r) for r in R_GRID]
    j_max, j_r = max(cells)
    fps = [(f_prime(r, a).value, r) for r in R_GRID]
    fp_max, fp_r = max(fps)
    return {"a": a, "majorant_max": maj, "majorant_r": maj_r, "J_max": j_max, "J_r": j_r,
            "f_prime_max": fp_max, "f_prime_r": fp_r}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="exploratory a-scan beyond the region bound")
    parser.add_argument("--a-min", type=float, default=8.0)
    parser.add_argument("--a-max", type=float, default=20.0)
    parser.add_argument("--step", type=float, default=0.5)
    parser.add_argument("--csv")
    args = parser.parse_args(argv)
    a_values = np.round(np.arange(args.a_min, args.a_max + 1e-9, args.step), 12)
    rows = [row(float(a)) for a in a_values]
    print(f"{'a':>6} {'max_r majorant':>15} {'max J':>12} {'at r':>5} {'max f_prime':>13} {'at r':>5}")
    for x in rows:
        print(f"{x['a']:6.2f} {x['majorant_max']:15.6g} {x['J_max']:12.6g} {x['J_r']:5.2f} "
              f"{x['f_prime_max']:13.6g} {x['f_prime_r']:5.2f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            for x in rows:
                writer.writerow({k: format(v, ".17g") for k, v in x.items()})
    sign_change = next((x["a"] for x in rows if x["f_prime_max"] >= 0), None)
    print(f"first a with f'(r) >= 0 somewhere on the r grid: {sign_change}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
