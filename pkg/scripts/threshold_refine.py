"""Critical a of the J majorant against r-resolution, next to the direct J threshold.

The direct threshold for each r is the largest a at which the sampled
maximum of J (n = 1) is still negative.

    python3 scripts/threshold_refine.py
"""

import sys

import numpy as np

from xistrip.kernels import OscParams
from xistrip.verifier import critical_a_threshold, j_cell, lower_majorant_crossing

XS = np.arange(0.0, 6.0 + 1e-9, 1e-3)


def direct_threshold(r: float, lo: float = 5.0, hi: float = 15.0, tol: float = 1e-6) -> float:
    def bad(a):
        return j_cell(OscParams(a, r), XS)["j_max"] >= 0

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if bad(mid):
            hi = mid
        else:
            lo = mid
    return lo


def main() -> int:
    print("majorant threshold")
    for res in (1e-2, 1e-3, 1e-4, 1e-5):
        print(f"  r-resolution {res:g}: a* = {critical_a_threshold(res):.8f}")
    print(f"  majorant also non-negative for a < {lower_majorant_crossing(1e-4):.6g}")
    print("direct J threshold (largest a with max_x J < 0)")
    for r in (0.05, 0.25, 0.5, 0.75, 0.85, 0.9, 0.95, 0.99):
        print(f"  r = {r:4.2f}: a = {direct_threshold(r):.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
