"""Order efficiency of a lossless 0/pi grating against slitness.

    python scripts/slitness_curves.py out.csv --orders 1 2 3

One column per diffraction order; the rows for S = (m - j) / 2m with valid
(m, j) reach 4 / (pi m)^2.
"""
import argparse
import csv

import numpy as np

from zoneplate.efficiency import slitness_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out")
    ap.add_argument("--orders", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--points", type=int, default=199)
    args = ap.parse_args()

    s = np.linspace(0, 1, args.points + 2)[1:-1]
    cols = [slitness_scan(k, k, s) for k in args.orders]
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["S"] + [f"order_{k}" for k in args.orders])
        for i, si in enumerate(s):
            w.writerow([f"{si:.6f}"] + [f"{c[i]:.9g}" for c in cols])
    for k, c in zip(args.orders, cols):
        print(f"order {k}: max {np.max(c):.4f} at S = {s[np.argmax(c)]:.3f}")


if __name__ == "__main__":
    main()
