"""Write a synthetic 118-row Fisher's-exact count table.

Two groups of 73 sequences; 50 positions have a total count of exactly 1
and 68 have totals of at least 2, so filtering at a minimum total of 2
keeps 68 rows. A handful of positions carry a real group difference.
"""
import argparse
import csv

import numpy as np

N = 73


def make_rows(seed: int = 2005):
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(118):
        if k < 50:
            c1 = int(rng.integers(0, 2))
            c2 = 1 - c1
        else:
            p1 = rng.uniform(0.02, 0.15)
            p2 = p1 if rng.random() < 0.7 else min(0.9, p1 + rng.uniform(0.15, 0.4))
            while True:
                c1, c2 = int(rng.binomial(N, p1)), int(rng.binomial(N, p2))
                if c1 + c2 >= 2:
                    break
        rows.append((f"pos{k + 1:03d}", c1, c2, N, N))
    order = rng.permutation(len(rows))
    return [rows[i] for i in order]


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out")
    ap.add_argument("--seed", type=int, default=2005)
    args = ap.parse_args()
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "c1", "c2", "N1", "N2"])
        w.writerows(make_rows(args.seed))
