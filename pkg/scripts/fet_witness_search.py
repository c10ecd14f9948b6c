"""Search (N, M) for Fisher's-exact boundary masses matching target values.

For each common group size N and total M, computes the mass at y(alpha)
(largest outcome at or below the smaller mode with CDF <= alpha) and at
y(alpha) + 1, and lists the pairs within the tolerance of each target.
"""
import argparse
from fractions import Fraction

from midfdr.exact import hypergeometric, mode_set

TARGETS = (0.01928, 0.01931, 0.01934)


def masses(N, M, alpha):
    pmf = hypergeometric(N, N, M)
    xc = min(mode_set(pmf))
    acc, y = 0, None
    for x, w in zip(pmf.support, pmf.numerators):
        acc += w
        if x <= xc and Fraction(acc, pmf.denominator) <= alpha:
            y = x
    if y is None:
        return None, float(pmf.mass(pmf.lo))
    return float(pmf.mass(y)), float(pmf.mass(y + 1))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=Fraction, default=Fraction(1, 20))
    ap.add_argument("--max-N", type=int, default=200)
    ap.add_argument("--tol", type=float, default=1e-5)
    args = ap.parse_args()

    hits = {t: [] for t in TARGETS}
    for N in range(2, args.max_N + 1):
        for M in range(2, 2 * N):
            at_y, at_next = masses(N, M, args.alpha)
            for t in TARGETS:
                if at_y is not None and abs(at_y - t) <= args.tol:
                    hits[t].append((N, M, "f(y)", at_y))
                if abs(at_next - t) <= args.tol:
                    hits[t].append((N, M, "f(y+1)", at_next))
    for t, found in hits.items():
        print(f"target {t}:")
        for N, M, which, v in found or [("-", "-", "none", float("nan"))]:
            print(f"  N={N} M={M} {which} = {v:.6f}")

    # consecutive N with a shared M and the same rule hitting all targets in order
    t1, t2, t3 = TARGETS
    keyed = {t: {(N, M, w) for N, M, w, _ in hits[t]} for t in TARGETS}
    runs = sorted((N, M, w) for N, M, w in keyed[t1]
                  if (N + 1, M, w) in keyed[t2] and (N + 2, M, w) in keyed[t3])
    print("consistent runs:", ", ".join(f"N={N}..{N + 2} M={M} {w}" for N, M, w in runs) or "none")


if __name__ == "__main__":
    main()
