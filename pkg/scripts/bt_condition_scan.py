"""Binomial-test sufficient condition across total counts.

For alpha = 0.05, pi0 = 0.2, m0 = 2, prints the boundary mass of the
smallest test and whether it stays below (1 - pi0) alpha / m0, under each
boundary rule. Also reports the first failing n when scanning down.
"""
import argparse
from fractions import Fraction

from midfdr.bounds import prop_check
from midfdr.exact import binomial_half


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=Fraction, default=Fraction(1, 20))
    ap.add_argument("--pi0", type=Fraction, default=Fraction(1, 5))
    ap.add_argument("--m0", type=int, default=2)
    ap.add_argument("--lo", type=int, default=100)
    ap.add_argument("--hi", type=int, default=130)
    args = ap.parse_args()

    rules = ("cdf", "conventional", "mid")
    print("n    " + "  ".join(f"{r:>18s}" for r in rules))
    for n in range(args.lo, args.hi + 1):
        cells = []
        for rule in rules:
            rep = prop_check([binomial_half(n)], args.alpha, args.pi0, args.m0, "bt", rule)
            cells.append(f"{float(rep.left_side):.5f} {'ok ' if rep.holds else 'no '}".rjust(18))
        print(f"{n:<4d} " + "  ".join(cells))

    n = args.hi
    while n > 1 and prop_check([binomial_half(n)], args.alpha, args.pi0, args.m0).holds:
        n -= 1
    print(f"scanning down from {args.hi}: first failure at n = {n}")


if __name__ == "__main__":
    main()
