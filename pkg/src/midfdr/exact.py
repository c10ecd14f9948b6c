"""Exact finite-support distributions with integer weights.

Every PMF is stored as a list of non-negative integer numerators over one
shared integer denominator, so equality of PMF values (tie classes) is
decided exactly. Floats appear only when a caller asks for them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

__all__ = [
    "ExactPMF",
    "binomial_half",
    "binomial",
    "hypergeometric",
    "mode_set",
    "sup_norm",
    "cdf_at",
]


@dataclass(frozen=True)
class ExactPMF:
    """Discrete distribution on the contiguous range ``lo .. lo+len(numerators)-1``.

    ``kind`` is a tuple tag, e.g. ``("binomial-half", n)`` or
    ``("hypergeometric", N1, N2, M)``.
    """

    lo: int
    numerators: tuple[int, ...]
    denominator: int
    kind: tuple

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        if not self.numerators:
            raise ValueError("empty support")
        if any(w <= 0 for w in self.numerators):
            raise ValueError("numerators must be strictly positive")
        if sum(self.numerators) != self.denominator:
            raise ValueError("numerators do not sum to the denominator")

    @property
    def hi(self) -> int:
        return self.lo + len(self.numerators) - 1

    @property
    def support(self) -> range:
        return range(self.lo, self.hi + 1)

    def __len__(self) -> int:
        return len(self.numerators)

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def weight(self, x: int) -> int:
        """Integer numerator at ``x``; 0 off the support."""
        if x in self:
            return self.numerators[x - self.lo]
        return 0

    def mass(self, x: int) -> Fraction:
        return Fraction(self.weight(x), self.denominator)

    def probabilities(self) -> np.ndarray:
        # int / int true division is correctly rounded even for huge operands
        return np.array([w / self.denominator for w in self.numerators])

    @property
    def is_symmetric(self) -> bool:
        w = self.numerators
        return all(w[i] == w[-1 - i] for i in range(len(w) // 2 + 1))


def binomial_half(n: int) -> ExactPMF:
    """Binomial(0.5, n): numerators C(n, x), denominator 2**n."""
    if n < 1:
        raise ValueError(f"binomial_half needs n >= 1, got {n}")
    return ExactPMF(0, tuple(comb(n, x) for x in range(n + 1)), 1 << n, ("binomial-half", n))


def binomial(n: int, theta) -> ExactPMF:
    """Binomial(theta, n) for rational ``theta`` in (0, 1).

    Used as a data-generating (alternative) law; ``theta`` is converted to
    an exact fraction, so pass ``Fraction`` or a decimal string for exact
    decimal values.
    """
    theta = Fraction(theta)
    if not 0 < theta < 1:
        raise ValueError("theta must lie strictly between 0 and 1")
    if n < 1:
        raise ValueError(f"binomial needs n >= 1, got {n}")
    a, b = theta.numerator, theta.denominator - theta.numerator
    nums = tuple(comb(n, x) * a**x * b ** (n - x) for x in range(n + 1))
    return ExactPMF(0, nums, theta.denominator**n, ("binomial", n, theta))


def hypergeometric(N1: int, N2: int, M: int, odds=1) -> ExactPMF:
    """Count in group 1 given margins (N1, N2, M).

    With ``odds == 1`` this is the central hypergeometric law with
    denominator C(N1+N2, M). Other odds ratios give Fisher's noncentral
    hypergeometric law (again exact for rational odds).
    """
    if N1 < 1 or N2 < 1:
        raise ValueError("group sizes must be positive")
    if not 1 <= M <= N1 + N2:
        raise ValueError(f"margin M={M} outside 1..{N1 + N2}")
    lo, hi = max(0, M - N2), min(N1, M)
    odds = Fraction(odds)
    if odds <= 0:
        raise ValueError("odds ratio must be positive")
    if odds == 1:
        nums = tuple(comb(N1, x) * comb(N2, M - x) for x in range(lo, hi + 1))
        return ExactPMF(lo, nums, comb(N1 + N2, M), ("hypergeometric", N1, N2, M))
    a, b = odds.numerator, odds.denominator
    nums = tuple(
        comb(N1, x) * comb(N2, M - x) * a ** (x - lo) * b ** (hi - x) for x in range(lo, hi + 1)
    )
    return ExactPMF(lo, nums, sum(nums), ("hypergeometric", N1, N2, M, odds))


def mode_set(pmf: ExactPMF) -> set[int]:
    top = max(pmf.numerators)
    return {x for x, w in zip(pmf.support, pmf.numerators) if w == top}


def sup_norm(pmf: ExactPMF) -> Fraction:
    return Fraction(max(pmf.numerators), pmf.denominator)


def cdf_at(pmf: ExactPMF, x: int) -> Fraction:
    if x < pmf.lo:
        return Fraction(0)
    if x >= pmf.hi:
        return Fraction(1)
    return Fraction(sum(pmf.numerators[: x - pmf.lo + 1]), pmf.denominator)
