"""Two-sided conventional, mid and randomized p-values for discrete tests.

For an observation ``x0`` under a null PMF ``f``::

    l(x0) = P(f(X) <  f(x0))      e(x0) = P(f(X) == f(x0))
    conventional = l + e          mid = l + e/2
    randomized   = l + (1 - u) e,  u ~ Uniform(0, 1)

All comparisons of PMF values use the exact integer numerators.
"""
from __future__ import annotations

from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal, Optional

from .exact import ExactPMF, binomial_half, hypergeometric, mode_set

Flavor = Literal["conventional", "mid"]

__all__ = [
    "PValueRecord",
    "PValueSupport",
    "tail_quantities",
    "pvalue_record",
    "pvalue_records",
    "randomized_pvalue",
    "pvalue_support",
    "pvalue_cdf",
    "boundary_x",
    "boundary_y",
    "bt_pvalues",
    "fet_pvalues",
    "as_fraction",
]


def as_fraction(t) -> Fraction:
    """Exact rational for ``t``; floats keep their exact binary value."""
    return t if isinstance(t, Fraction) else Fraction(t)


@dataclass(frozen=True)
class PValueRecord:
    observation: int
    l: Fraction
    e: Fraction

    @property
    def conventional(self) -> Fraction:
        return self.l + self.e

    @property
    def mid(self) -> Fraction:
        return self.l + self.e / 2

    def value(self, flavor: Flavor) -> Fraction:
        if flavor == "conventional":
            return self.conventional
        if flavor == "mid":
            return self.mid
        raise ValueError(f"unknown p-value flavor {flavor!r}")


@dataclass(frozen=True)
class PValueSupport:
    """Distinct mid p-values with their conventional p-values and null masses."""

    entries: tuple[tuple[Fraction, Fraction, Fraction], ...]

    @property
    def mids(self):
        return [m for m, _, _ in self.entries]

    @property
    def masses(self):
        return [w for _, _, w in self.entries]


def _tie_classes(pmf: ExactPMF):
    """Sorted distinct numerators and, for each, (mass strictly below, tied mass)."""
    counts = Counter(pmf.numerators)
    below = 0
    classes = {}
    for w in sorted(counts):
        tied = w * counts[w]
        classes[w] = (below, tied)
        below += tied
    return classes


def tail_quantities(pmf: ExactPMF, x0: int) -> tuple[Fraction, Fraction]:
    if x0 not in pmf:
        raise ValueError(f"observation {x0} is impossible under {pmf.kind}")
    w0 = pmf.weight(x0)
    below = sum(w for w in pmf.numerators if w < w0)
    tied = sum(w for w in pmf.numerators if w == w0)
    return Fraction(below, pmf.denominator), Fraction(tied, pmf.denominator)


def pvalue_record(pmf: ExactPMF, x0: int) -> PValueRecord:
    l, e = tail_quantities(pmf, x0)
    return PValueRecord(x0, l, e)


def pvalue_records(pmf: ExactPMF) -> list[PValueRecord]:
    """Records for every support point; one pass over the tie classes."""
    classes = _tie_classes(pmf)
    d = pmf.denominator
    out = []
    for x, w in zip(pmf.support, pmf.numerators):
        below, tied = classes[w]
        out.append(PValueRecord(x, Fraction(below, d), Fraction(tied, d)))
    return out


def randomized_pvalue(pmf: ExactPMF, x0: int, u: float) -> float:
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"u={u} outside [0, 1]")
    l, e = tail_quantities(pmf, x0)
    return float(l) + (1.0 - u) * float(e)


def pvalue_support(pmf: ExactPMF) -> PValueSupport:
    d = pmf.denominator
    entries = []
    for below, tied in _tie_classes(pmf).values():
        entries.append((Fraction(2 * below + tied, 2 * d), Fraction(below + tied, d), Fraction(tied, d)))
    return PValueSupport(tuple(entries))


def pvalue_cdf(pmf: ExactPMF, flavor: Flavor = "conventional") -> Callable[[object], Fraction]:
    """Exact null CDF ``t -> P(P(X) <= t)`` of the chosen p-value."""
    sup = pvalue_support(pmf)
    idx = 0 if flavor == "mid" else 1
    values = [entry[idx] for entry in sup.entries]
    cum = []
    acc = Fraction(0)
    for entry in sup.entries:
        acc += entry[2]
        cum.append(acc)

    def cdf(t) -> Fraction:
        k = bisect_right(values, as_fraction(t))
        return cum[k - 1] if k else Fraction(0)

    return cdf


def boundary_x(pmf: ExactPMF, t, flavor: Flavor = "conventional") -> set[int]:
    """Support points whose p-values are the closest to ``t`` from below.

    Returns an empty set when no p-value is at most ``t``.
    """
    t = as_fraction(t)
    best = None
    hits: set[int] = set()
    for rec in pvalue_records(pmf):
        p = rec.value(flavor)
        if p > t:
            continue
        if best is None or p > best:
            best, hits = p, {rec.observation}
        elif p == best:
            hits.add(rec.observation)
    return hits


def boundary_y(pmf: ExactPMF, t) -> Optional[int]:
    """Largest ``x`` at or below the smaller mode with ``F(x) <= t``, else None."""
    t = as_fraction(t)
    x_check = min(mode_set(pmf))
    d = pmf.denominator
    acc = 0
    y = None
    for x, w in zip(pmf.support, pmf.numerators):
        if x > x_check:
            break
        acc += w
        if Fraction(acc, d) <= t:
            y = x
        else:
            break
    return y


def bt_pvalues(c1: int, c2: int) -> PValueRecord:
    """Binomial test of equal Poisson means, observed ``c1`` out of ``c1 + c2``."""
    if c1 < 0 or c2 < 0:
        raise ValueError("counts must be non-negative")
    if c1 + c2 == 0:
        raise ValueError("binomial test needs a positive total count")
    return pvalue_record(binomial_half(c1 + c2), c1)


def fet_pvalues(c1: int, c2: int, N1: int, N2: int) -> PValueRecord:
    """Fisher's exact test, conditioning on the total ``c1 + c2``."""
    if not (0 <= c1 <= N1 and 0 <= c2 <= N2):
        raise ValueError(f"counts ({c1}, {c2}) violate margins ({N1}, {N2})")
    if c1 + c2 == 0:
        raise ValueError("Fisher's exact test needs a positive total count")
    return pvalue_record(hypergeometric(N1, N2, c1 + c2), c1)

