"""Exact FDR and power of BH by enumerating every joint outcome.

Tests are independent; each test's p-value is computed against its null PMF
while its outcome is weighted by its true PMF. Outcomes sharing a p-value
are merged before enumeration (``collapse=True``), which leaves the result
unchanged and keeps the product small.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Sequence

from .exact import ExactPMF
from .pvalues import Flavor, as_fraction, pvalue_records

__all__ = ["OracleResult", "OracleTooLarge", "exact_fdr_oracle", "DEFAULT_CAP"]

DEFAULT_CAP = 10**7


class OracleTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    exact_fdr: Fraction
    exact_power: Fraction
    outcomes_enumerated: int


def _classes(null: ExactPMF, true: ExactPMF, flavor: Flavor, collapse: bool):
    if true.support != null.support:
        raise ValueError(f"true law {true.kind} and null {null.kind} differ in support")
    pairs = [(rec.value(flavor), true.weight(rec.observation)) for rec in pvalue_records(null)]
    if not collapse:
        return pairs, true.denominator
    merged: dict[Fraction, int] = defaultdict(int)
    for p, w in pairs:
        merged[p] += w
    return sorted(merged.items()), true.denominator


def exact_fdr_oracle(
    null_pmfs: Sequence[ExactPMF],
    alt_models: Sequence[tuple[ExactPMF, ExactPMF]] = (),
    alpha=0.05,
    flavor: Flavor = "mid",
    cap: int = DEFAULT_CAP,
    collapse: bool = True,
) -> OracleResult:
    """Exact FDR/power of BH at level ``alpha``.

    ``null_pmfs`` are the true nulls; ``alt_models`` holds ``(true_pmf,
    null_pmf)`` pairs for the false nulls.
    """
    tests = [(p, p) for p in null_pmfs] + [(null, true) for true, null in alt_models]
    m0, m = len(null_pmfs), len(tests)
    if m == 0:
        raise ValueError("need at least one test")
    n_outcomes = prod(len(null) for null, _ in tests)
    if n_outcomes > cap:
        raise OracleTooLarge(f"{n_outcomes} joint outcomes exceed cap {cap}; shrink the instance")
    alpha = as_fraction(alpha)

    classes = []
    denom = 1
    for null, true in tests:
        cls, d = _classes(null, true, flavor, collapse)
        classes.append(cls)
        denom *= d

    # accumulate weight * V and weight * S grouped by R so each division happens once
    v_by_r: dict[int, int] = defaultdict(int)
    s_total = 0
    idx = range(m)
    for joint in product(*classes):
        order = sorted(idx, key=lambda i: joint[i][0])
        eta = 0
        for rank, i in enumerate(order, start=1):
            if joint[i][0] * m <= rank * alpha:
                eta = rank
        if not eta:
            continue
        w = prod(c[1] for c in joint)
        V = sum(1 for i in order[:eta] if i < m0)
        v_by_r[eta] += w * V
        s_total += w * (eta - V)

    fdr = sum((Fraction(v, r) for r, v in v_by_r.items()), Fraction(0)) / denom
    m1 = m - m0
    power = Fraction(s_total, denom * m1) if m1 else Fraction(0)
    return OracleResult(fdr, power, n_outcomes)
