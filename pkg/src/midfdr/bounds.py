"""Conservativeness conditions and FDR upper bounds for BH on mid p-values.

The sufficient conditions compare the largest point mass a true null can
put just past its rejection boundary with the slack ``(1 - pi0) alpha / m0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Callable, Literal, Sequence

from .exact import ExactPMF, mode_set
from .pvalues import as_fraction, pvalue_records

Family = Literal["bt", "fet"]
Rule = Literal["cdf", "conventional", "mid"]

__all__ = [
    "BoundReport",
    "check_superuniform",
    "boundary_mass",
    "prop_check",
    "prop_bound",
    "theorem1_bound",
    "calibrate_alpha",
    "GRID",
]

GRID = 10**6


@dataclass(frozen=True)
class BoundReport:
    condition_id: str
    left_side: Fraction
    right_side: Fraction
    witnesses: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.left_side <= self.right_side

    def summary(self) -> str:
        verdict = "HOLDS" if self.holds else "FAILS"
        return f"left {float(self.left_side):.5f}, right {float(self.right_side):.5f}, {verdict}"


def check_superuniform(
    cdfs: Sequence[Callable[[object], object]], taus: Sequence, alpha, m0: int
) -> BoundReport:
    """Sufficient condition ``max_r max_i F_i(tau_r) / r <= alpha / m0``.

    ``cdfs`` are the null CDFs of the true-null p-values.
    """
    if not cdfs or m0 < 1:
        raise ValueError("need at least one true null")
    if len(cdfs) > len(taus):
        raise ValueError("more null CDFs than tests")
    if any(b < a for a, b in zip(taus, taus[1:])):
        raise ValueError("critical constants must be non-decreasing")
    left = Fraction(0)
    arg = None
    for r, tau in enumerate(taus, start=1):
        for i, cdf in enumerate(cdfs):
            v = as_fraction(cdf(tau)) / r
            if arg is None or v > left:
                left, arg = v, (i, r)
    return BoundReport("eq8", left, as_fraction(alpha) / m0, {"i": arg[0], "r": arg[1]})


def _pieces(pmf: ExactPMF, rule: Rule):
    """Left-side mass as a step function of the level.

    Returns ``(base, [(threshold, value), ...])``: the value is ``base`` below
    the first threshold and ``value_k`` on ``[threshold_k, threshold_{k+1})``.
    """
    d = pmf.denominator
    if rule == "cdf":
        # f(y(t) + 1) with y(t) = max{x <= smaller mode : F(x) <= t}
        x_check = min(mode_set(pmf))
        steps = []
        acc = 0
        for x, w in zip(pmf.support, pmf.numerators):
            if x > x_check:
                break
            acc += w
            steps.append((Fraction(acc, d), Fraction(pmf.weight(x + 1), d)))
        return Fraction(pmf.numerators[0], d), steps
    if rule in ("conventional", "mid"):
        best: dict[Fraction, int] = {}
        for rec in pvalue_records(pmf):
            p = rec.value(rule)
            best[p] = max(best.get(p, 0), pmf.weight(rec.observation))
        return Fraction(0), [(p, Fraction(best[p], d)) for p in sorted(best)]
    raise ValueError(f"unknown boundary rule {rule!r}")


def _piece_value(base, steps, t: Fraction) -> Fraction:
    v = base
    for thr, val in steps:
        if thr > t:
            break
        v = val
    return v


def boundary_mass(pmf: ExactPMF, t, rule: Rule = "cdf") -> Fraction:
    """Null mass of the boundary outcome at level ``t``.

    ``rule="cdf"`` takes ``f(y(t) + 1)``: the first outcome (below the mode)
    whose CDF exceeds ``t``, or the minimum support point when none is at
    most ``t``. ``"conventional"``/``"mid"`` take the largest ``f`` over the
    outcomes whose p-values are closest to ``t`` from below, 0 if none.
    """
    base, steps = _pieces(pmf, rule)
    return _piece_value(base, steps, as_fraction(t))


def _select_i0(pmfs: Sequence[ExactPMF], family: Family) -> int:
    if not pmfs:
        raise ValueError("need at least one test")
    if family == "bt":
        sizes = []
        for p in pmfs:
            if p.kind[0] != "binomial-half":
                raise ValueError(f"binomial test expects Binomial(0.5, n) nulls, got {p.kind}")
            sizes.append(p.kind[1])
        if min(sizes) < 1:
            raise ValueError("smallest total count must be positive")
    elif family == "fet":
        sizes = []
        for p in pmfs:
            if p.kind[0] != "hypergeometric" or len(p.kind) != 4:
                raise ValueError(f"Fisher's exact test expects central hypergeometric nulls, got {p.kind}")
            sizes.append(p.kind[3])
        if len({(p.kind[1], p.kind[2]) for p in pmfs}) != 1 or pmfs[0].kind[1] != pmfs[0].kind[2]:
            raise ValueError("all margins must share (N, N, M_i)")
        if min(sizes) <= 1:
            raise ValueError("smallest total count must exceed 1")
    else:
        raise ValueError(f"unknown family {family!r}")
    return min(range(len(sizes)), key=sizes.__getitem__)


def prop_check(
    pmfs: Sequence[ExactPMF], alpha, pi0, m0: int, family: Family = "bt", rule: Rule = "cdf"
) -> BoundReport:
    """Check ``f_i0(x_i0(alpha)) <= (1 - pi0) alpha / m0`` for the smallest test."""
    pi0 = as_fraction(pi0)
    if pi0 >= 1:
        raise ValueError("condition needs pi0 < 1; BH on mid p-values is not conservative at pi0 = 1")
    i0 = _select_i0(pmfs, family)
    alpha = as_fraction(alpha)
    if m0 == 0:
        # no true nulls, nothing to bound
        left, right = Fraction(0), (1 - pi0) * alpha
    else:
        left, right = boundary_mass(pmfs[i0], alpha, rule), (1 - pi0) * alpha / m0
    cond = "eq20" if family == "bt" else "eq30"
    return BoundReport(cond, left, right, {"i0": i0, "kind": pmfs[i0].kind, "rule": rule})


def prop_bound(
    pmfs: Sequence[ExactPMF], alpha, pi0, m0: int, family: Family = "bt", rule: Rule = "cdf"
) -> Fraction:
    """FDR upper bound ``pi0 alpha + m0 f_i0(x_i0(alpha))``."""
    rep = prop_check(pmfs, alpha, pi0, m0, family, rule)
    return as_fraction(pi0) * as_fraction(alpha) + m0 * rep.left_side


def theorem1_bound(null_pmfs: Sequence[ExactPMF], taus: Sequence, pi0, m0: int) -> tuple[Fraction, Fraction]:
    """``(pi0 alpha / 2, sum_i max_r f_i(y_i(tau_r) + 1) / r)`` over the true nulls.

    ``alpha`` is taken as the last critical constant (BH constants).
    """
    if len(null_pmfs) != m0:
        raise ValueError(f"{len(null_pmfs)} null PMFs for m0={m0}")
    if len(taus) == 0:
        raise ValueError("need at least one critical constant")
    for p in null_pmfs:
        if not p.is_symmetric:
            raise ValueError(f"bound needs symmetric null PMFs, got {p.kind}")
    taus = [as_fraction(t) for t in taus]
    alpha1 = as_fraction(pi0) * taus[-1] / 2
    alpha2 = Fraction(0)
    for p in null_pmfs:
        base, steps = _pieces(p, "cdf")
        alpha2 += max(_piece_value(base, steps, t) / r for r, t in enumerate(taus, start=1))
    return alpha1, alpha2


def calibrate_alpha(
    pmfs: Sequence[ExactPMF], alpha_target, pi0, m0: int, family: Family = "bt", rule: Rule = "cdf"
) -> float:
    """Largest level ``a`` on the 1e-6 grid with ``pi0 a + m0 f_i0(x_i0(a)) <= alpha_target``.

    The left side is piecewise constant in ``a`` between CDF (or p-value)
    breakpoints, so each piece is solved exactly; 0 if no grid level works.
    """
    pi0 = as_fraction(pi0)
    target = as_fraction(alpha_target)
    if pi0 >= 1:
        raise ValueError("calibration needs pi0 < 1")
    top = GRID - 1
    if m0 == 0:
        if pi0 == 0:
            return top / GRID
        k = min(top, floor(target / pi0 * GRID))
        return max(k, 0) / GRID
    i0 = _select_i0(pmfs, family)
    base, steps = _pieces(pmfs[i0], rule)
    bounds = [(Fraction(0), base)] + list(steps)
    best = 0
    for j, (start, val) in enumerate(bounds):
        end = bounds[j + 1][0] if j + 1 < len(bounds) else Fraction(1)
        hi_k = min(top, ceil(end * GRID) - 1)
        lo_k = max(1, ceil(start * GRID))
        slack = target - m0 * val
        if slack < 0:
            continue
        if pi0 > 0:
            hi_k = min(hi_k, floor(slack / pi0 * GRID))
        if hi_k >= lo_k:
            best = max(best, hi_k)
    return best / GRID
