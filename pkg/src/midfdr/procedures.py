"""Step-up multiple testing: BH, adaptive BH, and the randomized-p variant."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .pvalues import PValueRecord

__all__ = [
    "StepUpConfig",
    "StepUpResult",
    "ErrorTally",
    "bh_constants",
    "step_up",
    "bh",
    "storey_pi0",
    "adaptive_bh",
    "sarp",
    "tally",
    "LEVEL_CAP",
]

LEVEL_CAP = 1.0 - 1e-9


@dataclass(frozen=True)
class StepUpConfig:
    critical_constants: tuple[float, ...]
    label: str = "step-up"

    def __post_init__(self):
        tau = np.asarray(self.critical_constants, dtype=float)
        if tau.size and (np.any(tau <= 0) or np.any(tau > 1)):
            raise ValueError("critical constants must lie in (0, 1]")
        if np.any(np.diff(tau) < 0):
            raise ValueError("critical constants must be non-decreasing")


@dataclass(frozen=True)
class StepUpResult:
    eta: Optional[int]
    rejected: frozenset[int]
    order: tuple[int, ...]
    critical_constants: tuple[float, ...] = field(repr=False)
    pi0: Optional[float] = None

    @property
    def n_rejected(self) -> int:
        return len(self.rejected)

    def mask(self) -> np.ndarray:
        out = np.zeros(len(self.order), dtype=bool)
        out[list(self.rejected)] = True
        return out


@dataclass(frozen=True)
class ErrorTally:
    V: int
    R: int
    S: int
    m1: int

    @property
    def fdp(self) -> float:
        return self.V / max(self.R, 1)

    @property
    def tdp(self) -> float:
        return self.S / max(self.m1, 1)


def bh_constants(m: int, alpha: float) -> np.ndarray:
    return np.arange(1, m + 1) * alpha / m


def step_up(pvalues: Sequence[float], config: StepUpConfig | Sequence[float]) -> StepUpResult:
    """Reject the ``eta`` smallest p-values, ``eta = max{i : P_(i) <= tau_i}``."""
    if not isinstance(config, StepUpConfig):
        config = StepUpConfig(tuple(float(t) for t in config))
    p = np.asarray(pvalues, dtype=float)
    tau = np.asarray(config.critical_constants, dtype=float)
    if p.shape != tau.shape:
        raise ValueError(f"{p.size} p-values but {tau.size} critical constants")
    if np.any((p < 0) | (p > 1)) or np.any(np.isnan(p)):
        raise ValueError("p-values must lie in [0, 1]")
    order = np.argsort(p, kind="stable")
    below = np.nonzero(p[order] <= tau)[0]
    if below.size == 0:
        return StepUpResult(None, frozenset(), tuple(order.tolist()), config.critical_constants)
    eta = int(below[-1]) + 1
    return StepUpResult(
        eta, frozenset(order[:eta].tolist()), tuple(order.tolist()), config.critical_constants
    )


def bh(pvalues: Sequence[float], alpha: float, m: Optional[int] = None) -> StepUpResult:
    m = len(pvalues) if m is None else m
    if not 0 < alpha < 1:
        raise ValueError(f"alpha={alpha} outside (0, 1)")
    if m != len(pvalues):
        raise ValueError(f"m={m} but {len(pvalues)} p-values given")
    if m == 0:
        return StepUpResult(None, frozenset(), (), ())
    return step_up(pvalues, StepUpConfig(tuple(bh_constants(m, alpha)), "BH"))


def storey_pi0(pvalues: Sequence[float], lam: float = 0.5) -> float:
    """min(1, (1 + #{P > lam}) / (m (1 - lam)))."""
    if not 0 < lam < 1:
        raise ValueError(f"lambda={lam} outside (0, 1)")
    p = np.asarray(pvalues, dtype=float)
    if p.size == 0:
        raise ValueError("need at least one p-value")
    return min(1.0, (1 + int(np.count_nonzero(p > lam))) / (p.size * (1 - lam)))


def adaptive_bh(pvalues: Sequence[float], alpha: float, pi0_hat: float, cap: float = LEVEL_CAP) -> StepUpResult:
    """BH at level ``min(alpha / pi0_hat, cap)``."""
    if not 0 < pi0_hat <= 1:
        raise ValueError(f"pi0_hat={pi0_hat} outside (0, 1]")
    if not 0 < cap < 1:
        raise ValueError("cap must lie in (0, 1)")
    res = bh(pvalues, min(alpha / pi0_hat, cap))
    return StepUpResult(res.eta, res.rejected, res.order, res.critical_constants, pi0_hat)


def sarp(
    records: Sequence[PValueRecord],
    alpha: float,
    lam: float = 0.5,
    seed=None,
    uniforms: Optional[Sequence[float]] = None,
    estimator: Callable[[Sequence[float], float], float] = storey_pi0,
) -> StepUpResult:
    """Adaptive BH on randomized p-values ``l + (1 - u) e``.

    ``uniforms`` overrides the draws (one per record); otherwise they come
    from ``numpy.random.default_rng(seed)``.
    """
    m = len(records)
    if uniforms is None:
        u = np.random.default_rng(seed).random(m)
    else:
        u = np.asarray(uniforms, dtype=float)
        if u.shape != (m,):
            raise ValueError("need exactly one uniform per record")
    l = np.array([float(r.l) for r in records])
    e = np.array([float(r.e) for r in records])
    rho = l + (1.0 - u) * e
    if m == 0:
        return StepUpResult(None, frozenset(), (), ())
    return adaptive_bh(rho, alpha, estimator(rho, lam))


def tally(result: StepUpResult, true_null: Sequence[bool]) -> ErrorTally:
    labels = np.asarray(true_null, dtype=bool)
    if labels.size != len(result.order):
        raise ValueError(f"{labels.size} labels for {len(result.order)} tests")
    rej = list(result.rejected)
    V = int(np.count_nonzero(labels[rej])) if rej else 0
    R = len(rej)
    return ErrorTally(V=V, R=R, S=R - V, m1=int(labels.size - labels.sum()))
