"""Monte-Carlo comparison of BH-type procedures on discrete p-values.

Paired counts are generated from Poisson or Binomial models (independently
or through a block-equicorrelated Gaussian copula), each pair is tested with
a binomial test or Fisher's exact test, and five procedures are run per
replication: BH and adaptive BH on conventional and on mid p-values, and
adaptive BH on randomized p-values (SARP).
"""
from __future__ import annotations

import configparser
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import stats

from .exact import binomial_half, hypergeometric
from .procedures import adaptive_bh, bh, storey_pi0
from .pvalues import pvalue_records

__all__ = [
    "METHODS",
    "ESTIMATORS",
    "SimConfig",
    "SimSummary",
    "PairedCounts",
    "gen_poisson_pairs",
    "gen_binomial_pairs",
    "gaussian_copula_block",
    "run_replication",
    "run_study",
    "load_configs",
]

METHODS = ("BH", "BH-Midp", "aBH", "aBH-Midp", "SARP")
ESTIMATORS = ("Convp", "Midp", "Randp")
# the estimator each adaptive method plugs in
METHOD_ESTIMATOR = {"aBH": "Convp", "aBH-Midp": "Midp", "SARP": "Randp"}


@dataclass(frozen=True)
class SimConfig:
    m: int = 1000
    pi0: float = 0.5
    alpha: float = 0.05
    n_reps: int = 250
    data_model: str = "binomial"
    family: Optional[str] = None
    dependence: str = "independent"
    rho: float = 0.1
    n_blocks: int = 50
    seed: int = 0
    estimator_lambda: float = 0.5
    trials: int = 20
    name: str = ""

    def __post_init__(self):
        if self.data_model not in ("poisson", "binomial"):
            raise ValueError(f"unknown data model {self.data_model!r}")
        if self.family is None:
            object.__setattr__(self, "family", "bt" if self.data_model == "poisson" else "fet")
        if self.family not in ("bt", "fet"):
            raise ValueError(f"unknown test family {self.family!r}")
        if self.family == "fet" and self.data_model != "binomial":
            raise ValueError("Fisher's exact test needs binomial data")
        if self.m < 1 or self.n_reps < 1:
            raise ValueError("m and n_reps must be positive")
        if not 0 <= self.pi0 <= 1:
            raise ValueError("pi0 must lie in [0, 1]")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.dependence not in ("independent", "block"):
            raise ValueError(f"unknown dependence {self.dependence!r}")
        if self.dependence == "block":
            if not 0 <= self.rho < 1:
                raise ValueError("block correlation must lie in [0, 1)")
            if self.n_blocks < 1 or self.m % self.n_blocks:
                raise ValueError("n_blocks must divide m")

    @property
    def m0(self) -> int:
        return int(round(self.m * self.pi0))

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        return f"{self.data_model}-{self.family}-{self.dependence}-m{self.m}-pi0{self.pi0:g}"


@dataclass(frozen=True)
class PairedCounts:
    c1: np.ndarray
    c2: np.ndarray
    is_null: np.ndarray

    def __len__(self):
        return self.c1.size


@dataclass
class SimSummary:
    config: SimConfig
    n_reps: int
    methods: dict = field(default_factory=dict)
    estimators: dict = field(default_factory=dict)
    n_untestable: int = 0
    midp_superset_reps: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scenario"] = self.config.label
        return d

    def rows(self) -> list[dict]:
        out = []
        for name in METHODS:
            st = self.methods[name]
            est = METHOD_ESTIMATOR.get(name, "")
            row = {
                "scenario": self.config.label,
                "method": name,
                "fdr": st["fdr"],
                "fdp_sd": st["fdp_sd"],
                "power": st["power"],
                "tdp_sd": st["tdp_sd"],
                "pi0_estimator": est,
                "pi0_bias": self.estimators[est]["bias"] if est else "",
                "pi0_sd": self.estimators[est]["sd"] if est else "",
            }
            out.append(row)
        return out


def gaussian_copula_block(config: SimConfig, rng: np.random.Generator) -> np.ndarray:
    """u_i = Phi(z_i), z block-equicorrelated with within-block correlation rho."""
    if config.rho >= 1 or config.rho < 0:
        raise ValueError("block correlation must lie in [0, 1)")
    size = config.m // config.n_blocks
    shared = np.repeat(rng.standard_normal(config.n_blocks), size)
    z = np.sqrt(config.rho) * shared + np.sqrt(1 - config.rho) * rng.standard_normal(config.m)
    u = stats.norm.cdf(z)
    eps = np.finfo(float).eps
    return np.clip(u, eps, 1 - eps)


def gen_poisson_pairs(config: SimConfig, rng: np.random.Generator, u: Optional[np.ndarray] = None) -> PairedCounts:
    """Pareto(3, 8) baseline means; false nulls scale group 2 by Unif(1.5, 6).

    With ``u`` given, both counts of test i are the ``u_i`` quantiles of their
    Poisson laws instead of independent draws.
    """
    m, m0 = config.m, config.m0
    theta1 = 3.0 * rng.random(m) ** (-1.0 / 8.0)
    theta2 = theta1.copy()
    theta2[m0:] *= rng.uniform(1.5, 6.0, m - m0)
    if u is None:
        c1, c2 = rng.poisson(theta1), rng.poisson(theta2)
    else:
        c1 = stats.poisson.ppf(u, theta1).astype(np.int64)
        c2 = stats.poisson.ppf(u, theta2).astype(np.int64)
    return PairedCounts(c1, c2, np.arange(m) < m0)


def gen_binomial_pairs(config: SimConfig, rng: np.random.Generator, u: Optional[np.ndarray] = None) -> PairedCounts:
    """Nulls share a success probability from Unif(0.15, 0.2); false nulls use (0.2, 0.6)."""
    m, m0, n = config.m, config.m0, config.trials
    theta1 = np.full(m, 0.2)
    theta2 = np.full(m, 0.6)
    theta1[:m0] = rng.uniform(0.15, 0.2, m0)
    theta2[:m0] = theta1[:m0]
    if u is None:
        c1, c2 = rng.binomial(n, theta1), rng.binomial(n, theta2)
    else:
        c1 = stats.binom.ppf(u, n, theta1).astype(np.int64)
        c2 = stats.binom.ppf(u, n, theta2).astype(np.int64)
    return PairedCounts(c1, c2, np.arange(m) < m0)


@lru_cache(maxsize=None)
def _bt_table(total: int) -> tuple[np.ndarray, np.ndarray]:
    recs = pvalue_records(binomial_half(total))
    return np.array([float(r.l) for r in recs]), np.array([float(r.e) for r in recs])


@lru_cache(maxsize=None)
def _fet_table(trials: int) -> tuple[np.ndarray, np.ndarray]:
    """(l, e) indexed by (c1, c2); total 0 is untestable and gets l=1, e=0."""
    L = np.ones((trials + 1, trials + 1))
    E = np.zeros((trials + 1, trials + 1))
    for M in range(1, 2 * trials + 1):
        for rec in pvalue_records(hypergeometric(trials, trials, M)):
            c1 = rec.observation
            L[c1, M - c1] = float(rec.l)
            E[c1, M - c1] = float(rec.e)
    return L, E


def tail_arrays(counts: PairedCounts, family: str, trials: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Per-test (l, e); untestable pairs (total 0) get p = 1."""
    c1, c2 = counts.c1, counts.c2
    if family == "fet":
        L, E = _fet_table(trials)
        return L[c1, c2], E[c1, c2]
    l = np.ones(c1.size)
    e = np.zeros(c1.size)
    total = c1 + c2
    for n in np.unique(total):
        if n == 0:
            continue
        idx = np.nonzero(total == n)[0]
        tl, te = _bt_table(int(n))
        l[idx] = tl[c1[idx]]
        e[idx] = te[c1[idx]]
    return l, e


def _rep_rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep,)))


def run_replication(config: SimConfig, rep: int) -> dict:
    """FDP/TDP per method and pi0 estimates for one replication."""
    rng = _rep_rng(config.seed, rep)
    u = gaussian_copula_block(config, rng) if config.dependence == "block" else None
    gen = gen_poisson_pairs if config.data_model == "poisson" else gen_binomial_pairs
    counts = gen(config, rng, u)
    l, e = tail_arrays(counts, config.family, config.trials)
    conv = np.minimum(l + e, 1.0)
    mid = np.minimum(l + e / 2, 1.0)
    rand = np.minimum(l + (1.0 - rng.random(config.m)) * e, 1.0)

    lam, alpha = config.estimator_lambda, config.alpha
    pi0 = {
        "Convp": storey_pi0(conv, lam),
        "Midp": storey_pi0(mid, lam),
        "Randp": storey_pi0(rand, lam),
    }
    results = {
        "BH": bh(conv, alpha),
        "BH-Midp": bh(mid, alpha),
        "aBH": adaptive_bh(conv, alpha, pi0["Convp"]),
        "aBH-Midp": adaptive_bh(mid, alpha, pi0["Midp"]),
        "SARP": adaptive_bh(rand, alpha, pi0["Randp"]),
    }
    is_null = counts.is_null
    m1 = int(config.m - is_null.sum())
    fdp, tdp = {}, {}
    for name, res in results.items():
        mask = res.mask()
        R = int(mask.sum())
        V = int((mask & is_null).sum())
        fdp[name] = V / max(R, 1)
        tdp[name] = (R - V) / max(m1, 1)
    return {
        "fdp": fdp,
        "tdp": tdp,
        "pi0": pi0,
        "untestable": int(np.count_nonzero((counts.c1 + counts.c2) == 0)),
        "midp_superset": results["BH"].rejected <= results["BH-Midp"].rejected,
    }


def _sd(x) -> float:
    return float(np.std(x, ddof=1)) if len(x) > 1 else 0.0


def summarize(config: SimConfig, reps: list[dict]) -> SimSummary:
    methods = {}
    for name in METHODS:
        f = [r["fdp"][name] for r in reps]
        t = [r["tdp"][name] for r in reps]
        methods[name] = {"fdr": float(np.mean(f)), "fdp_sd": _sd(f), "power": float(np.mean(t)), "tdp_sd": _sd(t)}
    true_pi0 = config.m0 / config.m
    estimators = {}
    for name in ESTIMATORS:
        b = [r["pi0"][name] - true_pi0 for r in reps]
        estimators[name] = {"bias": float(np.mean(b)), "sd": _sd(b)}
    return SimSummary(
        config=config,
        n_reps=len(reps),
        methods=methods,
        estimators=estimators,
        n_untestable=sum(r["untestable"] for r in reps),
        midp_superset_reps=sum(bool(r["midp_superset"]) for r in reps),
    )


def _run_one(args):
    return run_replication(*args)


def run_study(config: SimConfig, workers: int = 1) -> SimSummary:
    """All replications of one scenario; results do not depend on ``workers``."""
    jobs = [(config, rep) for rep in range(config.n_reps)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reps = list(pool.map(_run_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        reps = [_run_one(j) for j in jobs]
    return summarize(config, reps)


_INT_KEYS = {"m", "n_reps", "n_blocks", "seed", "trials"}
_FLOAT_KEYS = {"pi0", "alpha", "rho", "estimator_lambda"}
_KEY_ALIASES = {"lambda": "estimator_lambda", "reps": "n_reps", "model": "data_model"}


def load_configs(path) -> list[SimConfig]:
    """Scenarios from an INI file, one section per scenario.

    Keys: m, pi0, alpha, n_reps, data_model (poisson|binomial), family
    (bt|fet), dependence (independent|block), rho, n_blocks, seed, lambda,
    trials. ``[DEFAULT]`` values apply to every section.
    """
    parser = configparser.ConfigParser()
    with open(path) as fh:
        parser.read_file(fh)
    out = []
    for section in parser.sections():
        kwargs = {"name": section}
        for key, raw in parser[section].items():
            key = _KEY_ALIASES.get(key, key)
            if key in _INT_KEYS:
                kwargs[key] = int(raw)
            elif key in _FLOAT_KEYS:
                kwargs[key] = float(raw)
            elif key in ("data_model", "family", "dependence"):
                kwargs[key] = raw.strip().lower()
            else:
                raise ValueError(f"unknown config key {key!r} in section [{section}]")
        out.append(SimConfig(**kwargs))
    if not out:
        raise ValueError(f"no scenarios in {path}")
    return out


def summary_json(summaries: list[SimSummary]) -> str:
    return json.dumps([s.to_dict() for s in summaries], indent=2, sort_keys=True)
