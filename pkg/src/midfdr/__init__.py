"""FDR control with discrete p-values: exact mid/conventional/randomized
p-values, BH-type step-up procedures, conservativeness bounds, an exact
enumeration oracle and a simulation engine."""

from .bounds import (
    BoundReport,
    boundary_mass,
    calibrate_alpha,
    check_superuniform,
    prop_bound,
    prop_check,
    theorem1_bound,
)
from .exact import ExactPMF, binomial, binomial_half, cdf_at, hypergeometric, mode_set, sup_norm
from .oracle import OracleResult, exact_fdr_oracle
from .procedures import (
    ErrorTally,
    StepUpConfig,
    StepUpResult,
    adaptive_bh,
    bh,
    sarp,
    step_up,
    storey_pi0,
    tally,
)
from .pvalues import (
    PValueRecord,
    PValueSupport,
    boundary_x,
    boundary_y,
    bt_pvalues,
    fet_pvalues,
    pvalue_cdf,
    pvalue_record,
    pvalue_records,
    pvalue_support,
    randomized_pvalue,
    tail_quantities,
)
from .sim import SimConfig, SimSummary, run_study
from .tables import CountTable, RunReport, ingest, run_tests

__version__ = "0.1.0"
