from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from midfdr.exact import binomial_half, hypergeometric
from midfdr.pvalues import (
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

F = Fraction


def brute_tails(masses, x0):
    """l and e by direct comparison of rational masses."""
    f0 = masses[x0]
    l = sum((f for f in masses.values() if f < f0), F(0))
    e = sum((f for f in masses.values() if f == f0), F(0))
    return l, e


def masses_of(pmf):
    return {x: F(w, pmf.denominator) for x, w in zip(pmf.support, pmf.numerators)}


def test_tail_quantities_examples():
    assert tail_quantities(binomial_half(4), 0) == (0, F(2, 16))
    assert tail_quantities(binomial_half(4), 1) == (F(2, 16), F(8, 16))
    assert tail_quantities(hypergeometric(3, 3, 2), 1) == (F(6, 15), F(9, 15))


def test_tail_quantities_rejects_impossible_outcome():
    with pytest.raises(ValueError):
        tail_quantities(binomial_half(4), 5)


@given(st.integers(1, 40), st.data())
def test_tail_quantities_match_brute_force(n, data):
    pmf = binomial_half(n)
    x0 = data.draw(st.integers(0, n))
    assert tail_quantities(pmf, x0) == brute_tails(masses_of(pmf), x0)


@given(st.integers(1, 15), st.integers(1, 15), st.data())
def test_records_match_brute_force_asymmetric(N1, N2, data):
    M = data.draw(st.integers(1, N1 + N2))
    pmf = hypergeometric(N1, N2, M)
    masses = masses_of(pmf)
    for rec in pvalue_records(pmf):
        assert (rec.l, rec.e) == brute_tails(masses, rec.observation)


def test_pvalue_record_examples():
    r = pvalue_record(binomial_half(4), 0)
    assert (r.conventional, r.mid) == (F(1, 8), F(1, 16))
    r = pvalue_record(binomial_half(4), 2)
    assert (r.l, r.e, r.conventional, r.mid) == (F(10, 16), F(6, 16), 1, F(13, 16))
    r = pvalue_record(binomial_half(2), 1)
    assert (r.conventional, r.mid) == (1, F(3, 4))


@given(st.integers(1, 50), st.data())
def test_record_invariants(n, data):
    rec = pvalue_record(binomial_half(n), data.draw(st.integers(0, n)))
    assert rec.conventional == rec.l + rec.e
    assert rec.mid == rec.conventional - rec.e / 2
    assert 0 <= rec.l < rec.conventional <= 1
    assert rec.mid < rec.conventional


def test_randomized_pvalue_endpoints():
    p = binomial_half(4)
    assert randomized_pvalue(p, 0, 1.0) == 0.0
    assert randomized_pvalue(p, 0, 0.0) == 0.125
    assert randomized_pvalue(p, 0, 0.5) == 0.0625
    with pytest.raises(ValueError):
        randomized_pvalue(p, 0, 1.5)


def test_randomized_pvalue_mean_converges_to_mid():
    pmf = binomial_half(9)
    rng = np.random.default_rng(11)
    k = 10**5
    for x0 in (0, 2, 4):
        rec = pvalue_record(pmf, x0)
        u = rng.random(k)
        rho = float(rec.l) + (1 - u) * float(rec.e)
        tol = 3 * float(rec.e) / np.sqrt(12 * k)
        assert abs(rho.mean() - float(rec.mid)) <= tol


def test_randomized_pvalue_is_uniform_marginally():
    pmf = binomial_half(12)
    recs = pvalue_records(pmf)
    rng = np.random.default_rng(5)
    x = rng.choice(len(pmf), size=10**5, p=pmf.probabilities())
    l = np.array([float(r.l) for r in recs])[x]
    e = np.array([float(r.e) for r in recs])[x]
    rho = l + (1 - rng.random(x.size)) * e
    assert stats.kstest(rho, "uniform").pvalue > 0.01


def test_pvalue_support_examples():
    sup = pvalue_support(binomial_half(4))
    assert sup.masses == [F(2, 16), F(8, 16), F(6, 16)]
    assert sup.mids == [F(1, 16), F(6, 16), F(13, 16)]
    sup = pvalue_support(binomial_half(1))
    assert sup.entries == ((F(1, 2), F(1), F(1)),)
    sup = pvalue_support(hypergeometric(3, 3, 2))
    assert [(m, w) for m, _, w in sup.entries] == [(F(1, 5), F(2, 5)), (F(7, 10), F(3, 5))]


@settings(max_examples=50)
@given(st.integers(1, 12), st.integers(1, 12), st.data())
def test_support_identity_holds_for_asymmetric_margins(N1, N2, data):
    M = data.draw(st.integers(1, N1 + N2))
    sup = pvalue_support(hypergeometric(N1, N2, M))
    assert sum(sup.masses) == 1
    mids = sup.mids
    assert all(a < b for a, b in zip(mids, mids[1:]))
    acc = F(0)
    for _, conv, mass in sup.entries:
        acc += mass
        assert acc == conv


def test_pvalue_cdf_matches_enumeration():
    pmf = binomial_half(8)
    cdf = pvalue_cdf(pmf, "conventional")
    recs = pvalue_records(pmf)
    for t in (0.0, 0.05, 0.07, 0.5, 1.0):
        expect = sum(F(pmf.weight(r.observation), pmf.denominator) for r in recs if r.conventional <= F(t))
        assert cdf(t) == expect
    assert cdf(0.05) == F(2, 256)


def test_boundary_x_examples():
    assert boundary_x(binomial_half(4), 0.05) == set()
    assert boundary_x(binomial_half(4), 0.5) == {0, 4}
    assert boundary_x(binomial_half(8), 0.05) == {0, 8}


def test_boundary_y_examples():
    assert boundary_y(binomial_half(4), 0.05) is None
    assert boundary_y(binomial_half(4), 0.10) == 0
    assert boundary_y(binomial_half(8), 0.5) == 3


def test_bt_pvalues():
    r = bt_pvalues(0, 4)
    assert (r.conventional, r.mid) == (F(1, 8), F(1, 16))
    r = bt_pvalues(2, 2)
    assert (r.conventional, r.mid) == (1, F(13, 16))
    r = bt_pvalues(1, 0)
    assert (r.conventional, r.mid) == (1, F(1, 2))
    with pytest.raises(ValueError):
        bt_pvalues(0, 0)


def test_fet_pvalues():
    r = fet_pvalues(0, 2, 3, 3)
    assert (r.conventional, r.mid) == (F(2, 5), F(1, 5))
    r = fet_pvalues(1, 1, 3, 3)
    assert (r.conventional, r.mid) == (1, F(7, 10))
    r = fet_pvalues(1, 0, 1, 1)
    assert (r.conventional, r.mid) == (1, F(1, 2))
    with pytest.raises(ValueError):
        fet_pvalues(4, 0, 3, 3)


def test_fet_conventional_matches_scipy():
    # scipy's two-sided test sums tables no more likely than the observed one
    for table in ([[2, 7], [8, 2]], [[5, 1], [10, 10]], [[5, 15], [20, 20]]):
        (a, b), (c, d) = table
        rec = fet_pvalues(a, c, a + b, c + d)
        assert float(rec.conventional) == pytest.approx(stats.fisher_exact(table).pvalue, rel=1e-9)


def test_sub_uniform_at_support_points():
    for n in range(1, 30):
        pmf = binomial_half(n)
        cdf = pvalue_cdf(pmf, "mid")
        for rec in pvalue_records(pmf):
            assert rec.mid < cdf(rec.mid)
