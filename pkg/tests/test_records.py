import io
import math

import mpmath as mp
import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given
from hypothesis import strategies as st

from recordlaws.catalog import cdf, default_catalog, make_dist
from recordlaws.gof import ks_one_sample, ks_two_sample
from recordlaws.records import (
    SUM_LIMIT,
    exact_record_cdf,
    exact_record_sf,
    extract_records_naive,
    gammainc_lower,
    gammainc_upper,
    naive_batch,
    sample_gamma_sum,
    sample_records_representation,
)

CATALOG = default_catalog()
IDS = [d.id for d in CATALOG]
CRIT_20000 = 1.628 / math.sqrt(20000)
CRIT_2X2000 = 1.628 * math.sqrt(2 / 2000)


# --- S(n) ----------------------------------------------------------------

def test_gamma_sum_n1_is_exponential():
    s = sample_gamma_sum(1, 20000, 11)
    assert ks_one_sample(s, lambda t: -np.expm1(-t)) < CRIT_20000


def test_gamma_sum_moments_n50():
    s = sample_gamma_sum(50, 100000, 5)
    assert abs(s.mean() - 50) < 0.07
    assert abs(s.var(ddof=1) - 50) < 1.1


@pytest.mark.parametrize("n", [5, 300, 3000])
def test_gamma_sum_vs_exact_gamma_cdf(n):
    for method in ("sum", "gamma"):
        s = sample_gamma_sum(n, 20000, 8, method=method)
        assert ks_one_sample(s, lambda t: sc.gammainc(n, t)) < CRIT_20000


def test_sum_and_gamma_paths_agree_in_law():
    a = sample_gamma_sum(SUM_LIMIT, 2000, 1, method="sum")
    b = sample_gamma_sum(SUM_LIMIT, 2000, 1, method="gamma")
    assert ks_two_sample(a, b) < CRIT_2X2000


def test_gamma_sum_errors():
    for n, reps in ((0, 10), (5, 0), (2.5, 10)):
        with pytest.raises(ValueError):
            sample_gamma_sum(n, reps, 1)
    with pytest.raises(ValueError):
        sample_gamma_sum(5, 10, -1)


@pytest.mark.parametrize("n", [3, 2000])
def test_gamma_sum_thread_and_order_independent(n):
    a = sample_gamma_sum(n, 3001, 77, threads=1)
    b = sample_gamma_sum(n, 3001, 77, threads=8)
    assert np.array_equal(a, b)
    # replicate r does not depend on how many replicates were requested
    assert np.array_equal(sample_gamma_sum(n, 500, 77), a[:500])


# --- representation ------------------------------------------------------

@pytest.mark.parametrize("dist", CATALOG, ids=IDS)
def test_first_record_is_base_law(dist):
    batch = sample_records_representation(dist, 1, 20000, 3)
    assert ks_one_sample(batch.values, lambda t: cdf(dist, t)) < CRIT_20000


def test_exponential_n5_vs_exact():
    d = make_dist("exponential")
    batch = sample_records_representation(d, 5, 20000, 4)
    assert ks_one_sample(batch.values, lambda t: exact_record_cdf(d, 5, t)) <= 0.0115


@pytest.mark.parametrize("dist", CATALOG, ids=IDS)
def test_values_inside_support_and_length(dist):
    batch = sample_records_representation(dist, 60, 1000, 9)
    assert len(batch) == 1000
    assert np.all(batch.values > dist.lep) and np.all(batch.values < dist.uep)


def test_uniform_n10_values_in_unit_interval():
    v = sample_records_representation(make_dist("uniform"), 10, 5000, 1).values
    assert np.all((v > 0) & (v < 1))


@pytest.mark.parametrize("dist", CATALOG, ids=IDS)
def test_monotone_coupling(dist):
    prev = sample_records_representation(dist, 1, 500, 21).values
    for n in range(2, 30):
        cur = sample_records_representation(dist, n, 500, 21).values
        assert np.all(cur >= prev)
        prev = cur


def test_batch_csv_format():
    batch = sample_records_representation(make_dist("normal"), 3, 4, 2)
    buf = io.StringIO()
    batch.to_csv(buf)
    lines = buf.getvalue().split("\n")
    assert lines[0] == "replicate,value"
    assert len(lines) == 6 and lines[-1] == ""
    assert float(lines[1].split(",")[1]) == batch.values[0]
    assert "\r" not in buf.getvalue()


# --- naive extraction ----------------------------------------------------

def test_naive_record_streams_are_well_formed():
    streams = extract_records_naive(make_dist("gumbel"), 5, 300, 6)
    for r in streams:
        assert not r.exhausted
        assert r.record_times[0] == 1
        assert np.all(np.diff(r.record_times) > 0)
        assert np.all(np.diff(r.record_values) > 0)
        assert r.draws_consumed == r.record_times[-1]


def test_expected_records_in_first_three_draws():
    # E[#records among 3 draws] = 1 + 1/2 + 1/3
    streams = extract_records_naive(make_dist("exponential"), 3, 50000, 13, max_draws=3)
    count = np.mean([len(r.record_values) for r in streams])
    assert abs(count - (1 + 1 / 2 + 1 / 3)) < 0.02


def test_naive_budget_is_reported():
    streams = extract_records_naive(make_dist("normal"), 12, 50, 1, max_draws=1000)
    assert any(r.exhausted for r in streams)
    for r in streams:
        assert r.exhausted == (len(r.record_values) < 12)
        assert r.draws_consumed <= 1000
    batch = naive_batch(make_dist("normal"), 12, 50, 1, max_draws=1000)
    assert np.isnan(batch.values).sum() == sum(r.exhausted for r in streams)


def test_naive_vs_representation_exponential_n6():
    d = make_dist("exponential")
    a = naive_batch(d, 6, 2000, 1).values
    b = sample_records_representation(d, 6, 2000, 1).values
    assert not np.isnan(a).any()
    assert ks_two_sample(a, b) < CRIT_2X2000


@pytest.mark.parametrize("dist", CATALOG, ids=IDS)
@pytest.mark.parametrize("n", [1, 3])
def test_naive_vs_representation_small_n(dist, n):
    a = naive_batch(dist, n, 2000, 31).values
    b = sample_records_representation(dist, n, 2000, 31).values
    assert ks_two_sample(a, b) < CRIT_2X2000


def test_naive_thread_independent():
    d = make_dist("logistic")
    a = naive_batch(d, 4, 1000, 3, threads=1).values
    b = naive_batch(d, 4, 1000, 3, threads=4).values
    assert np.array_equal(a, b)


# --- exact CDF ----------------------------------------------------------

def test_exact_cdf_closed_form():
    d = make_dist("exponential")
    assert exact_record_cdf(d, 2, 2.0) == pytest.approx(1 - 3 * math.exp(-2), rel=1e-14)
    assert exact_record_cdf(d, 2, 2.0) == pytest.approx(0.5939942, abs=1e-7)


@pytest.mark.parametrize("dist", CATALOG, ids=IDS)
def test_exact_cdf_n1_is_base_cdf(dist):
    lo, hi = max(dist.lep, -5.0), min(dist.uep, 8.0)
    t = np.linspace(lo, hi, 201)
    assert np.allclose(exact_record_cdf(dist, 1, t), cdf(dist, t), rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("dist", CATALOG, ids=IDS)
def test_exact_cdf_normalisation_and_monotone(dist):
    lo, hi = max(dist.lep, -5.0), min(dist.uep, 30.0)
    t = np.linspace(lo - 1, hi + 1, 501)
    p = exact_record_cdf(dist, 5, t)
    q = exact_record_sf(dist, 5, t)
    assert np.max(np.abs(p + q - 1)) < 1e-12
    assert np.all(np.diff(p) >= 0)
    assert exact_record_cdf(dist, 5, dist.lep) == 0.0
    assert exact_record_cdf(dist, 5, dist.uep) == 1.0


@pytest.mark.parametrize("a", [1, 2, 5, 20, 100, 1600])
def test_gammainc_vs_mpmath(a):
    mp.mp.dps = 50
    for x in (1e-3, 0.5 * a, a - 1, a, a + 1, 2 * a + 10, 4 * a + 50):
        p_ref = float(mp.gammainc(a, 0, x, regularized=True))
        q_ref = float(mp.gammainc(a, x, mp.inf, regularized=True))
        assert gammainc_lower(a, x) == pytest.approx(p_ref, rel=1e-10, abs=1e-300)
        assert gammainc_upper(a, x) == pytest.approx(q_ref, rel=1e-10, abs=1e-300)


@given(a=st.floats(0.1, 2000), x=st.floats(0, 5000))
def test_gammainc_vs_scipy_property(a, x):
    assert gammainc_lower(a, x) == pytest.approx(sc.gammainc(a, x), rel=1e-9, abs=1e-14)
    assert gammainc_upper(a, x) == pytest.approx(sc.gammaincc(a, x), rel=1e-9, abs=1e-14)
