import math

import numpy as np
import pytest

from recordlaws.catalog import CatalogError, default_catalog, exponent_quantile, make_dist, parse_dist
from recordlaws.records import sample_gamma_sum, sample_records_representation
from recordlaws.transforms import (
    TransformStrategy,
    apply_transform,
    describe_route,
    limit_law_of,
    make_plan,
    parse_strategy,
    plan_for,
    refined_normal_centering,
    transform_exponents,
)

CATALOG = default_catalog()
IDS = [d.id for d in CATALOG]

ROUTES = {
    "exponential": "point-b", "normal": "point-d", "rayleigh": "point-d", "logistic": "point-b",
    "lognormal": "log-then-d", "gumbel": "point-b", "loglogistic": "point-a",
    "singhmaddala": "point-a", "uniform": "point-c", "powerfn": "point-c",
}


@pytest.mark.parametrize("dist", CATALOG, ids=IDS)
def test_routing(dist):
    plan = plan_for(dist)
    assert str(plan.strategy) == ROUTES[dist.id]
    assert (plan.law.family == "lognormal") == (plan.strategy.tag in ("point-a", "point-c"))
    if plan.working_scale == "endpoint":
        assert math.isfinite(dist.uep)


@pytest.mark.parametrize("text, family, s2", [
    ("exponential:lambda=1", "normal", 1.0),
    ("exponential:lambda=2", "normal", 0.25),
    ("normal", "normal", 0.5),
    ("rayleigh:rho=1", "normal", 0.25),
    ("rayleigh:rho=4", "normal", 1 / 16),
    ("logistic", "normal", 1.0),
    ("lognormal", "normal", 0.5),
    ("gumbel", "normal", 1.0),
    ("loglogistic:p=2", "lognormal", 0.25),
    ("loglogistic:p=0.5", "lognormal", 4.0),
    ("singhmaddala:a=2,b=1.5,c=2", "lognormal", 1 / 9),
    ("uniform", "lognormal", 1.0),
    ("powerfn:k=3", "lognormal", 1 / 9),
])
def test_limit_laws(text, family, s2):
    law = limit_law_of(parse_dist(text))
    assert law.family == family
    assert law.m == 0
    assert law.sigma2 == pytest.approx(s2, rel=1e-14)


def test_strategy_parsing():
    assert parse_strategy("iterated-exp(2)") == TransformStrategy("iterated-exp", 2)
    assert parse_strategy("iterated-exp:1") == TransformStrategy("iterated-exp", 1)
    assert str(parse_strategy("point-d")) == "point-d"
    for bad in ("point-z", "iterated-exp(3)", "iterated-exp(x)"):
        with pytest.raises(ValueError):
            parse_strategy(bad)


def test_refined_centering():
    assert refined_normal_centering(400) == pytest.approx(28.1336, abs=1e-4)
    assert abs(refined_normal_centering(400) - exponent_quantile(make_dist("normal"), 400)) < 0.02
    gaps = [refined_normal_centering(n) - math.sqrt(2 * n) for n in (10, 10**3, 10**6, 10**9)]
    assert all(g < 0 for g in gaps)
    assert all(abs(b) < abs(a) for a, b in zip(gaps, gaps[1:]))
    with pytest.raises(ValueError):
        refined_normal_centering(1)


@pytest.mark.parametrize("dist", CATALOG, ids=IDS)
@pytest.mark.parametrize("n", [1, 7, 400])
def test_neutral_element(dist, n):
    plan = plan_for(dist)
    neutral = 1.0 if plan.law.family == "lognormal" else 0.0
    assert transform_exponents(plan, n, float(n)) == pytest.approx(neutral, abs=1e-12)
    x = exponent_quantile(dist, float(n))
    if n < 30 or math.isinf(dist.uep):
        assert apply_transform(plan, n, x) == pytest.approx(neutral, abs=1e-9)


def test_normal_simple_centering_example():
    plan = plan_for(make_dist("normal"))
    assert apply_transform(plan, 400, math.sqrt(800), centering="simple") == 0.0


def test_uniform_identity():
    plan = plan_for(make_dist("uniform"))
    s = sample_gamma_sum(400, 5000, 17)
    expected = np.exp(-(s - 400) / 20)
    assert np.max(np.abs(transform_exponents(plan, 400, s) / expected - 1)) < 1e-12
    # direct-scale route agrees while 1 - H(s) is still resolvable
    s5 = sample_gamma_sum(5, 5000, 17)
    x = exponent_quantile(make_dist("uniform"), s5)
    direct = apply_transform(plan, 5, x)
    assert np.allclose(direct, np.exp(-(s5 - 5) / math.sqrt(5)), rtol=1e-6)


@pytest.mark.parametrize("lam", [0.5, 2.0, 7.0])
def test_exponential_scale_equivariance(lam):
    base = plan_for(make_dist("exponential"))
    scaled_dist = make_dist("exponential", **{"lambda": lam})
    scaled = plan_for(scaled_dist)
    x1 = sample_records_representation(make_dist("exponential"), 50, 2000, 5).values
    xl = sample_records_representation(scaled_dist, 50, 2000, 5).values
    assert np.allclose(xl, x1 / lam, rtol=1e-14)
    assert np.allclose(apply_transform(scaled, 50, xl), apply_transform(base, 50, x1) / lam,
                       rtol=1e-10, atol=1e-13)


@pytest.mark.parametrize("dist", [d for d in CATALOG if d.strategy in ("point-a", "point-c")], ids=lambda d: d.id)
def test_lognormal_targets_are_logs_of_normal_statistics(dist):
    plan = plan_for(dist)
    n = 100
    s = sample_gamma_sum(n, 2000, 2)
    t = transform_exponents(plan, n, s)
    assert np.all(t > 0)
    w = plan.working_from_exponent(s)
    assert np.allclose(np.log(t) * math.sqrt(n), w - plan.working_from_exponent(float(n)), atol=1e-9)


def test_transform_errors():
    with pytest.raises(ValueError):
        apply_transform(plan_for(make_dist("uniform")), 5, 1.0)
    with pytest.raises(ValueError):
        apply_transform(plan_for(make_dist("loglogistic")), 5, -1.0)
    with pytest.raises(ValueError):
        apply_transform(plan_for(make_dist("normal")), 0, 1.0)
    with pytest.raises(ValueError):
        plan_for(make_dist("normal")).center(5, "fancy")


def test_strategy_overrides():
    with pytest.raises(CatalogError):
        make_plan(make_dist("uniform"), "point-a")
    with pytest.raises(CatalogError):
        make_plan(make_dist("normal"), "point-c")
    with pytest.raises(CatalogError):
        make_plan(make_dist("loglogistic"), "point-d")
    with pytest.raises(CatalogError):
        make_plan(make_dist("normal"), "log-then-d")
    # theorem-2 on the rayleigh shares the point-d law
    plan = make_plan(make_dist("rayleigh", rho=1), "theorem-2")
    assert plan.law.sigma2 == pytest.approx(0.25)
    # point-b on the rayleigh has a vanishing scale: no finite limit law
    with pytest.raises(CatalogError):
        make_plan(make_dist("rayleigh"), "point-b")


def test_iterated_exp_recovers_inner_route():
    # iterated-exp(1) on the lognormal is log-then-d; its law is estimated from s
    d = make_dist("lognormal")
    a = make_plan(d, "iterated-exp(1)")
    b = plan_for(d)
    s = sample_gamma_sum(200, 1000, 1)
    assert np.array_equal(a.working_from_exponent(s), b.working_from_exponent(s))
    assert a.law.sigma2 == pytest.approx(0.5, rel=1e-2)


def test_describe_route_matches_plan():
    for d in CATALOG:
        route = describe_route(d)
        assert route["strategy"] == str(plan_for(d).strategy)
        assert route["limit_law"] == str(plan_for(d).law)
