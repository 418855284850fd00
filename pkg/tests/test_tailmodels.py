"""Closed forms, round trips and sampling for the six families."""

import math

import numpy as np
import pytest

from helpers import integrate_smd
from maxdens.tailmodels import (
    Burr,
    Frechet,
    GevParams,
    Pareto,
    ReversedBurr,
    StudentT,
    TailClass,
    Weibull,
    gev_cdf,
    gev_pdf,
    norming_constants,
    parse_family,
    smd_pdf,
    smd_quantile,
)

ALL_SPECS = ["pareto(l=1)", "pareto(l=1/2)", "t(l=1)", "t(l=3)", "burr(c=1,l=3)",
             "burr(c=3,l=1/2)", "frechet(g=0.5)", "frechet(g=2)", "weibull(k=1)",
             "weibull(k=3)", "revburr(c=-1,l=-2)", "revburr(c=-1/2,l=-1/3)"]


@pytest.fixture(params=ALL_SPECS)
def model(request):
    return parse_family(request.param)


def test_pareto_closed_forms():
    p = Pareto(1.0)
    assert p.pdf(2.0) == pytest.approx(0.25, abs=1e-15)
    assert p.cdf(2.0) == pytest.approx(0.5, abs=1e-15)
    assert p.quantile(0.5) == pytest.approx(2.0, abs=1e-12)
    assert p.pdf(0.5) == 0.0


def test_burr_and_weibull_values():
    assert Burr(1.0, 1.0).pdf(1.0) == pytest.approx(0.25, abs=1e-15)
    assert Weibull(1.0).pdf(-1e-9) == 0.0
    assert Weibull(2.0).cdf(1.0) == pytest.approx(1.0 - math.exp(-1.0), rel=1e-12)
    assert Frechet(1.0).cdf(1e9) == pytest.approx(1.0, abs=1e-8)


def test_student_t_quantile_is_cauchy_at_one_df():
    t = StudentT(1.0)
    assert t.quantile(0.75) == pytest.approx(1.0, abs=1e-9)
    assert t.quantile(0.5) == pytest.approx(0.0, abs=1e-9)


def test_cdf_quantile_round_trip(model):
    q = np.linspace(0.001, 0.999, 97)
    np.testing.assert_allclose(model.cdf(model.quantile(q)), q, atol=1e-9)


def test_quantile_domain_errors(model):
    for bad in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(ValueError):
            model.quantile(bad)


def test_pdf_nonnegative_and_zero_outside(model):
    lo, hi = model.support
    x = np.linspace(-5.0, 5.0, 401)
    vals = model.pdf(x)
    assert np.all(np.asarray(vals) >= 0.0)
    if np.isfinite(hi):
        assert model.pdf(hi + 1e-9) == 0.0
    if np.isfinite(lo):
        assert model.pdf(lo - 1e-9) == 0.0


def test_pdf_integrates_to_one(model):
    assert integrate_smd(model, 1) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("m", [1, 4, 16])
def test_smd_integrates_to_one_weibull(m):
    assert integrate_smd(parse_family("weibull(k=1)"), m) == pytest.approx(1.0, abs=1e-6)


def test_smd_identities(model):
    x = np.linspace(*np.clip(model.support, -8, 8), 51)
    np.testing.assert_allclose(smd_pdf(model, 1, x), model.pdf(x), atol=1e-15)
    q = np.array([0.05, 0.4, 0.81, 0.99])
    for m in (1, 2, 7):
        qq = smd_quantile(model, m, q)
        np.testing.assert_allclose(np.asarray(model.cdf(qq)) ** m, q, atol=1e-9)
    assert smd_quantile(model, 1, 0.5) == pytest.approx(model.quantile(0.5), rel=1e-12)


def test_smd_pareto_values():
    p = Pareto(1.0)
    assert smd_pdf(p, 2, 2.0) == pytest.approx(0.25, abs=1e-15)
    assert smd_quantile(p, 2, 0.81) == pytest.approx(10.0, rel=1e-12)


def test_smd_domain():
    p = Pareto(1.0)
    with pytest.raises(ValueError):
        smd_pdf(p, 0, 2.0)
    with pytest.raises(ValueError):
        smd_quantile(p, 2, 1.0)


def test_sampler_determinism_and_validity(model):
    a = model.sample(257, seed=11)
    b = model.sample(257, seed=11)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, model.sample(257, seed=12))
    lo, hi = model.support
    assert np.all(a >= lo) and np.all(a <= hi)
    with pytest.raises(ValueError):
        model.sample(0, seed=1)


def test_sampler_kolmogorov_distance():
    p = Pareto(1.0)
    x = np.sort(p.sample(100_000, seed=42))
    ecdf_hi = np.arange(1, x.size + 1) / x.size
    ecdf_lo = np.arange(0, x.size) / x.size
    F = p.cdf(x)
    dist = max(np.max(np.abs(ecdf_hi - F)), np.max(np.abs(ecdf_lo - F)))
    assert dist < 0.01


# ---------------------------------------------------------------------------
# GEV pieces


def test_gev_pdf_values():
    assert gev_pdf(GevParams(0.0, 1.0, 0.0), 0.0) == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert gev_pdf(GevParams(1.0, 1.0, 0.0), -1.0 - 1e-12) == 0.0
    assert gev_pdf(GevParams(1.0, 1.0, 0.0), -1.0) == 0.0


def test_gev_gamma_continuity_at_zero():
    x = np.linspace(-4.0, 8.0, 400)
    near = gev_pdf(GevParams(1e-9, 1.0, 0.0), x)
    exact = gev_pdf(GevParams(0.0, 1.0, 0.0), x)
    np.testing.assert_allclose(near, exact, atol=1e-6)


def test_gev_scale_positive():
    with pytest.raises(ValueError):
        GevParams(0.5, 0.0, 1.0)


def test_norming_constants_examples():
    p = norming_constants(TailClass.hall(alpha=1.0, beta=1.0, A=1.0), 10)
    assert (p.gamma, p.a, p.b) == pytest.approx((1.0, 10.0, 10.0), rel=1e-12)
    p = norming_constants(TailClass.bounded(mu=-2.0, sigma=-1.0, D=1.0, xstar=1.0), 4)
    assert (p.gamma, p.a, p.b) == pytest.approx((-0.5, 0.25, 0.5), rel=1e-12)
    p = norming_constants(TailClass.weibull(kappa=1.0, C=1.0), math.e)
    assert (p.gamma, p.a, p.b) == pytest.approx((0.0, 1.0, 1.0), rel=1e-12)


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_block_max_distribution_converges_to_gev(spec):
    # sup |F^m - G((x-b_m)/a_m)| over the central smd range is non-increasing
    # in m for every family (and identically 0 for Frechet)
    model = parse_family(spec)
    sups = []
    for m in (4, 16, 64, 256):
        grid = smd_quantile(model, m, np.linspace(0.001, 0.999, 1501))
        params = norming_constants(model.tail, m)
        diff = np.abs(np.asarray(model.cdf(grid)) ** m - gev_cdf(params, grid))
        sups.append(float(np.max(diff)))
    for earlier, later in zip(sups[:-1], sups[1:]):
        assert later <= earlier + 1e-12


def test_tail_class_validation():
    with pytest.raises(ValueError):
        TailClass.hall(alpha=-1.0, beta=1.0)
    with pytest.raises(ValueError):
        TailClass.bounded(mu=0.5, sigma=-1.0)
    assert TailClass.weibull(kappa=2.0).theta == pytest.approx(0.5)
    with pytest.raises(ValueError):
        _ = TailClass.hall(alpha=1.0, beta=1.0).theta


# ---------------------------------------------------------------------------
# family spec grammar


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_parse_round_trip(spec):
    model = parse_family(spec)
    again = parse_family(model.spec_string())
    assert type(again) is type(model)
    assert again.spec_string() == model.spec_string()


def test_parse_errors():
    for bad in ("pareto", "pareto()", "pareto(x=1)", "pareto(l=zero)",
                "gauss(l=1)", "burr(c=1)"):
        with pytest.raises(ValueError):
            parse_family(bad)


def test_parse_fraction_values():
    assert parse_family("pareto(l=1/2)").l == 0.5
    assert parse_family("frechet(g=0.5)").g == 0.5
