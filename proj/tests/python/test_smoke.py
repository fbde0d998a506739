import math

import pytest

import mburqr


def test_distribution_round_trip():
    for alpha in (0.5, 1.0, 2.0):
        for y in (0.1, 0.5, 0.9):
            assert mburqr.quantile(mburqr.cdf(y, alpha), alpha) == pytest.approx(y, abs=1e-12)
    assert mburqr.pdf(0.5, 1.0) == pytest.approx(6 * 0.5 * 0.5)
    assert mburqr.c_factor(0.5) == 0.5


def test_links_invert():
    for kind in ("logit", "cloglog", "loglog"):
        assert mburqr.link(kind, mburqr.inv_link(kind, 0.3)) == pytest.approx(0.3, abs=1e-12)


def test_sample_is_deterministic():
    a = mburqr.sample(50, 1.0, 7)
    assert a == mburqr.sample(50, 1.0, 7)
    assert all(0.0 < y < 1.0 for y in a)
    alpha, ll = mburqr.fit_alpha(mburqr.sample(2000, 1.0, 3))
    assert alpha == pytest.approx(1.0, abs=0.1)
    assert math.isfinite(ll)


def test_fit_report():
    r = mburqr.fit("education", ["employment"])
    assert r["n"] == 40
    assert r["fit"]["log_likelihood"] == pytest.approx(37.9883, abs=0.005)
    est = [c["estimate"] for c in r["fit"]["coefficients"]]
    assert est == pytest.approx([3.2292, 4.2400], abs=0.02)
    assert r["pseudo_r2"] == pytest.approx(0.4501, abs=0.002)


def test_ladder_corr_describe():
    lad = mburqr.ladder("safety", ["employment", "air"])
    assert {row["label"] for row in lad["rows"]} >= {"Rx1", "Rx2"}
    c = mburqr.corr(["employment", "air"], "safety")
    assert c["condition_indices"][0] == pytest.approx(2.0437, abs=1e-3)
    d = mburqr.describe(["air"])["columns"][0]
    assert d["median"] == 12.0
    assert mburqr.kendall_tau([1, 2, 3], [3, 2, 1])[0] == pytest.approx(-1.0)


def test_errors():
    with pytest.raises(mburqr.DataError):
        mburqr.fit("nope")
    with pytest.raises(mburqr.DomainError):
        mburqr.cdf(0.5, -1.0)
    with pytest.raises(ValueError):
        mburqr.quantile(1.5, 1.0)
