"""Bound evaluation around the bivariate mean difference, plus the two-sided
bracket for stochastically ordered marginals."""

import math

import numpy as np
import pytest

from copulagini import (
    BivariateModel,
    Clayton,
    Exponential,
    Fgm,
    Frank,
    Independence,
    LowerFrechet,
    Uniform,
    UpperFrechet,
    bounds_report,
    gmd_bivariate,
    ordered_sandwich,
)

COPULAS = [
    Independence(),
    UpperFrechet(),
    LowerFrechet(),
    Fgm(1.0),
    Fgm(-1.0),
    Clayton(1.0),
    Clayton(-0.5),
    Frank(2.0),
    Frank(-2.0),
]

MARGINAL_PAIRS = [
    (Uniform(0.0, 1.0), Uniform(0.0, 1.0)),
    (Exponential(1.0), Exponential(1.0)),
    (Exponential(1.0), Uniform(0.0, 2.0)),
    (Uniform(0.0, 1.0), Exponential(2.0)),
]


@pytest.mark.parametrize("copula", COPULAS, ids=repr)
@pytest.mark.parametrize("pair", MARGINAL_PAIRS, ids=lambda p: f"{p[0]!r}|{p[1]!r}")
def test_no_bound_is_ever_violated(copula, pair):
    model = BivariateModel(copula, *pair)
    rep = bounds_report(model, markov_thresholds=(0.5, 1.0, 2.0))
    assert rep.ok, rep.violations
    assert rep.jensen_lower <= rep.gmd + 1e-9
    assert rep.fh_lower <= rep.gmd + 1e-9
    assert rep.gmd <= rep.fh_upper + 1e-9


def test_no_bound_violated_on_survival_orientation():
    model = BivariateModel(Clayton(2.0), Exponential(1.0), Exponential(1.0),
                           orientation="given_survival_copula")
    rep = bounds_report(model)
    assert rep.ok


def test_frechet_bounds_exponential_versus_uniform():
    model = BivariateModel(Independence(), Exponential(1.0), Uniform(0.0, 1.0))
    rep = bounds_report(model)
    assert rep.fh_lower == pytest.approx(0.5, rel=1e-9)
    # closed form w^2 + 2w - 1/2 at the root of e^{-w} = w
    w = 0.5671432904097838
    assert rep.fh_upper == pytest.approx(w * w + 2.0 * w - 0.5, rel=1e-8)
    assert rep.jensen_lower == pytest.approx(0.5, rel=1e-12)


def test_frechet_bounds_uniform_pair_closed_forms():
    a, b = 1.0, 2.0
    model = BivariateModel(Independence(), Uniform(0.0, a), Uniform(0.0, b))
    rep = bounds_report(model)
    assert rep.fh_lower == pytest.approx((b - a) / 2.0, rel=1e-9)
    assert rep.fh_upper == pytest.approx((a * a + b * b) / (2.0 * (a + b)), rel=1e-9)


def test_crossing_survivals_beat_the_mean_gap_bound():
    # equal means, crossing survival curves: the integral bound is strict
    model = BivariateModel(Independence(), Exponential(1.0), Uniform(0.0, 2.0))
    rep = bounds_report(model)
    assert rep.jensen_lower == pytest.approx(0.0, abs=1e-12)
    assert rep.fh_lower > 0.1
    assert rep.fh_lower <= rep.gmd + 1e-9


def test_median_bound_closed_forms():
    exp_rep = bounds_report(BivariateModel(Frank(1.0), Exponential(1.0), Exponential(1.0)))
    assert exp_rep.id_median_upper == pytest.approx(2.0 * math.log(2.0), rel=1e-9)

    uni_rep = bounds_report(BivariateModel(Frank(1.0), Uniform(0.0, 3.0), Uniform(0.0, 3.0)))
    assert uni_rep.id_median_upper == pytest.approx(1.5, rel=1e-9)


def test_median_bound_only_for_identical_marginals():
    rep = bounds_report(BivariateModel(Independence(), Exponential(1.0), Exponential(2.0)))
    assert rep.id_median_upper is None
    assert "id_median_upper" not in rep.to_dict()


def test_markov_nearness_bounds():
    model = BivariateModel(Independence(), Exponential(1.0), Exponential(1.0))
    rep = bounds_report(model, markov_thresholds=(0.5, 1.0, 2.0))
    # gmd = 1 here
    assert rep.markov(2.0) == pytest.approx(0.5, abs=1e-8)
    assert rep.markov(1.0) == pytest.approx(0.0, abs=1e-8)
    assert rep.markov_bounds[2.0] == pytest.approx(0.5, abs=1e-8)
    assert rep.markov(0.5) == pytest.approx(-1.0, abs=1e-8)
    with pytest.raises(ValueError, match="positive"):
        rep.markov(0.0)
    with pytest.raises(ValueError, match="positive"):
        rep.markov(-1.0)
    with pytest.raises(ValueError, match="positive"):
        bounds_report(model, markov_thresholds=(-1.0,))


def test_comonotone_identical_pair_markov_is_trivial():
    model = BivariateModel(UpperFrechet(), Exponential(1.0), Exponential(1.0))
    rep = bounds_report(model, markov_thresholds=(0.1,))
    assert rep.markov(0.1) == pytest.approx(1.0, abs=1e-9)


def test_bounds_dict_shape():
    model = BivariateModel(Fgm(1.0), Exponential(1.0), Exponential(1.0))
    data = bounds_report(model, markov_thresholds=(1.0,)).to_dict()
    assert set(data) == {
        "gmd", "jensen_lower", "fh_lower", "fh_upper",
        "markov", "violations", "id_median_upper",
    }
    assert data["violations"] == []
    assert data["markov"] == {"1": pytest.approx(1.0 - data["gmd"])}


# ------------------------------------------------------------------ sandwich


def test_sandwich_independent_uniforms():
    cop = Independence()
    xy = BivariateModel(cop, Uniform(0.0, 1.0), Uniform(0.0, 2.0))
    xx = BivariateModel(cop, Uniform(0.0, 1.0), Uniform(0.0, 1.0))
    yy = BivariateModel(cop, Uniform(0.0, 2.0), Uniform(0.0, 2.0))
    rep = ordered_sandwich(xy, xx, yy)
    assert rep.ok
    assert rep.gmd == pytest.approx(2.0 / 3.0, rel=1e-9)
    assert rep.gmd_lower_pair == pytest.approx(2.0 / 3.0, rel=1e-9)
    assert rep.gmd_upper_pair == pytest.approx(1.0 / 3.0, rel=1e-9)
    assert rep.mean_gap == pytest.approx(0.5, rel=1e-12)
    assert rep.lower == pytest.approx(-1.0 / 3.0, rel=1e-9)
    assert rep.upper == pytest.approx(4.0 / 3.0, rel=1e-9)
    data = rep.to_dict()
    assert data["violations"] == []


def test_sandwich_clayton_ordered_exponentials():
    cop = Clayton(1.0)
    xy = BivariateModel(cop, Exponential(2.0), Exponential(1.0))
    xx = BivariateModel(cop, Exponential(2.0), Exponential(2.0))
    yy = BivariateModel(cop, Exponential(1.0), Exponential(1.0))
    rep = ordered_sandwich(xy, xx, yy)
    assert rep.ok
    assert rep.lower <= rep.gmd <= rep.upper


def test_sandwich_collapses_when_marginals_coincide():
    cop = Frank(1.0)
    model = BivariateModel(cop, Exponential(1.0), Exponential(1.0))
    rep = ordered_sandwich(model, model, model)
    assert rep.ok
    assert rep.mean_gap == pytest.approx(0.0, abs=1e-12)
    assert rep.lower == pytest.approx(rep.gmd, abs=1e-9)
    assert rep.upper == pytest.approx(rep.gmd, abs=1e-9)


def test_sandwich_rejects_unordered_marginals():
    cop = Independence()
    xy = BivariateModel(cop, Exponential(1.0), Exponential(2.0))  # X above Y
    xx = BivariateModel(cop, Exponential(1.0), Exponential(1.0))
    yy = BivariateModel(cop, Exponential(2.0), Exponential(2.0))
    with pytest.raises(ValueError, match="stochastic order .* t="):
        ordered_sandwich(xy, xx, yy)


def test_sandwich_rejects_mismatched_inputs():
    xy = BivariateModel(Independence(), Uniform(0.0, 1.0), Uniform(0.0, 2.0))
    xx = BivariateModel(Independence(), Uniform(0.0, 1.0), Uniform(0.0, 1.0))
    yy = BivariateModel(Independence(), Uniform(0.0, 2.0), Uniform(0.0, 2.0))

    other_cop = BivariateModel(Fgm(1.0), Uniform(0.0, 1.0), Uniform(0.0, 1.0))
    with pytest.raises(ValueError, match="share one copula"):
        ordered_sandwich(xy, other_cop, yy)

    flipped = BivariateModel(Independence(), Uniform(0.0, 1.0), Uniform(0.0, 1.0),
                             orientation="given_survival_copula")
    with pytest.raises(ValueError, match="orientation"):
        ordered_sandwich(xy, flipped, yy)

    with pytest.raises(ValueError, match="model_xx"):
        ordered_sandwich(xy, yy, yy)
    with pytest.raises(ValueError, match="model_yy"):
        ordered_sandwich(xy, xx, xx)


def test_sandwich_matches_direct_reports():
    cop = Fgm(1.0)
    xy = BivariateModel(cop, Uniform(0.0, 1.0), Uniform(0.0, 2.0))
    xx = BivariateModel(cop, Uniform(0.0, 1.0), Uniform(0.0, 1.0))
    yy = BivariateModel(cop, Uniform(0.0, 2.0), Uniform(0.0, 2.0))
    rep = ordered_sandwich(xy, xx, yy)
    assert rep.gmd == pytest.approx(gmd_bivariate(xy).gmd, abs=1e-10)
    assert rep.gmd_upper_pair == pytest.approx(gmd_bivariate(xx).gmd, abs=1e-10)
    assert rep.gmd_lower_pair == pytest.approx(gmd_bivariate(yy).gmd, abs=1e-10)
