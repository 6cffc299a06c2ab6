from datetime import date

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import oracle_granger_f, rel_err, solve_normal_equations
from emocouple.corpus import Source
from emocouple.econ.granger import (
    GrangerBatch, granger_pairwise, granger_test, lag_aic_table, select_lag_aic,
)
from emocouple.econ.significance import Significance
from emocouple.errors import ConstantRegressor, TooShort
from emocouple.series import EmotionSeries, PairedSeries

D0 = date(2020, 3, 1)


def _s(values, source=Source.BULLETIN, cat="help"):
    return EmotionSeries("delhi", source, cat, D0, np.asarray(values, dtype=float))


def _pair(y, x):
    return PairedSeries(_s(y, Source.TWEET), _s(x, Source.BULLETIN))


def test_f_matches_oracle():
    rng = np.random.default_rng(7)
    x = rng.standard_normal(40)
    y = 0.3 * np.roll(x, 1) + rng.standard_normal(40)
    for p in (1, 2, 3):
        r = granger_test(_pair(y, x), p)
        f, _, _ = oracle_granger_f(y, x, p)
        assert rel_err(r.f_value, f) < 1e-8
        assert (r.df_num, r.df_den, r.n_obs) == (p, 40 - p - 2 * p - 1, 40 - p)
        assert r.caused == "Tweet" and r.causal == "Bulletin"


def test_lagged_copy_is_perfectly_predicted():
    w = np.random.default_rng(11).standard_normal(41)
    y, x = w[:-1], w[1:]  # y_t = x_{t-1}
    r = granger_test(_pair(y, x), 1)
    assert r.f_value > 1e12
    assert r.significance is Significance.SIG01
    _, rss_r, rss_u = oracle_granger_f(y, x, 1)
    assert rss_u < 1e-20 < rss_r


@settings(max_examples=80)
@given(st.integers(0, 2**32 - 1), st.integers(20, 60), st.integers(1, 4))
def test_nested_rss(seed, n, p):
    rng = np.random.default_rng(seed)
    y, x = rng.standard_normal(n), rng.standard_normal(n)
    r = granger_test(_pair(y, x), p)
    f, rss_r, rss_u = oracle_granger_f(y, x, p)
    assert rss_r >= rss_u
    assert r.f_value >= 0
    assert 0.0 <= r.p_value <= 1.0
    assert rel_err(r.f_value, f) < 1e-8


@given(st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3))
def test_scale_equivariance(seed, c):
    rng = np.random.default_rng(seed)
    y, x = rng.standard_normal(45), rng.standard_normal(45)
    a = granger_test(_pair(y, x), 2)
    b = granger_test(_pair(c * y, c * x), 2)
    assert b.f_value == pytest.approx(a.f_value, rel=1e-10, abs=1e-10)
    assert b.p_value == pytest.approx(a.p_value, rel=1e-10, abs=1e-10)
    assert a.significance is b.significance


def test_guards():
    rng = np.random.default_rng(0)
    with pytest.raises(ConstantRegressor):
        granger_test(_pair(np.ones(30), rng.standard_normal(30)), 1)
    with pytest.raises(TooShort):
        granger_test(_pair(rng.standard_normal(8), rng.standard_normal(8)), 2)
    with pytest.raises(ValueError):
        granger_test(_pair(rng.standard_normal(30), rng.standard_normal(30)), 0)


def test_aic_table_matches_oracle():
    rng = np.random.default_rng(21)
    y, x = rng.standard_normal(45), rng.standard_normal(45)
    for use_x in (False, True):
        table = lag_aic_table(y, x if use_x else None, 4)
        for p, aic in enumerate(table, 1):
            rows = []
            for t in range(4, 45):
                row = [1.0] + [y[t - i] for i in range(1, p + 1)]
                if use_x:
                    row += [x[t - i] for i in range(1, p + 1)]
                rows.append(row)
            _, rss, _ = solve_normal_equations(rows, y[4:])
            n, k = len(rows), len(rows[0])
            assert aic == pytest.approx(n * np.log(rss / n) + 2 * k, rel=1e-10)


def test_select_single_candidate():
    assert select_lag_aic(np.arange(3.0), max_p=1) == 1


def test_ar1_usually_selects_one():
    picks = []
    for seed in range(200):
        rng = np.random.default_rng(seed)
        y = np.zeros(45)
        for t in range(1, 45):
            y[t] = 0.9 * y[t - 1] + rng.standard_normal()
        picks.append(select_lag_aic(y, max_p=4))
    assert picks.count(1) > len(picks) / 2


def _category_set(rng, names, n=45):
    return {c: _s(np.cumsum(rng.standard_normal(n)), cat=c) for c in names}


def test_pairwise_structure():
    rng = np.random.default_rng(4)
    names = [f"c{i:02d}" for i in range(23)]
    b = _category_set(rng, names)
    t = {c: _s(np.cumsum(rng.standard_normal(45)), Source.TWEET, c) for c in names}
    b["sympathy"] = _s(np.zeros(45), cat="sympathy")
    t["sympathy"] = _s(np.zeros(45), Source.TWEET, "sympathy")
    batch = granger_pairwise(b, t)
    assert len(batch) == 46
    assert [s.variable for s in batch.skipped] == ["sympathy"]
    assert [r.variable for r in batch][:2] == ["c00", "c00"]
    assert [(r.caused, r.causal) for r in batch][:2] == [("Bulletin", "Tweet"), ("Tweet", "Bulletin")]
    assert all(r.n_obs == 44 - r.lag_p for r in batch)


def test_pairwise_empty_intersection():
    rng = np.random.default_rng(4)
    batch = granger_pairwise(_category_set(rng, ["a"]), {"b": _s(rng.standard_normal(45), Source.TWEET, "b")})
    assert isinstance(batch, GrangerBatch) and len(batch) == 0 and batch.skipped == []


def test_pairwise_lag_models_agree_on_fixed_choice():
    rng = np.random.default_rng(8)
    b = _category_set(rng, ["help"])
    t = {"help": _s(np.cumsum(rng.standard_normal(45)), Source.TWEET)}
    for model in ("restricted", "unrestricted"):
        assert len(granger_pairwise(b, t, lag_model=model)) == 2
    with pytest.raises(ValueError):
        granger_pairwise(b, t, lag_model="both")
    only_one = granger_pairwise(b, t, max_p=1)
    assert {r.lag_p for r in only_one} == {1}


def _lead_lag_pass(x, y):
    b = {"help": _s(x)}
    t = {"help": _s(y, Source.TWEET)}
    rows = {(r.caused, r.causal): r for r in granger_pairwise(b, t)}
    forward = rows[("Tweet", "Bulletin")]
    reverse = rows[("Bulletin", "Tweet")]
    return forward.p_value < 0.05 and not reverse.significance.significant


def _lead_lag_rate(driver, seeds=range(1000)):
    passes = 0
    for seed in seeds:
        rng = np.random.default_rng(seed)
        x = driver(rng)
        y = 0.8 * x[:-1] + rng.standard_normal(45)
        passes += _lead_lag_pass(x[1:], y)
    return passes / len(seeds)


# The pass rate is estimated on 1000 seeds: with 100 the binomial standard
# error (about 0.03) is wider than the gap between the true rate and 0.90.

def test_random_walk_driver_lead_lag():
    # levels driven by an I(1) series, as daily category shares behave
    assert _lead_lag_rate(lambda rng: np.cumsum(rng.standard_normal(46))) >= 0.90


@pytest.mark.xfail(strict=True, reason=(
    "with a white-noise driver, differencing gives dy_t = 0.8 (x_{t-1} - x_{t-2}) + (e_t - e_{t-1}), "
    "so past dy genuinely helps predict dx; the reverse test rejects too often and the joint "
    "rate sits near 0.887"))
def test_white_noise_driver_lead_lag():
    assert _lead_lag_rate(lambda rng: rng.standard_normal(46)) >= 0.90
