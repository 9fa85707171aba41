import datetime as dt
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import activity_of, swb_from_moods

from sentiparadox.ingest import Polarity, PostTable, load_lexicon
from sentiparadox.sentiment import (
    SentimentTable,
    UserSentiment,
    compute_activity,
    compute_swb,
    fit_normal,
    polarity_codes,
    polarity_label,
    swb_score,
)

LEX = load_lexicon()
LEX_STR = {m: LEX[m].value for m in LEX}
D0 = dt.date(2009, 1, 1)


def table(rows):
    return PostTable.from_records([(u, D0 + dt.timedelta(days=d), m) for u, d, m in rows])


@pytest.mark.parametrize("p,n,want", [(3, 1, 0.5), (5, 5, 0.0), (0, 4, -1.0), (4, 0, 1.0), (0, 0, None)])
def test_swb_examples(p, n, want):
    assert swb_score(p, n) == want


@given(st.integers(0, 200), st.integers(0, 200), st.integers(1, 20))
def test_swb_scale_free_and_antisymmetric(p, n, k):
    s = swb_score(p, n)
    if s is None:
        assert p + n == 0
        return
    assert abs(s) <= 1
    assert swb_score(k * p, k * n) == pytest.approx(s, abs=1e-15)
    assert swb_score(n, p) == pytest.approx(-s, abs=1e-15)


def test_compute_swb_counts_and_neutrals():
    posts = table([(1, 0, "happy"), (1, 1, "happy"), (1, 2, "happy"), (1, 3, "sad"), (1, 4, "blah"), (2, 0, "chipper"), (2, 1, "unlisted")])
    s = compute_swb(posts, LEX)
    assert s[1] == UserSentiment(3, 1, 1, 0.5)
    assert s[2] == UserSentiment(0, 0, 1, None)
    assert np.isnan(s.swb[1])


def test_compute_swb_aligned_to_user_list():
    s = compute_swb(table([(5, 0, "sad")]), LEX, users=np.array([1, 5, 9]))
    assert s.users.tolist() == [1, 5, 9]
    assert s.n_neg.tolist() == [0, 1, 0]
    assert np.isnan(s.swb[0]) and s.swb[1] == -1.0
    with pytest.raises(KeyError):
        s[4]


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 400), st.sampled_from(["happy", "sad", "blah", "pissed off", "unlisted", "CALM"])), max_size=80))
def test_compute_swb_matches_oracle(rows):
    s = compute_swb(table(rows), LEX)
    for u in set(r[0] for r in rows):
        want = swb_from_moods([m for uu, _, m in rows if uu == u], LEX_STR)
        got = s[u]
        assert (got.n_pos, got.n_neg, got.n_neu) == want[:3]
        assert got.swb == want[3]


@pytest.mark.parametrize("value,label", [(0.3, Polarity.POSITIVE), (0.0, Polarity.NEUTRAL), (-0.01, Polarity.NEGATIVE), (None, Polarity.UNDEFINED), (float("nan"), Polarity.UNDEFINED)])
def test_polarity_label(value, label):
    assert polarity_label(value) is label


def test_polarity_label_accepts_user_sentiment():
    assert polarity_label(UserSentiment(0, 0, 3, None)) is Polarity.UNDEFINED
    assert polarity_label(UserSentiment(1, 0, 0, 1.0)) is Polarity.POSITIVE


def test_polarity_codes_vectorized():
    assert polarity_codes(np.array([0.2, -0.5, 0.0, np.nan])).tolist() == [1, -1, 0, 2]


def test_activity_examples():
    rows = [(1, d, "happy") for d in np.linspace(0, 90, 10).round().astype(int).tolist()]
    rows += [(2, 5, "sad")] * 7
    rows += [(3, d, "calm") for d in [0] * 15 + [30] * 15]
    a = compute_activity(table(rows), 30.0)
    assert a[1].activity == pytest.approx(10 / 3)
    assert a[2].activity == 7
    assert a[3].activity == 30
    assert a[1].n_posts == 10 and a[1].last_date - a[1].first_date == 90


def test_activity_counts_unknown_moods_and_omits_silent_users():
    a = compute_activity(table([(1, 0, "unlisted"), (1, 60, "happy")]), 30.0, users=np.array([1, 2]))
    assert a[1].activity == pytest.approx(1.0)
    assert np.isnan(a.activity[1])
    with pytest.raises(KeyError):
        a[2]


def test_activity_rejects_bad_window():
    with pytest.raises(ValueError):
        compute_activity(table([(1, 0, "happy")]), 0)


@given(st.lists(st.integers(0, 1000), min_size=1, max_size=30), st.floats(1, 90))
def test_activity_matches_formula(days, window):
    a = compute_activity(table([(0, d, "happy") for d in days]), window)
    assert a[0].activity == pytest.approx(activity_of(days, window), rel=1e-12)


@given(st.integers(1, 50), st.integers(1, 500), st.integers(2, 4))
def test_activity_linear_in_posts(n, span, k):
    base = [(0, 0, "happy"), (0, span, "happy")] + [(0, span // 2, "happy")] * (n - 1)
    a1 = compute_activity(table(base), 30.0)[0].activity
    ak = compute_activity(table(base * k), 30.0)[0].activity
    assert ak == pytest.approx(k * a1)


def test_fit_normal_examples():
    assert fit_normal([0.2, 0.2, 0.2]) == (pytest.approx(0.2), pytest.approx(0.0))
    assert tuple(fit_normal([-1, 1])) == (0.0, 2.0)
    with pytest.raises(ValueError):
        fit_normal([0.5])
    with pytest.raises(ValueError):
        fit_normal([0.1, np.nan])


def test_fit_normal_sampling_accuracy():
    x = np.random.default_rng(11).normal(0.0, math.sqrt(0.08), 100_000)
    f = fit_normal(x)
    assert abs(f.mu) < 0.01 and abs(f.sigma2 - 0.08) < 0.01


@given(st.lists(st.floats(-1, 1), min_size=2, max_size=40), st.floats(-5, 5))
def test_fit_normal_shift(xs, c):
    a, b = fit_normal(xs), fit_normal(np.asarray(xs) + c)
    assert b.mu == pytest.approx(a.mu + c, abs=1e-9)
    assert b.sigma2 == pytest.approx(a.sigma2, abs=1e-9)


def test_from_values_wraps_array():
    t = SentimentTable.from_values([0.1, np.nan])
    assert t[0].swb == 0.1 and t[1].swb is None
    assert t.defined.tolist() == [True, False]
