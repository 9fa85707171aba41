"""Per-user SWB scores, activity rates and the normal fit of SWB values."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .ingest import MoodLexicon, Polarity, PostTable


class UserSentiment(NamedTuple):
    n_pos: int
    n_neg: int
    n_neu: int
    swb: float | None

    @property
    def defined(self) -> bool:
        return self.swb is not None


def swb_score(n_pos, n_neg):
    """(N_p - N_n) / (N_p + N_n), or None when there are no polarized posts."""
    tot = n_pos + n_neg
    if tot == 0:
        return None
    return (n_pos - n_neg) / tot


@dataclass(frozen=True, eq=False)
class SentimentTable:
    """Counts and SWB per user, aligned with ``users``; ``swb`` is NaN when undefined."""

    users: np.ndarray
    n_pos: np.ndarray
    n_neg: np.ndarray
    n_neu: np.ndarray
    swb: np.ndarray

    def __len__(self):
        return len(self.users)

    def __getitem__(self, user_id) -> UserSentiment:
        i = int(np.searchsorted(self.users, user_id))
        if i >= len(self.users) or self.users[i] != user_id:
            raise KeyError(user_id)
        s = self.swb[i]
        return UserSentiment(int(self.n_pos[i]), int(self.n_neg[i]), int(self.n_neu[i]), None if np.isnan(s) else float(s))

    def items(self):
        for uid in self.users.tolist():
            yield uid, self[uid]

    @property
    def defined(self) -> np.ndarray:
        return ~np.isnan(self.swb)

    @classmethod
    def from_values(cls, values, users=None):
        """Wrap bare SWB values (NaN = undefined); counts are left at zero."""
        values = np.asarray(values, dtype=np.float64)
        users = np.arange(len(values), dtype=np.int64) if users is None else np.asarray(users, dtype=np.int64)
        z = np.zeros(len(values), dtype=np.int64)
        return cls(users, z, z.copy(), z.copy(), values)


def compute_swb(posts: PostTable, lexicon: MoodLexicon, users=None) -> SentimentTable:
    """Tally polarized posts per user and compute SWB.

    With ``users`` given the table is aligned to it (users without posts
    get zero counts and undefined SWB); otherwise it covers the users that
    appear in ``posts``.
    """
    users = np.unique(posts.user) if users is None else np.asarray(users, dtype=np.int64)
    codes = posts.polarity_codes(lexicon)
    idx = np.searchsorted(users, posts.user)
    ok = idx < len(users)
    ok[ok] = users[idx[ok]] == posts.user[ok]
    idx, codes = idx[ok], codes[ok]
    n = len(users)
    n_pos = np.bincount(idx[codes == 1], minlength=n)
    n_neg = np.bincount(idx[codes == -1], minlength=n)
    n_neu = np.bincount(idx[codes == 0], minlength=n)
    tot = n_pos + n_neg
    with np.errstate(invalid="ignore", divide="ignore"):
        swb = np.where(tot > 0, (n_pos - n_neg) / np.maximum(tot, 1), np.nan)
    return SentimentTable(users, n_pos, n_neg, n_neu, swb.astype(np.float64))


def polarity_label(s) -> Polarity:
    """Sign of the SWB score; accepts a UserSentiment, a float or None."""
    swb = s.swb if isinstance(s, UserSentiment) else s
    if swb is None or (isinstance(swb, float) and np.isnan(swb)):
        return Polarity.UNDEFINED
    if swb > 0:
        return Polarity.POSITIVE
    if swb < 0:
        return Polarity.NEGATIVE
    return Polarity.NEUTRAL


def polarity_codes(swb: np.ndarray) -> np.ndarray:
    """Vectorized labels: +1 / -1 / 0, and 2 for undefined."""
    out = np.sign(np.nan_to_num(swb, nan=0.0)).astype(np.int8)
    out[np.isnan(swb)] = 2
    return out


class ActivityRecord(NamedTuple):
    n_posts: int
    first_date: int
    last_date: int
    activity: float
    window: float


@dataclass(frozen=True, eq=False)
class ActivityTable:
    """Post volume and posts-per-window rate, aligned with ``users``.

    Dates are days since 1970-01-01; users without posts have NaN activity.
    """

    users: np.ndarray
    n_posts: np.ndarray
    first_day: np.ndarray
    last_day: np.ndarray
    activity: np.ndarray
    window: float

    @property
    def span_days(self) -> np.ndarray:
        return self.last_day - self.first_day

    def __getitem__(self, user_id) -> ActivityRecord:
        i = int(np.searchsorted(self.users, user_id))
        if i >= len(self.users) or self.users[i] != user_id or self.n_posts[i] == 0:
            raise KeyError(user_id)
        return ActivityRecord(
            int(self.n_posts[i]), int(self.first_day[i]), int(self.last_day[i]), float(self.activity[i]), self.window
        )


def compute_activity(posts: PostTable, window: float = 30.0, users=None) -> ActivityTable:
    """A(u) = window / (d_n - d_1) * n, with A(u) = n for a zero-day span."""
    if window <= 0:
        raise ValueError("window must be positive")
    users = np.unique(posts.user) if users is None else np.asarray(users, dtype=np.int64)
    n = len(users)
    idx = np.searchsorted(users, posts.user)
    ok = idx < n
    ok[ok] = users[idx[ok]] == posts.user[ok]
    idx, day = idx[ok], posts.day[ok]
    counts = np.bincount(idx, minlength=n)
    first = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
    last = np.full(n, np.iinfo(np.int64).min, dtype=np.int64)
    np.minimum.at(first, idx, day)
    np.maximum.at(last, idx, day)
    has = counts > 0
    first[~has] = 0
    last[~has] = 0
    span = (last - first).astype(np.float64)
    act = np.full(n, np.nan)
    pos = has & (span > 0)
    act[pos] = window / span[pos] * counts[pos]
    flat = has & (span == 0)
    act[flat] = counts[flat]
    return ActivityTable(users, counts, first, last, act, float(window))


class NormalFit(NamedTuple):
    mu: float
    sigma2: float


def fit_normal(values) -> NormalFit:
    """Sample mean and unbiased sample variance."""
    x = np.asarray(values, dtype=np.float64)
    x = x[~np.isnan(x)]
    if x.size < 2:
        raise ValueError("need at least two values to fit a normal")
    if not np.all(np.isfinite(x)):
        raise ValueError("values must be finite")
    return NormalFit(float(x.mean()), float(x.var(ddof=1)))
