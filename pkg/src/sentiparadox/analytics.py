"""Sentiment vs. degree/activity correlations, group means, trends and the community sweep."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ._kernels import shared_keys
from .community import CommunityIndex
from .graph import ConnectionType, SocialGraph
from .ingest import Polarity
from .nullmodel import NullConfig, permuted_assignment
from .paradox import AggKind, Kind, PreparedAnalysis, as_values, community_contexts
from .sentiment import polarity_codes


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p_value: float
    n: int


def pearson(x, y) -> CorrelationResult:
    """Product-moment correlation with a two-sided t-test p-value."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d and of equal length")
    n = len(x)
    if n < 3:
        raise ValueError("need at least 3 points")
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise ValueError("zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return CorrelationResult(r, 0.0, n)
    tstat = r * math.sqrt((n - 2) / (1 - r * r))
    p = float(2 * stats.t.sf(abs(tstat), n - 2))
    return CorrelationResult(r, min(1.0, p), n)


def format_p(p: float) -> str:
    return "< 1e-300" if p < 1e-300 else f"{p:.6g}"


GROUPS = (Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.NEUTRAL)
DEGREE_COLUMNS = (ConnectionType.FRIENDS, ConnectionType.FOLLOWEES, ConnectionType.FOLLOWERS)


@dataclass(frozen=True)
class GroupDegreeTable:
    """Mean friends/followees/followers per polarity group; ``None`` for empty groups."""

    rows: dict
    counts: dict
    band: tuple[float, float] | None = None

    def mean(self, group: str, t: ConnectionType):
        return self.rows[group][t]


def group_degree_means(swb, g: SocialGraph, band=None) -> GroupDegreeTable:
    values = as_values(swb)
    ok = ~np.isnan(values)
    if band is not None:
        lo, hi = band
        ok &= (values >= lo) & (values <= hi)
    codes = polarity_codes(values)
    code_of = {Polarity.POSITIVE: 1, Polarity.NEGATIVE: -1, Polarity.NEUTRAL: 0}
    rows, counts = {}, {}
    masks = {p.label: ok & (codes == code_of[p]) for p in GROUPS}
    masks["Overall"] = ok
    for name, m in masks.items():
        counts[name] = int(m.sum())
        rows[name] = {t: (float(g.degree(t)[m].mean()) if m.any() else None) for t in DEGREE_COLUMNS}
    return GroupDegreeTable(rows, counts, None if band is None else (float(band[0]), float(band[1])))


@dataclass(frozen=True)
class TrendBin:
    lower: float
    upper: float
    n: int
    mean_y: float


@dataclass(frozen=True)
class TrendResult:
    bins: list
    slope: float | None
    intercept: float | None
    n_fit: int
    fit_band: tuple[float, float]


def ols(x, y):
    """Least-squares slope and intercept; ``(None, None)`` if x is constant."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) < 2:
        return None, None
    dx = x - x.mean()
    sxx = float(dx @ dx)
    if sxx == 0:
        return None, None
    slope = float(dx @ (y - y.mean())) / sxx
    return slope, float(y.mean() - slope * x.mean())


def binned_trend(x, y, bin_width: float = 0.05, fit_band=(-0.5, 0.5)) -> TrendResult:
    """Per-bin mean of y over x bins ``[k w, (k+1) w)`` plus an OLS fit inside ``fit_band``."""
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    ok = ~(np.isnan(x) | np.isnan(y))
    x, y = x[ok], y[ok]
    # round to tame representation error at bin edges (e.g. 0.15 / 0.05)
    k = np.floor(np.round(x / bin_width, 9)).astype(np.int64)
    bins = []
    for b in np.unique(k).tolist():
        m = k == b
        bins.append(TrendBin(b * bin_width, (b + 1) * bin_width, int(m.sum()), float(y[m].mean())))
    lo, hi = fit_band if fit_band is not None else (-np.inf, np.inf)
    inside = (x >= lo) & (x <= hi)
    slope, intercept = ols(x[inside], y[inside])
    return TrendResult(bins, slope, intercept, int(inside.sum()), (float(lo), float(hi)))


def swb_activity_relation(swb, activity, bin_width: float = 0.05, fit_band=(-0.5, 0.5)) -> TrendResult:
    return binned_trend(as_values(swb), as_values(activity), bin_width, fit_band)


class Axis(enum.Enum):
    SIZE = "size"
    DENSITY = "density"


@dataclass(frozen=True)
class SweepBucket:
    axis: Axis
    lower: float
    upper: float
    n_communities: int
    prop_holds: float
    prop_not: float
    prop_unknown: float
    expected_prop_holds: float


@dataclass(frozen=True, eq=False)
class CommunityOutcomes:
    """Per-community paradox outcome; ``evaluable`` marks communities with any comparison."""

    status: np.ndarray
    evaluable: np.ndarray
    size: np.ndarray
    density: np.ndarray
    prepared: PreparedAnalysis


def community_outcomes(g, swb, communities: CommunityIndex, t=ConnectionType.FRIENDS, agg=AggKind.MEAN):
    values = as_values(swb)
    ctx = community_contexts(g, t, communities, ~np.isnan(values), by_community=True)
    prep = PreparedAnalysis(Kind.COMMUNITY, t, agg, ctx, values)
    present, status = prep.group_status()
    return CommunityOutcomes(status, present, communities.sizes(), community_edge_counts(g, communities, t), prep)


def community_edge_counts(g: SocialGraph, communities: CommunityIndex, t: ConnectionType) -> np.ndarray:
    """In-community relationship counts (undirected friendships or directed follows)."""
    ptr, idx = g.adjacency(t)
    rows = shared_keys(ptr, idx, communities.user_ptr, communities.user_comm)
    counts = np.bincount(rows[:, 1], minlength=communities.n_communities)
    return counts // 2 if t is ConnectionType.FRIENDS else counts


def community_sweep(
    g,
    swb,
    communities: CommunityIndex,
    t=ConnectionType.FRIENDS,
    agg=AggKind.MEAN,
    axis: Axis = Axis.SIZE,
    bounds=(1, 1200),
    n_buckets: int = 12,
    null: NullConfig | None = NullConfig(100, 0),
) -> list[SweepBucket]:
    """Observed and permutation-expected share of communities where the paradox holds.

    Communities with no member having an in-community connection have no
    outcome and are left out.  Buckets split ``bounds`` evenly; the last
    bucket is closed on the right.
    """
    lo, hi = bounds
    if n_buckets < 1 or not hi > lo:
        raise ValueError("invalid bounds or bucket count")
    out = community_outcomes(g, swb, communities, t, agg)
    key = (out.size if axis is Axis.SIZE else out.density).astype(np.float64)
    edges = np.linspace(lo, hi, n_buckets + 1)
    within = out.evaluable & (key >= lo) & (key <= hi)
    b = np.clip(np.searchsorted(edges, key, side="right") - 1, 0, n_buckets - 1)

    expected = np.full(n_buckets, np.nan)
    if null is not None and within.any():
        expected = _null_bucket_holds(out.prepared, null, b, within, n_buckets)
    buckets = []
    for i in range(n_buckets):
        m = within & (b == i)
        k = int(m.sum())
        if k:
            st = out.status[m]
            ph, pn, pu = (float(np.mean(st == 1)), float(np.mean(st == -1)), float(np.mean(st == 0)))
        else:
            ph = pn = pu = float("nan")
        buckets.append(SweepBucket(axis, float(edges[i]), float(edges[i + 1]), k, ph, pn, pu, float(expected[i]) if k else float("nan")))
    return buckets


def _null_bucket_holds(prep: PreparedAnalysis, cfg: NullConfig, bucket, within, n_buckets):
    """Mean over replicates of each bucket's share of holding communities."""
    sums = np.zeros(n_buckets)
    sizes = np.bincount(bucket[within], minlength=n_buckets).astype(np.float64)
    for r in range(cfg.replicates):
        _, st = prep.group_status(permuted_assignment(prep.values, cfg.seed, r))
        sums += np.bincount(bucket[within], weights=(st[within] == 1).astype(np.float64), minlength=n_buckets)
    with np.errstate(invalid="ignore", divide="ignore"):
        return sums / (cfg.replicates * sizes)
