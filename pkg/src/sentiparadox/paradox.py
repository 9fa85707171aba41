"""Paradox engine: per-user comparisons against connection aggregates.

Every analysis is reduced to a :class:`Contexts` object, a CSR list of
comparison *units*.  A unit has an owner (the user whose value is
compared), a member list (the connections it is compared against) and a
group.  Unit statuses are combined per group by strict majority, so the
general paradox (one unit per user), the triad paradox (one unit per
user and triad) and the per-community outcomes of the size/density sweep
(grouped by community) all run through the same kernels.

Contexts depend only on structure and on which users have a defined
value, so the permutation null model builds them once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .community import CommunityIndex
from .graph import ConnectionType, SocialGraph, triad_array, triad_mode_for

EPS = _kernels.EPS


class AggKind(enum.Enum):
    MEAN = "mean"
    MEDIAN = "median"


class ComparisonStatus(enum.IntEnum):
    HOLDS = 1
    DOES_NOT_HOLD = -1
    UNKNOWN = 0


class ParadoxVerdict(enum.Enum):
    STRONGLY_HOLDS = "strongly_holds"
    WEAKLY_HOLDS = "weakly_holds"
    DOES_NOT_HOLD = "does_not_hold"


class Kind(enum.Enum):
    GENERAL = "general"
    TRIAD = "triad"
    COMMON_NEIGHBOR = "common-neighbor"
    COMMUNITY = "community"
    COMMON_INTEREST = "common-interest"
    FRIENDSHIP = "friendship"
    ACTIVITY = "activity"


SENTIMENT_KINDS = (Kind.GENERAL, Kind.TRIAD, Kind.COMMON_NEIGHBOR, Kind.COMMUNITY, Kind.COMMON_INTEREST)


def aggregate(values, agg: AggKind) -> float:
    x = np.asarray(values, dtype=np.float64)
    return float(np.mean(x) if agg is AggKind.MEAN else np.median(x))


def compare_to_connections(value: float, connection_values, agg: AggKind = AggKind.MEAN) -> ComparisonStatus:
    """Status of ``value`` against the mean/median of ``connection_values``."""
    x = np.asarray(connection_values, dtype=np.float64)
    if x.size == 0:
        raise ValueError("no connection values to compare against")
    if not np.all(np.isfinite(x)) or not np.isfinite(value):
        raise ValueError("values must be finite")
    d = value - aggregate(x, agg)
    if d < -EPS:
        return ComparisonStatus.HOLDS
    if d > EPS:
        return ComparisonStatus.DOES_NOT_HOLD
    return ComparisonStatus.UNKNOWN


@dataclass(frozen=True)
class ParadoxStats:
    n_holds: int
    n_not: int
    n_unknown: int
    kind: Kind
    connection: ConnectionType
    agg: AggKind

    @property
    def total(self) -> int:
        return self.n_holds + self.n_not + self.n_unknown

    @property
    def magnitude(self) -> float:
        return self.n_holds / self.total if self.total else 0.0

    @property
    def verdict(self) -> ParadoxVerdict:
        return verdict_of(self.n_holds, self.n_not, self.n_unknown)


def verdict_of(n_holds, n_not, n_unknown) -> ParadoxVerdict:
    total = n_holds + n_not + n_unknown
    if total and n_holds / total > 0.5:
        return ParadoxVerdict.STRONGLY_HOLDS
    if n_holds > n_not and n_holds > n_unknown:
        return ParadoxVerdict.WEAKLY_HOLDS
    return ParadoxVerdict.DOES_NOT_HOLD


@dataclass(frozen=True, eq=False)
class Contexts:
    owner: np.ndarray
    indptr: np.ndarray
    members: np.ndarray
    group: np.ndarray
    n_groups: int

    @property
    def n_units(self) -> int:
        return len(self.owner)

    @property
    def present(self) -> np.ndarray:
        return np.bincount(self.group, minlength=self.n_groups) > 0

    def unit_members(self, i) -> np.ndarray:
        return self.members[self.indptr[i] : self.indptr[i + 1]]


def _csr_units(owner, member, n_groups, group=None):
    """Contexts from (owner, member) rows already ordered so units are contiguous.

    Without ``group`` every distinct owner is one unit, grouped by owner.
    """
    owner = np.asarray(owner, dtype=np.int64)
    member = np.asarray(member, dtype=np.int64)
    if group is None:
        change = np.r_[True, owner[1:] != owner[:-1]] if owner.size else np.zeros(0, bool)
    else:
        group = np.asarray(group, dtype=np.int64)
        change = np.r_[True, (owner[1:] != owner[:-1]) | (group[1:] != group[:-1])] if owner.size else np.zeros(0, bool)
    starts = np.flatnonzero(change)
    indptr = np.r_[starts, owner.size].astype(np.int64)
    u_owner = owner[starts]
    u_group = u_owner if group is None else group[starts]
    return Contexts(u_owner, indptr, member, u_group.astype(np.int64), int(n_groups))


def _defined_mask(values):
    return ~np.isnan(np.asarray(values, dtype=np.float64))


def _edge_rows(g: SocialGraph, t: ConnectionType):
    ptr, idx = g.adjacency(t)
    src = np.repeat(np.arange(g.n_users, dtype=np.int64), np.diff(ptr))
    return src, idx


def general_contexts(g: SocialGraph, t: ConnectionType, defined) -> Contexts:
    src, dst = _edge_rows(g, t)
    keep = defined[src] & defined[dst]
    return _csr_units(src[keep], dst[keep], g.n_users)


def _triad_rows(g: SocialGraph, t: ConnectionType, defined, triads=None):
    """Per (triad, member) comparison rows: owner, triad index, two candidates and masks."""
    if triads is None:
        triads = triad_array(g, triad_mode_for(t))
    k = len(triads)
    owners, tids, a, b = [], [], [], []
    for p in range(3):
        q, r = [(1, 2), (0, 2), (0, 1)][p]
        owners.append(triads[:, p])
        a.append(triads[:, q])
        b.append(triads[:, r])
        tids.append(np.arange(k, dtype=np.int64))
    owner = np.concatenate(owners) if k else np.zeros(0, np.int64)
    tid = np.concatenate(tids) if k else np.zeros(0, np.int64)
    a = np.concatenate(a) if k else np.zeros(0, np.int64)
    b = np.concatenate(b) if k else np.zeros(0, np.int64)
    if t is ConnectionType.FRIENDS:
        ma = np.ones(len(a), bool)
        mb = np.ones(len(b), bool)
    elif t is ConnectionType.FOLLOWEES:
        ma, mb = g.has_follow(owner, a), g.has_follow(owner, b)
    else:
        ma, mb = g.has_follow(a, owner), g.has_follow(b, owner)
    ok = defined[owner]
    ma &= ok & defined[a]
    mb &= ok & defined[b]
    order = np.lexsort((tid, owner))
    return owner[order], tid[order], a[order], b[order], ma[order], mb[order]


def triad_contexts(g: SocialGraph, t: ConnectionType, defined, triads=None) -> Contexts:
    owner, tid, a, b, ma, mb = _triad_rows(g, t, defined, triads)
    live = ma | mb
    owner, tid, a, b, ma, mb = owner[live], tid[live], a[live], b[live], ma[live], mb[live]
    rows_owner = np.stack([owner, owner], axis=1)
    rows_tid = np.stack([tid, tid], axis=1)
    rows_mem = np.stack([a, b], axis=1)
    mask = np.stack([ma, mb], axis=1)
    # units are (owner, triad); groups are owners
    ctx = _csr_units(rows_owner[mask], rows_mem[mask], g.n_users, group=rows_tid[mask])
    return Contexts(ctx.owner, ctx.indptr, ctx.members, ctx.owner.copy(), g.n_users)


def common_neighbor_contexts(g: SocialGraph, t: ConnectionType, defined, triads=None) -> Contexts:
    tri = triad_contexts(g, t, defined, triads)
    owner = np.repeat(tri.owner, np.diff(tri.indptr))
    n = max(g.n_users, 1)
    key = np.unique(owner * n + tri.members)
    return _csr_units(key // n, key % n, g.n_users)


def _membership_rows(g: SocialGraph, t: ConnectionType, communities: CommunityIndex, defined):
    """``(u, c, v)`` rows: v is a type-t connection of u and a co-member in c."""
    ptr, idx = g.adjacency(t)
    rows = _kernels.shared_keys(ptr, idx, communities.user_ptr, communities.user_comm)
    keep = defined[rows[:, 0]] & defined[rows[:, 2]]
    rows = rows[keep]
    order = np.lexsort((rows[:, 2], rows[:, 1], rows[:, 0]))
    return rows[order]


def community_contexts(g, t, communities: CommunityIndex, defined, by_community=False) -> Contexts:
    rows = _membership_rows(g, t, communities, defined)
    u, c, v = rows[:, 0], rows[:, 1], rows[:, 2]
    if by_community:
        order = np.lexsort((v, u, c))
        u, c, v = u[order], c[order], v[order]
        return _csr_units(u, v, communities.n_communities, group=c)
    ctx = _csr_units(u, v, g.n_users, group=c)
    # group by owner; the community id only delimits units
    return Contexts(ctx.owner, ctx.indptr, ctx.members, ctx.owner.copy(), g.n_users)


def common_interest_contexts(g, t, communities: CommunityIndex, defined) -> Contexts:
    rows = _membership_rows(g, t, communities, defined)
    n = max(g.n_users, 1)
    key = np.unique(rows[:, 0] * n + rows[:, 2])
    return _csr_units(key // n, key % n, g.n_users)


def build_contexts(kind: Kind, g: SocialGraph, t: ConnectionType, defined, communities=None, triads=None) -> Contexts:
    defined = np.asarray(defined, dtype=bool)
    if kind in (Kind.GENERAL, Kind.FRIENDSHIP, Kind.ACTIVITY):
        return general_contexts(g, t, defined)
    if kind is Kind.TRIAD:
        return triad_contexts(g, t, defined, triads)
    if kind is Kind.COMMON_NEIGHBOR:
        return common_neighbor_contexts(g, t, defined, triads)
    if communities is None:
        raise ValueError(f"{kind.value} paradox needs a CommunityIndex")
    if kind is Kind.COMMUNITY:
        return community_contexts(g, t, communities, defined)
    if kind is Kind.COMMON_INTEREST:
        return common_interest_contexts(g, t, communities, defined)
    raise ValueError(f"unknown analysis {kind!r}")


@dataclass(frozen=True, eq=False)
class PreparedAnalysis:
    """An analysis with structure fixed; only the value assignment may change."""

    kind: Kind
    connection: ConnectionType
    agg: AggKind
    contexts: Contexts
    values: np.ndarray

    @property
    def defined(self) -> np.ndarray:
        return _defined_mask(self.values)

    def unit_status(self, values=None) -> np.ndarray:
        v = self.values if values is None else np.asarray(values, dtype=np.float64)
        ctx = self.contexts
        agg = np.empty(ctx.n_units)
        _kernels.segment_aggregate(v, ctx.members, ctx.indptr, self.agg is AggKind.MEDIAN, agg)
        st = np.empty(ctx.n_units, dtype=np.int8)
        return _kernels.unit_status(v, ctx.owner, agg, EPS, st)

    def group_status(self, values=None) -> tuple[np.ndarray, np.ndarray]:
        """(present mask, status per group) with statuses in {+1, -1, 0}."""
        ctx = self.contexts
        out = np.empty(ctx.n_groups, dtype=np.int8)
        _kernels.group_status(self.unit_status(values), ctx.group, ctx.n_groups, out)
        return ctx.present, out

    def counts(self, values=None) -> tuple[int, int, int]:
        v = self.values if values is None else np.asarray(values, dtype=np.float64)
        ctx = self.contexts
        return _kernels.evaluate_counts(
            v, ctx.owner, ctx.members, ctx.indptr, ctx.group, ctx.n_groups, ctx.present, self.agg is AggKind.MEDIAN, EPS
        )

    def stats(self, values=None) -> ParadoxStats:
        h, d, k = self.counts(values)
        return ParadoxStats(int(h), int(d), int(k), self.kind, self.connection, self.agg)


def as_values(x) -> np.ndarray:
    """SWB/activity table or bare array -> float array with NaN for undefined."""
    for attr in ("swb", "activity"):
        if hasattr(x, attr):
            return np.asarray(getattr(x, attr), dtype=np.float64)
    return np.asarray(x, dtype=np.float64)


def prepare(kind: Kind, g: SocialGraph, values, t: ConnectionType, agg: AggKind, communities=None, triads=None):
    values = as_values(values)
    if len(values) != g.n_users:
        raise ValueError(f"{len(values)} values for {g.n_users} users")
    ctx = build_contexts(kind, g, t, _defined_mask(values), communities, triads)
    return PreparedAnalysis(kind, t, agg, ctx, values)


def general_paradox(g, swb, t=ConnectionType.FRIENDS, agg=AggKind.MEAN) -> ParadoxStats:
    return prepare(Kind.GENERAL, g, swb, t, agg).stats()


def triad_paradox(g, swb, t=ConnectionType.FRIENDS, agg=AggKind.MEAN) -> ParadoxStats:
    return prepare(Kind.TRIAD, g, swb, t, agg).stats()


def common_neighbor_paradox(g, swb, t=ConnectionType.FRIENDS, agg=AggKind.MEAN) -> ParadoxStats:
    return prepare(Kind.COMMON_NEIGHBOR, g, swb, t, agg).stats()


def community_paradox(g, swb, communities, t=ConnectionType.FRIENDS, agg=AggKind.MEAN) -> ParadoxStats:
    return prepare(Kind.COMMUNITY, g, swb, t, agg, communities).stats()


def common_interest_paradox(g, swb, communities, t=ConnectionType.FRIENDS, agg=AggKind.MEAN) -> ParadoxStats:
    return prepare(Kind.COMMON_INTEREST, g, swb, t, agg, communities).stats()


def friendship_paradox(g, t=ConnectionType.FRIENDS, agg=AggKind.MEAN) -> ParadoxStats:
    return prepare(Kind.FRIENDSHIP, g, g.degree(t).astype(np.float64), t, agg).stats()


def activity_paradox(g, activity, t=ConnectionType.FRIENDS, agg=AggKind.MEAN) -> ParadoxStats:
    return prepare(Kind.ACTIVITY, g, activity, t, agg).stats()


def run_analysis(kind: Kind, g, values, t, agg, communities=None) -> ParadoxStats:
    if kind is Kind.FRIENDSHIP:
        return friendship_paradox(g, t, agg)
    return prepare(kind, g, values, t, agg, communities).stats()
