"""Synthetic networks and SWB assignments for simulation checks."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .community import CommunityIndex
from .graph import ConnectionType, SocialGraph
from .paradox import AggKind, Kind, prepare

logger = logging.getLogger(__name__)


class Model(enum.Enum):
    ER = "er"
    CONFIG_POWER_LAW = "powerlaw"
    PLANTED_COMMUNITIES = "planted"


@dataclass(frozen=True)
class GenSpec:
    """Generator parameters; only the fields relevant to ``model`` are read.

    ``kmax=None`` means the structural cutoff ``floor(sqrt(n))``.  Follow
    edges orient each friend edge at random, reciprocated with
    probability ``reciprocity``.
    """

    model: Model
    n: int
    seed: int = 0
    p: float = 0.0
    gamma: float = 2.5
    kmin: int = 1
    kmax: int | None = None
    n_communities: int = 10
    community_size: int = 20
    p_in: float = 0.3
    p_out: float = 0.0
    reciprocity: float = 0.5
    follows: bool = True

    def validate(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        for name in ("p", "p_in", "p_out", "reciprocity"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.model is Model.CONFIG_POWER_LAW:
            if self.gamma <= 1:
                raise ValueError("power-law exponent must exceed 1")
            if self.kmin < 1:
                raise ValueError("degrees must be >= 1")
            kmax = self.resolved_kmax
            if kmax < self.kmin:
                raise ValueError("kmax < kmin")
            if kmax > self.n - 1:
                raise ValueError(f"infeasible degree sequence: kmax={kmax} exceeds n-1={self.n - 1}")
        if self.model is Model.PLANTED_COMMUNITIES:
            if self.community_size > self.n or self.community_size < 1 or self.n_communities < 1:
                raise ValueError("invalid community count/size")
        return self

    @property
    def resolved_kmax(self) -> int:
        return int(np.sqrt(self.n)) if self.kmax is None else self.kmax


def _rng(seed, *key):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def er_edges(n, p, rng) -> np.ndarray:
    """G(n, p) undirected edges as canonical ``(i, j)``, ``i < j``."""
    if n < 2 or p <= 0:
        return np.zeros((0, 2), dtype=np.int64)
    if n <= 3000 or p > 0.05:
        iu, ju = np.triu_indices(n, 1)
        keep = rng.random(len(iu)) < p
        return np.stack([iu[keep], ju[keep]], axis=1).astype(np.int64)
    total = n * (n - 1) // 2
    return gnm_edges(n, int(rng.binomial(total, p)), rng)


def gnm_edges(n, m, rng) -> np.ndarray:
    """Exactly ``m`` distinct undirected edges drawn uniformly, canonical and sorted."""
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise ValueError(f"cannot place {m} edges on {n} nodes")
    seen = np.zeros(0, dtype=np.int64)
    while len(seen) < m:
        need = int((m - len(seen)) * 1.1) + 16
        a = rng.integers(0, n, need)
        b = rng.integers(0, n, need)
        ok = a != b
        lo, hi = np.minimum(a[ok], b[ok]), np.maximum(a[ok], b[ok])
        seen = np.unique(np.r_[seen, lo * n + hi])
    # trim uniformly so the edge count is exactly m
    seen = np.sort(rng.choice(seen, size=m, replace=False))
    return np.stack([seen // n, seen % n], axis=1)


def powerlaw_degrees(n, gamma, kmin, kmax, rng) -> np.ndarray:
    """i.i.d. floored Pareto(gamma) draws on [kmin, kmax + 1), even sum.

    Flooring a continuous power law keeps the CCDF at integer k exactly
    proportional to k^-(gamma-1) below the cutoff.
    """
    a = float(gamma) - 1.0
    tail = ((kmax + 1) / kmin) ** (-a)
    u = rng.random(n)
    deg = np.floor(kmin * (1.0 - u * (1.0 - tail)) ** (-1.0 / a)).astype(np.int64)
    deg = np.clip(deg, kmin, kmax)
    if deg.sum() % 2:
        i = int(rng.integers(n))
        deg[i] += 1 if deg[i] < kmax else -1
    return deg.astype(np.int64)


def configuration_edges(deg, rng) -> np.ndarray:
    """Random stub matching; self-loops and multi-edges are erased."""
    deg = np.asarray(deg, dtype=np.int64)
    if deg.sum() % 2:
        raise ValueError("degree sequence has odd sum")
    stubs = np.repeat(np.arange(len(deg), dtype=np.int64), deg)
    rng.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    return np.unique(np.sort(pairs, axis=1), axis=0).reshape(-1, 2)


def orient(edges, reciprocity, rng) -> np.ndarray:
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    both = rng.random(len(edges)) < reciprocity
    flip = rng.random(len(edges)) < 0.5
    one = edges[~both]
    one = np.where(flip[~both, None], one[:, ::-1], one)
    two = edges[both]
    return np.concatenate([one, two, two[:, ::-1]])


def generate_network(spec: GenSpec) -> tuple[SocialGraph, CommunityIndex | None]:
    """Graph (and planted memberships, for that model) for ``spec``; deterministic per seed."""
    spec.validate()
    rng = _rng(spec.seed, 0)
    comms = None
    if spec.model is Model.ER:
        edges = er_edges(spec.n, spec.p, rng)
    elif spec.model is Model.CONFIG_POWER_LAW:
        deg = powerlaw_degrees(spec.n, spec.gamma, spec.kmin, spec.resolved_kmax, rng)
        edges = configuration_edges(deg, rng)
    elif spec.model is Model.PLANTED_COMMUNITIES:
        parts, mem_u, mem_c = [], [], []
        for c in range(spec.n_communities):
            members = np.sort(rng.choice(spec.n, size=spec.community_size, replace=False))
            mem_u.append(members)
            mem_c.append(np.full(len(members), c, dtype=np.int64))
            local = er_edges(len(members), spec.p_in, rng)
            parts.append(members[local])
        parts.append(er_edges(spec.n, spec.p_out, rng))
        edges = np.unique(np.concatenate(parts), axis=0).reshape(-1, 2)
        comms = CommunityIndex.from_pairs(spec.n, np.concatenate(mem_u), np.concatenate(mem_c))
    else:
        raise ValueError(f"unknown model {spec.model!r}")
    follows = orient(edges, spec.reciprocity, _rng(spec.seed, 1)) if spec.follows else ()
    return SocialGraph.from_edges(spec.n, edges, follows), comms


def generate_graph(spec: GenSpec) -> SocialGraph:
    return generate_network(spec)[0]


def random_memberships(n_users, n_communities, per_user, seed) -> CommunityIndex:
    """Each user joins ``per_user`` distinct communities drawn uniformly."""
    rng = _rng(seed, 2)
    per_user = min(per_user, n_communities)
    users = np.repeat(np.arange(n_users, dtype=np.int64), per_user)
    comms = np.concatenate([rng.choice(n_communities, size=per_user, replace=False) for _ in range(n_users)]) if n_users else np.zeros(0, np.int64)
    return CommunityIndex.from_pairs(n_users, users, comms, community_ids=np.arange(n_communities))


class SwbMode(enum.Enum):
    IID_NORMAL = "iid"
    DEGREE_COUPLED = "coupled"


@dataclass(frozen=True)
class SwbAssignment:
    """How to draw synthetic SWB values.

    ``homophily`` > 0 blends each value with its friends' mean before
    rescaling, which makes connection SWB informative of own SWB.
    """

    mode: SwbMode = SwbMode.IID_NORMAL
    mu: float = 0.0
    sigma2: float = 0.08
    rho: float = 0.0
    seed: int = 0
    homophily: float = 0.0
    connection: ConnectionType = ConnectionType.FRIENDS

    def validate(self):
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be >= 0")
        if not -1.0 <= self.rho <= 1.0:
            raise ValueError("rho must lie in [-1, 1]")
        if not 0.0 <= self.homophily < 1.0:
            raise ValueError("homophily must lie in [0, 1)")
        return self

    def with_seed(self, seed) -> "SwbAssignment":
        return SwbAssignment(self.mode, self.mu, self.sigma2, self.rho, seed, self.homophily, self.connection)


def _pearson(x, y):
    sx, sy = x.std(), y.std()
    if sx == 0 or sy == 0:
        return 0.0
    return float(np.mean((x - x.mean()) * (y - y.mean())) / (sx * sy))


def _coupled(deg, a: SwbAssignment, rng):
    n = len(deg)
    sigma = np.sqrt(a.sigma2)
    noise = rng.normal(size=n)
    d = deg.astype(np.float64)
    if d.std() == 0 or sigma == 0:
        return np.clip(a.mu + sigma * noise, -1, 1)
    signal = (d - d.mean()) / d.std() * np.sign(a.rho)
    target = abs(a.rho)
    scale = sigma

    def draw(w):
        return np.clip(a.mu + scale * (w * signal + np.sqrt(1 - w * w) * noise), -1, 1)

    # clamping hubs caps the reachable correlation; shrink the amplitude until
    # the target is comfortably inside reach
    for _ in range(30):
        if abs(_pearson(draw(1.0), d)) >= min(1.0, target + 0.5 * (1 - target)) or scale < 1e-6:
            break
        scale *= 0.7
    if scale < sigma:
        logger.info("degree coupling amplitude reduced to %.4g for rho=%.3f", scale, a.rho)
    lo, hi = 0.0, 1.0
    if abs(_pearson(draw(1.0), d)) < target:
        logger.warning("degree coupling cannot reach rho=%.3f on this graph", a.rho)
        return draw(1.0)
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if abs(_pearson(draw(mid), d)) < target:
            lo = mid
        else:
            hi = mid
    return draw(hi)


def assign_swb(g: SocialGraph, a: SwbAssignment) -> np.ndarray:
    """Synthetic SWB per user, clamped to [-1, 1]."""
    a.validate()
    rng = _rng(a.seed, 3)
    n = g.n_users
    if a.mode is SwbMode.IID_NORMAL:
        x = np.clip(rng.normal(a.mu, np.sqrt(a.sigma2), n), -1, 1)
    elif a.mode is SwbMode.DEGREE_COUPLED:
        x = _coupled(g.degree(a.connection), a, rng)
    else:
        raise ValueError(f"unknown mode {a.mode!r}")
    if a.homophily > 0 and n:
        ptr, idx = g.adjacency(a.connection)
        deg = np.diff(ptr)
        sums = np.add.reduceat(x[idx], ptr[:-1][deg > 0]) if idx.size else np.zeros(0)
        nbr = x.copy()
        nbr[deg > 0] = sums / deg[deg > 0]
        y = (1 - a.homophily) * x + a.homophily * nbr
        sd = y.std()
        if sd > 0:
            y = a.mu + (y - y.mean()) * np.sqrt(a.sigma2) / sd
        x = np.clip(y, -1, 1)
    return x


@dataclass(frozen=True)
class TheoremCheckReport:
    """Grand means of S(u) minus the connection mean/median, over runs."""

    runs: int
    mean_diff: float
    median_diff: float
    sigma_c2: float
    per_run_mean: tuple[float, ...] = field(repr=False)
    per_run_median: tuple[float, ...] = field(repr=False)
    magnitude: float = float("nan")
    tolerance: float = 0.01

    @property
    def holds(self) -> bool:
        return abs(self.mean_diff) < self.tolerance and abs(self.median_diff) < self.tolerance


def connection_aggregates(g: SocialGraph, values, t: ConnectionType, agg: AggKind):
    """(users, aggregate of their connections' values) for users with connections."""
    prep = prepare(Kind.GENERAL, g, values, t, agg)
    ctx = prep.contexts
    out = np.empty(ctx.n_units)
    _kernels.segment_aggregate(prep.values, ctx.members, ctx.indptr, agg is AggKind.MEDIAN, out)
    return ctx.owner, out


def theorem1_check(graphs, a: SwbAssignment, runs: int = 20, t=ConnectionType.FRIENDS, tolerance=0.01) -> TheoremCheckReport:
    """Simulate the user-vs-connections comparison under assignment ``a``.

    ``graphs`` is one graph reused each run or a sequence with one graph
    per run.  Run ``r`` draws values with seed ``(a.seed, r)``.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if isinstance(graphs, SocialGraph):
        graphs = [graphs] * runs
    graphs = list(graphs)
    if len(graphs) != runs:
        raise ValueError("need one graph per run")
    means, medians, aggs, mags = [], [], [], []
    for r, g in enumerate(graphs):
        x = assign_swb(g, a.with_seed(int(np.random.SeedSequence(a.seed, spawn_key=(r,)).generate_state(1)[0])))
        u, m = connection_aggregates(g, x, t, AggKind.MEAN)
        u2, md = connection_aggregates(g, x, t, AggKind.MEDIAN)
        means.append(float(np.mean(x[u] - m)) if len(u) else 0.0)
        medians.append(float(np.mean(x[u2] - md)) if len(u2) else 0.0)
        aggs.append(m)
        mags.append(prepare(Kind.GENERAL, g, x, t, AggKind.MEAN).stats().magnitude)
    pooled = np.concatenate(aggs)
    return TheoremCheckReport(
        runs=runs,
        mean_diff=float(np.mean(means)),
        median_diff=float(np.mean(medians)),
        sigma_c2=float(pooled.var(ddof=1)) if len(pooled) > 1 else 0.0,
        per_run_mean=tuple(means),
        per_run_median=tuple(medians),
        magnitude=float(np.mean(mags)),
        tolerance=tolerance,
    )


__all__ = [
    "GenSpec",
    "Model",
    "SwbAssignment",
    "SwbMode",
    "TheoremCheckReport",
    "assign_swb",
    "generate_graph",
    "generate_network",
    "gnm_edges",
    "random_memberships",
    "theorem1_check",
]
